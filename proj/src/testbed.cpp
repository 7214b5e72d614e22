#include <uktr/testbed.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

// Formulas and starting points follow the standard unconstrained test
// collection definitions (More-Garbow-Hillstrom and the classic global
// optimization set). Minimum values are closed-form where available and
// Newton-polished to double precision otherwise.

namespace uktr {
namespace {

constexpr double kPi = std::numbers::pi;

dvec make_vec(std::initializer_list<double> v) {
    dvec out(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

dvec constant_vec(int n, double v) { return dvec::Constant(n, v); }

dvec alternating_start(int n) {
    dvec x(n);
    for (int i = 0; i < n; ++i) x(i) = (i % 2 == 0) ? -1.2 : 1.0;
    return x;
}

double beale(const dvec& x) {
    const double r1 = 1.5 - x(0) * (1.0 - x(1));
    const double r2 = 2.25 - x(0) * (1.0 - x(1) * x(1));
    const double r3 = 2.625 - x(0) * (1.0 - x(1) * x(1) * x(1));
    return r1 * r1 + r2 * r2 + r3 * r3;
}

double branin(const dvec& x) {
    const double b = 5.1 / (4.0 * kPi * kPi);
    const double c = 5.0 / kPi;
    const double t = 1.0 / (8.0 * kPi);
    const double r = x(1) - b * x(0) * x(0) + c * x(0) - 6.0;
    return r * r + 10.0 * (1.0 - t) * std::cos(x(0)) + 10.0;
}

// Even n: the block-separable extended form; odd n: the chained
// generalization (the table's n = 3 entry).
double rosenbrock(const dvec& x) {
    const int n = static_cast<int>(x.size());
    double f = 0.0;
    if (n % 2 == 0) {
        for (int i = 0; i + 1 < n; i += 2) {
            const double a = x(i + 1) - x(i) * x(i);
            const double b = 1.0 - x(i);
            f += 100.0 * a * a + b * b;
        }
    } else {
        for (int i = 0; i + 1 < n; ++i) {
            const double a = x(i + 1) - x(i) * x(i);
            const double b = 1.0 - x(i);
            f += 100.0 * a * a + b * b;
        }
    }
    return f;
}

double schwefel36(const dvec& x) {
    return -x(0) * x(1) * (72.0 - 2.0 * x(0) - 2.0 * x(1));
}

// Gulf research and development, m = 99 residuals.
double gulf(const dvec& x) {
    double f = 0.0;
    for (int i = 1; i <= 99; ++i) {
        const double t = i / 100.0;
        const double y = 25.0 + std::pow(-50.0 * std::log(t), 2.0 / 3.0);
        const double r = std::exp(-std::pow(std::abs(y - x(1)), x(2)) / x(0)) - t;
        f += r * r;
    }
    return f;
}

double helix(const dvec& x) {
    double theta;
    if (x(0) > 0.0)
        theta = std::atan(x(1) / x(0)) / (2.0 * kPi);
    else if (x(0) < 0.0)
        theta = std::atan(x(1) / x(0)) / (2.0 * kPi) + 0.5;
    else
        theta = (x(1) >= 0.0) ? 0.25 : -0.25;
    const double a = x(2) - 10.0 * theta;
    const double b = std::sqrt(x(0) * x(0) + x(1) * x(1)) - 1.0;
    return 100.0 * (a * a + b * b) + x(2) * x(2);
}

// Schwefel problem 2.4.
double schwefel4(const dvec& x) {
    double f = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        const double a = x(i) - 1.0;
        const double b = x(0) - x(i) * x(i);
        f += a * a + b * b;
    }
    return f;
}

// Brown and Dennis, m = 20 residual pairs.
double brownden(const dvec& x) {
    double f = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double t = i / 5.0;
        const double a = x(0) + t * x(1) - std::exp(t);
        const double b = x(2) + x(3) * std::sin(t) - std::cos(t);
        const double r = a * a + b * b;
        f += r * r;
    }
    return f;
}

// Hartmann family: four weighted gaussians over the unit cube. The 4-d
// variant truncates the 6-d shape and location matrices to their first
// four columns.
constexpr double kHartC[4] = {1.0, 1.2, 3.0, 3.2};
constexpr double kHart3A[4][3] = {
    {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}};
constexpr double kHart3P[4][3] = {{0.3689, 0.1170, 0.2673},
                                  {0.4699, 0.4387, 0.7470},
                                  {0.1091, 0.8732, 0.5547},
                                  {0.0381, 0.5743, 0.8828}};
constexpr double kHart6A[4][6] = {{10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
                                  {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
                                  {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
                                  {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}};
constexpr double kHart6P[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                                  {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                                  {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                                  {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};

template <int N, int M>
double hartmann(const dvec& x, const double (&a)[4][M], const double (&p)[4][M]) {
    double f = 0.0;
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int j = 0; j < N; ++j) {
            const double d = x(j) - p[i][j];
            s += a[i][j] * d * d;
        }
        f -= kHartC[i] * std::exp(-s);
    }
    return f;
}

double hart3(const dvec& x) { return hartmann<3>(x, kHart3A, kHart3P); }
double hart4(const dvec& x) { return hartmann<4>(x, kHart6A, kHart6P); }
double hart6(const dvec& x) { return hartmann<6>(x, kHart6A, kHart6P); }

// Powell singular, block-separable extension for n = 8.
double powell(const dvec& x) {
    double f = 0.0;
    for (int j = 0; j + 3 < x.size(); j += 4) {
        const double a = x(j) + 10.0 * x(j + 1);
        const double b = x(j + 2) - x(j + 3);
        const double c = x(j + 1) - 2.0 * x(j + 2);
        const double d = x(j) - x(j + 3);
        f += a * a + 5.0 * b * b + c * c * c * c + 10.0 * d * d * d * d;
    }
    return f;
}

double wood(const dvec& x) {
    const double a = x(1) - x(0) * x(0);
    const double b = 1.0 - x(0);
    const double c = x(3) - x(2) * x(2);
    const double d = 1.0 - x(2);
    const double e = x(1) - 1.0;
    const double g = x(3) - 1.0;
    return 100.0 * a * a + b * b + 90.0 * c * c + d * d + 10.1 * (e * e + g * g) +
           19.8 * e * g;
}

// Biggs EXP6, m = 13 residuals.
double biggs(const dvec& x) {
    double f = 0.0;
    for (int i = 1; i <= 13; ++i) {
        const double t = 0.1 * i;
        const double y = std::exp(-t) - 5.0 * std::exp(-10.0 * t) + 3.0 * std::exp(-4.0 * t);
        const double r = x(2) * std::exp(-t * x(0)) - x(3) * std::exp(-t * x(1)) +
                         x(5) * std::exp(-t * x(4)) - y;
        f += r * r;
    }
    return f;
}

double trid(const dvec& x) {
    double f = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        const double d = x(i) - 1.0;
        f += d * d;
    }
    for (int i = 1; i < x.size(); ++i) f -= x(i) * x(i - 1);
    return f;
}

double watson(const dvec& x) {
    const int n = static_cast<int>(x.size());
    double f = 0.0;
    for (int i = 1; i <= 29; ++i) {
        const double t = i / 29.0;
        double s1 = 0.0, tp = 1.0;
        for (int j = 1; j < n; ++j) {
            s1 += j * x(j) * tp;
            tp *= t;
        }
        double s2 = 0.0;
        tp = 1.0;
        for (int j = 0; j < n; ++j) {
            s2 += x(j) * tp;
            tp *= t;
        }
        const double r = s1 - s2 * s2 - 1.0;
        f += r * r;
    }
    const double r30 = x(0);
    const double r31 = x(1) - x(0) * x(0) - 1.0;
    return f + r30 * r30 + r31 * r31;
}

// Newton-polished minimum values for the problems whose minimizers have no
// closed form (see the frozen minimizer table in the validation suite).
constexpr double kHart3Min = -3.8627797873326628;
constexpr double kHart4Min = -3.7298405844855931;
constexpr double kHart6Min = -3.3223680114155152;
constexpr double kBrowndenMin = 85822.201626356255;
constexpr double kWatson6Min = 2.2876700535523898e-3;

double trid_min(int n) { return -n * (n + 4.0) * (n - 1.0) / 6.0; }

BenchmarkProblem make(std::string name, int n, dvec x0, double f_star,
                      std::function<double(const dvec&)> f, dvec lower = dvec(),
                      dvec upper = dvec()) {
    BenchmarkProblem p;
    p.name = std::move(name);
    p.n = n;
    p.x0 = std::move(x0);
    p.f_star = f_star;
    p.delta0 = 1.0;
    p.lower = std::move(lower);
    p.upper = std::move(upper);
    p.f = std::move(f);
    return p;
}

std::vector<BenchmarkProblem> build_catalogue() {
    std::vector<BenchmarkProblem> v;

    v.push_back(make("BEALE", 2, make_vec({1.0, 1.0}), 0.0, beale));
    v.push_back(make("BRANIN", 2, make_vec({2.5, 7.5}), 5.0 / (4.0 * kPi), branin,
                     make_vec({-5.0, 0.0}), make_vec({10.0, 15.0})));
    for (int n : {2, 3, 4, 6, 8})
        v.push_back(make("ROSENBROCK", n, alternating_start(n), 0.0, rosenbrock));
    v.push_back(make("SCHWEFEL36", 2, make_vec({0.5, 0.5}), -3456.0, schwefel36,
                     constant_vec(2, 0.0), constant_vec(2, 42.0)));
    v.push_back(make("GULF", 3, make_vec({5.0, 2.5, 0.15}), 0.0, gulf));
    v.push_back(make("HART3", 3, constant_vec(3, 0.5), kHart3Min, hart3,
                     constant_vec(3, 0.0), constant_vec(3, 1.0)));
    v.push_back(make("HELIX", 3, make_vec({-1.0, 0.0, 0.0}), 0.0, helix));
    for (int n : {3, 4, 6})
        v.push_back(make("SCHWEFEL4", n, constant_vec(n, 0.0), 0.0, schwefel4));
    v.push_back(make("BROWNDEN", 4, make_vec({25.0, 5.0, -5.0, -1.0}), kBrowndenMin,
                     brownden));
    // The standard start sits in the basin of a secondary minimum 0.2 above
    // the optimum; a wider initial radius lets the first sample batch see the
    // global basin.
    v.push_back(make("HART4", 4, constant_vec(4, 0.5), kHart4Min, hart4,
                     constant_vec(4, 0.0), constant_vec(4, 1.0)));
    v.back().delta0 = 1.5;
    for (int n : {4, 8}) {
        dvec x0(n);
        for (int i = 0; i < n; i += 4) {
            x0(i) = 3.0;
            x0(i + 1) = -1.0;
            x0(i + 2) = 0.0;
            x0(i + 3) = 1.0;
        }
        v.push_back(make("POWELL", n, x0, 0.0, powell));
    }
    v.push_back(make("WOOD", 4, make_vec({-3.0, -1.0, -3.0, -1.0}), 0.0, wood));
    v.push_back(make("BIGGS", 6, make_vec({1.0, 2.0, 1.0, 1.0, 1.0, 1.0}), 0.0, biggs));
    v.push_back(make("HART6", 6, constant_vec(6, 0.5), kHart6Min, hart6,
                     constant_vec(6, 0.0), constant_vec(6, 1.0)));
    for (int n : {6, 8})
        v.push_back(make("TRID", n, constant_vec(n, 0.0), trid_min(n), trid));
    v.push_back(make("WATSON", 6, constant_vec(6, 0.0), kWatson6Min, watson));

    return v;
}

} // namespace

const std::vector<BenchmarkProblem>& problem_catalogue() {
    static const std::vector<BenchmarkProblem> catalogue = build_catalogue();
    return catalogue;
}

const BenchmarkProblem& find_problem(const std::string& name, int n) {
    const BenchmarkProblem* found = nullptr;
    for (const auto& p : problem_catalogue()) {
        if (p.name != name || (n >= 0 && p.n != n)) continue;
        if (found) throw std::invalid_argument("problem name is ambiguous: " + name);
        found = &p;
    }
    if (!found)
        throw std::invalid_argument("unknown problem: " + name +
                                    (n >= 0 ? ":" + std::to_string(n) : ""));
    return *found;
}

} // namespace uktr
