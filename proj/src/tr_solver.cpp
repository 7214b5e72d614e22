#include "uktr/tr_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "uktr/ellipsoid.hpp"
#include "uktr/set_management.hpp"
#include "uktr/simplex_geometry.hpp"

namespace uktr {

namespace {

constexpr double kRadiusFloor = 1e-14;
constexpr double kPredGuard = 1e-14;  // below this the ratio test is meaningless
constexpr double kMinSeparation = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

double update_radius(double rho, double delta, double delta0, const SolverConfig& cfg) {
    const double floor = std::max(cfg.delta_min, kRadiusFloor);
    const double cap = cfg.delta_max < 0.0 ? 3.0 * delta0 : cfg.delta_max;
    if (rho <= cfg.eta1) return std::max(cfg.gamma1 * delta, floor);
    if (rho <= cfg.eta2) return delta;
    return std::min(cfg.gamma2 * delta, cap);
}

bool check_fully_linear(const PointList& affine_subset, const dvec& center, double radius,
                        double theta1, double mu1) {
    if (!(radius > 0.0)) return false;
    const int n = static_cast<int>(center.size());
    if (static_cast<int>(affine_subset.size()) < n + 1) return false;

    PointList scaled;
    for (const auto& x : affine_subset) {
        dvec z = (x - center) / radius;
        if (z.norm() <= theta1) scaled.push_back(std::move(z));
    }
    if (static_cast<int>(scaled.size()) < n + 1) return false;
    scaled.resize(n + 1);

    const double target = regular_simplex_volume(n, inscribed_edge_length(n, 1.0));
    return simplex_volume(scaled) >= mu1 * target * (1.0 - 1e-9);
}

dvec minimize_on_ball(const SurrogateModel& model, std::uint64_t seed, double tol) {
    const int n = model.dim();
    const dvec origin = dvec::Zero(n);
    const double f0 = model.predict(origin);

    auto project = [](dvec u) {
        const double r = u.norm();
        if (r > 1.0) u /= r;
        return u;
    };

    std::vector<dvec> starts;
    starts.push_back(origin);
    {
        const dvec g0 = model.gradient(origin);
        const double gn = g0.norm();
        if (gn > 0.0 && std::isfinite(gn)) starts.push_back(dvec(-g0 / gn));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 6; ++i) {
        dvec d(n);
        for (int j = 0; j < n; ++j) d(j) = gauss(rng);
        const double dn = d.norm();
        if (dn == 0.0) continue;
        starts.push_back(dvec(d * (std::pow(unif(rng), 1.0 / n) / dn)));
    }

    dvec best = origin;
    double best_f = f0;

    for (const dvec& s0 : starts) {
        dvec u = s0;
        double fu = model.predict(u);
        double step = 0.25;
        for (int it = 0; it < 400; ++it) {
            const dvec g = model.gradient(u);
            if (!g.allFinite()) break;

            // Newton candidate while strictly inside the ball.
            bool moved = false;
            if (u.norm() < 1.0 - 1e-9) {
                Eigen::LDLT<dmat> ldlt(model.hessian(u));
                if (ldlt.info() == Eigen::Success) {
                    const dvec nd = ldlt.solve(-g);
                    if (nd.allFinite()) {
                        const dvec cand = project(u + nd);
                        const double fc = model.predict(cand);
                        if (fc < fu) {
                            const double move = (cand - u).norm();
                            u = cand;
                            fu = fc;
                            moved = true;
                            if (move <= tol) break;
                        }
                    }
                }
            }
            if (moved) continue;

            // Projected gradient with backtracking.
            double t = step;
            bool descended = false;
            double move = 0.0;
            for (int ls = 0; ls < 60; ++ls) {
                const dvec cand = project(u - t * g);
                const double fc = model.predict(cand);
                if (fc < fu) {
                    move = (cand - u).norm();
                    u = cand;
                    fu = fc;
                    step = std::min(2.0 * t, 1e3);
                    descended = true;
                    break;
                }
                t *= 0.5;
            }
            if (!descended || move <= tol) break;
        }
        if (fu < best_f) {
            best_f = fu;
            best = u;
        }
    }

    return best_f <= f0 ? best : origin;
}

RunRecord solve(const std::function<double(const dvec&)>& f, const dvec& x0,
                const SolverConfig& cfg) {
    const int n = static_cast<int>(x0.size());
    if (n < 1) throw std::invalid_argument("solve: empty start point");
    if (cfg.budget < 1) throw std::invalid_argument("solve: budget must be positive");
    if (!(cfg.delta0 > 0.0)) throw std::invalid_argument("solve: delta0 must be positive");
    if (cfg.lower.size() && cfg.lower.size() != n)
        throw std::invalid_argument("solve: lower bound dimension mismatch");
    if (cfg.upper.size() && cfg.upper.size() != n)
        throw std::invalid_argument("solve: upper bound dimension mismatch");

    auto clip = [&](dvec x) {
        if (cfg.lower.size())
            for (int i = 0; i < n; ++i) x(i) = std::max(x(i), cfg.lower(i));
        if (cfg.upper.size())
            for (int i = 0; i < n; ++i) x(i) = std::min(x(i), cfg.upper(i));
        return x;
    };

    RunRecord rec;
    rec.x_best = x0;
    EvaluationLedger ledger;
    std::string stop;

    // Evaluates through the ledger; replays cached sites for free.
    auto evaluate = [&](const dvec& x) -> std::optional<double> {
        if (auto hit = ledger.lookup(x)) return hit;
        if (rec.evals >= cfg.budget) {
            stop = "budget";
            return std::nullopt;
        }
        const double v = f(x);
        ++rec.evals;
        ledger.record(x, v);
        if (std::isfinite(v) && v < rec.f_best) {
            rec.f_best = v;
            rec.x_best = x;
        }
        rec.best_history.push_back(rec.f_best);
        if (rec.f_best <= cfg.f_target) stop = "target";
        return v;
    };

    dvec x_curr = clip(x0);
    const auto first = evaluate(x_curr);
    if (!first || !std::isfinite(*first))
        throw std::invalid_argument("solve: objective not finite at the start point");
    double f_curr = *first;

    double delta = cfg.delta0;
    dmat b = dmat::Identity(n, n);
    const bool gaussian = cfg.kernel.kind == kernels::Rbf::gaussian;
    dvec weights = gaussian && cfg.tune
                       ? dvec::Constant(n, std::exp(0.5 * (std::log(cfg.tune_lo) +
                                                           std::log(cfg.tune_hi))))
                       : dvec::Ones(n);

    double gradient_radius = -1.0;  // radius the fully-linear re-check ran at

    for (int k = 0; stop.empty(); ++k) {
        const AffineMap map = build_map(x_curr, b, delta);
        if (cfg.record_frames) {
            rec.frames.push_back(map.a);
            rec.curvatures.push_back(b);
        }

        IterationRow row;
        row.iter = k;
        row.delta = delta;
        row.lambda = map.lambda;

        // Reusable history, expressed in the current frame.
        PointList cand_u;
        std::vector<double> cand_f;
        for (const auto& [site, value] : ledger.entries()) {
            if (!std::isfinite(value)) continue;
            dvec u = map.to_unit(site);
            if (u.norm() <= 1e-12) continue;  // the center itself
            cand_u.push_back(std::move(u));
            cand_f.push_back(value);
        }

        const ExpandResult geo = expand2volume(n, cand_u, cfg.theta1, cfg.mu1);
        row.fresh_count = static_cast<int>(geo.fresh.size());

        // Interpolation set: center, retained history, fresh geometry points.
        PointList set_u;
        std::vector<double> set_f;
        PointList affine_x;  // the affine subset in original coordinates
        auto try_add = [&](const dvec& u, double value) {
            for (const auto& m : set_u)
                if ((m - u).norm() < kMinSeparation) return false;
            set_u.push_back(u);
            set_f.push_back(value);
            return true;
        };
        try_add(dvec::Zero(n), f_curr);
        for (int idx : geo.kept) {
            if (try_add(cand_u[idx], cand_f[idx]))
                affine_x.push_back(map.to_original(cand_u[idx]));
        }
        for (const dvec& u : geo.fresh) {
            const dvec x = clip(map.to_original(u));
            const auto v = evaluate(x);
            if (!v || !stop.empty()) break;  // budget or target died mid-batch
            if (!std::isfinite(*v)) continue;
            if (try_add(map.to_unit(x), *v)) affine_x.push_back(x);
        }
        if (!stop.empty()) break;

        // Recycle older evaluations while the fit stays well conditioned.
        {
            PointList extra_u;
            std::vector<double> extra_f;
            for (std::size_t i = 0; i < cand_u.size(); ++i) {
                if (cand_u[i].norm() > cfg.theta2) continue;
                bool member = false;
                for (const auto& m : set_u)
                    if ((m - cand_u[i]).norm() < kMinSeparation) {
                        member = true;
                        break;
                    }
                if (!member) {
                    extra_u.push_back(cand_u[i]);
                    extra_f.push_back(cand_f[i]);
                }
            }
            // The admission test measures point geometry, so it runs at a
            // fixed reference shape instead of the tuned weights; a tuned
            // near-flat kernel would otherwise veto every extra point.
            const dvec w_ref = dvec::Constant(
                n, std::exp(0.5 * (std::log(cfg.tune_lo) + std::log(cfg.tune_hi))));
            for (int idx : recycle_extra_points(set_u, extra_u, cfg.kernel, w_ref, cfg.theta2,
                                                cfg.q_max)) {
                set_u.push_back(extra_u[idx]);
                set_f.push_back(extra_f[idx]);
            }
        }

        row.q = static_cast<int>(set_u.size());
        if (static_cast<int>(set_u.size()) < n + 2) {
            // Too few usable sites (non-finite values or box-collapsed points).
            delta = update_radius(-1.0, delta, cfg.delta0, cfg);
            row.rho = -1.0;
            row.evals = rec.evals;
            row.f_best = rec.f_best;
            rec.iterations.push_back(row);
            if (delta <= kRadiusFloor * (1.0 + 1e-9)) stop = "radius";
            continue;
        }

        dvec fv = Eigen::Map<const dvec>(set_f.data(), static_cast<Eigen::Index>(set_f.size()));
        if (gaussian && cfg.tune)
            // The weight box tracks the original coordinates, so in the unit
            // frame its floor contracts with the radius. Leaving the ceiling
            // at the configured value keeps curvature representable once the
            // radius drops below the precision limit of a near-flat kernel.
            weights = tune_weights(set_u, fv, cfg.kernel,
                                   cfg.tune_lo * std::min(delta * delta, 1.0), cfg.tune_hi);
        const SurrogateModel model(set_u, fv, cfg.kernel, weights);

        // First-order stop: small model gradient plus a fully linear model on
        // the matching ball.
        if (cfg.eps_g > 0.0) {
            const dvec g_orig = map.a_inv.transpose() * model.gradient(dvec::Zero(n));
            if (g_orig.norm() <= 0.5 * cfg.eps_g) {
                const double r = cfg.eps_g / (2.0 * cfg.kappa_g);
                row.evals = rec.evals;
                row.f_best = rec.f_best;
                if (check_fully_linear(affine_x, x_curr, r, cfg.theta1, cfg.mu1) ||
                    gradient_radius == r) {
                    rec.iterations.push_back(row);
                    stop = "gradient";
                    break;
                }
                gradient_radius = r;
                delta = r;
                rec.iterations.push_back(row);
                continue;
            }
        }

        const dvec s_u = minimize_on_ball(model, cfg.seed + static_cast<std::uint64_t>(k));
        const double pred = model.predict(dvec::Zero(n)) - model.predict(s_u);

        const dvec x_new = clip(map.to_original(s_u));
        const auto f_new = evaluate(x_new);
        if (!f_new) break;

        double rho;
        if (!std::isfinite(*f_new))
            rho = -kInf;
        else if (std::abs(pred) < kPredGuard)
            rho = -1.0;
        else
            rho = (f_curr - *f_new) / pred;

        const bool accepted = std::isfinite(*f_new) && *f_new < f_curr;
        row.rho = rho;
        row.accepted = accepted;
        row.evals = rec.evals;
        row.f_best = rec.f_best;

        delta = update_radius(rho, delta, cfg.delta0, cfg);

        if (accepted) {
            if (cfg.mu2 < 1.0) {
                const dmat b_hat = hessian_to_original(map, model.hessian(s_u));
                b = filter_hessian(b, b_hat, cfg.mu2);
            }
            x_curr = x_new;
            f_curr = *f_new;
        }

        rec.iterations.push_back(row);
        if (stop.empty() && delta <= kRadiusFloor * (1.0 + 1e-9)) stop = "radius";
    }

    rec.stop_reason = stop;
    return rec;
}

} // namespace uktr
