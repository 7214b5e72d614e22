#include "uktr/simplex_geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "uktr/kernels.hpp"

namespace uktr {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

double simplex_volume(const PointList& pts) {
    if (pts.empty()) throw std::invalid_argument("simplex_volume: empty point list");
    const int n = static_cast<int>(pts.front().size());
    if (static_cast<int>(pts.size()) != n + 1)
        throw std::invalid_argument("simplex_volume: need dim+1 points");
    dmat m(n, n);
    for (int j = 0; j < n; ++j) m.col(j) = pts[j + 1] - pts[0];
    return std::abs(m.determinant()) / factorial(n);
}

double regular_simplex_volume(int n, double edge) {
    if (n < 1) throw std::invalid_argument("regular_simplex_volume: n < 1");
    return std::sqrt(n + 1.0) / factorial(n) * std::pow(edge / std::sqrt(2.0), n);
}

double inscribed_edge_length(int n, double radius) {
    if (n < 1) throw std::invalid_argument("inscribed_edge_length: n < 1");
    return std::sqrt(2.0) * std::sqrt(n + 1.0) / std::sqrt(static_cast<double>(n)) * radius;
}

SimplexFactors sub_simplex_factors(int n, int m, double radius) {
    if (n < 1 || m < 1 || m > n) throw std::invalid_argument("sub_simplex_factors: need 1 <= m <= n");
    SimplexFactors f;
    f.n = n;
    f.m = m;
    f.edge_length = inscribed_edge_length(n, radius);
    f.circum_radius = std::sqrt(m * (n + 1.0) / ((m + 1.0) * n)) * radius;
    f.offset = std::sqrt((n - m) / ((m + 1.0) * n)) * radius;
    return f;
}

PointList regsim(int n, int m) {
    if (n < 1 || m < 0 || m > n) throw std::invalid_argument("regsim: need n >= 1, 0 <= m <= n");
    PointList out;
    out.reserve(m + 1);
    if (m == 0) {
        dvec p = dvec::Zero(n);
        p[0] = 1.0;
        out.push_back(p);
        return out;
    }
    // Standard-simplex embedding: center the m+1 identity vertices of R^{m+1},
    // normalize onto the unit sphere, express them in an orthonormal basis of
    // the hyperplane orthogonal to the all-ones vector, then zero-pad to R^n.
    const int d = m + 1;
    dvec ones = dvec::Ones(d);
    Eigen::HouseholderQR<dmat> qr(ones);
    dmat qfull = qr.householderQ();
    dmat basis = qfull.rightCols(m); // orthonormal complement of ones
    const double scale = std::sqrt(m / static_cast<double>(d)); // |e_i - centroid|
    for (int i = 0; i < d; ++i) {
        dvec v = -dvec::Ones(d) / d;
        v[i] += 1.0;
        dvec c = basis.transpose() * v / scale;
        dvec p = dvec::Zero(n);
        p.head(m) = c;
        out.push_back(p);
    }
    return out;
}

std::pair<dmat, dmat> orthonormal_bases(const dmat& a, double rank_tol) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() == 0) return {dmat(n, 0), dmat::Identity(n, n)};
    Eigen::ColPivHouseholderQR<dmat> qr(a);
    qr.setThreshold(rank_tol);
    const int r = static_cast<int>(qr.rank());
    dmat qfull = qr.householderQ();
    return {qfull.leftCols(r), qfull.rightCols(n - r)};
}

double theta_star(const PointList& pts, double radius, std::uint64_t seed, double tol) {
    if (pts.empty()) throw std::invalid_argument("theta_star: empty point list");
    if (radius <= 0.0) throw std::invalid_argument("theta_star: radius <= 0");
    const int n = static_cast<int>(pts.front().size());
    const int q = static_cast<int>(pts.size());
    const PointBlock block = PointBlock::from(pts);
    const kernels::Table& kt = kernels::active();
    const dvec unit_w = dvec::Ones(n);

    std::vector<double> r2(q), r(q), inv(q);
    auto mean_dist = [&](const dvec& x) {
        kt.wsqdist(x.data(), block.data.data(), unit_w.data(), n, q, r2.data());
        kt.sqrt_vec(r2.data(), q, r.data());
        return kt.sum(r.data(), q) / q;
    };
    auto ascent_grad = [&](const dvec& x, dvec& g) {
        // gradient of the mean distance; members coincident with x contribute 0
        kt.wsqdist(x.data(), block.data.data(), unit_w.data(), n, q, r2.data());
        kt.sqrt_vec(r2.data(), q, r.data());
        double s = 0.0;
        for (int k = 0; k < q; ++k) {
            inv[k] = r[k] > 1e-15 ? 1.0 / r[k] : 0.0;
            s += inv[k];
        }
        for (int j = 0; j < n; ++j)
            g[j] = (x[j] * s - kt.dot(inv.data(), block.row(j), q)) / q;
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<dvec> starts;
    for (int j = 0; j < n; ++j) {
        dvec e = dvec::Zero(n);
        e[j] = radius;
        starts.push_back(e);
        starts.push_back(-e);
    }
    for (int s = 0; s < 64 * n; ++s) {
        dvec v(n);
        for (int j = 0; j < n; ++j) v[j] = gauss(rng);
        double nv = v.norm();
        if (nv < 1e-12) { v.setZero(); v[0] = 1.0; nv = 1.0; }
        starts.push_back(v * (radius / nv));
    }

    double best = 0.0;
    dvec g(n);
    for (const dvec& s0 : starts) {
        dvec x = s0;
        double fx = mean_dist(x);
        double step = radius;
        for (int it = 0; it < 400 && step > tol * 1e-4 * radius; ++it) {
            ascent_grad(x, g);
            dvec y = x + step * g;
            const double ny = y.norm();
            if (ny < 1e-15) { step *= 0.5; continue; }
            y *= radius / ny;
            const double fy = mean_dist(y);
            if (fy > fx) {
                x = y;
                fx = fy;
                step *= 1.4;
            } else {
                step *= 0.5;
            }
        }
        if (fx > best) best = fx;
    }
    return best;
}

} // namespace uktr
