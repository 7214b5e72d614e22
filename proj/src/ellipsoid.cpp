#include "uktr/ellipsoid.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace uktr {

dvec AffineMap::to_original(const dvec& u) const {
    if (spherical) return center + radius * u;
    return center + a * u;
}

dvec AffineMap::to_unit(const dvec& x) const {
    if (spherical) return (x - center) / radius;
    return a_inv * (x - center);
}

namespace {

// Geometric mean of |eigenvalues|, each clamped into [maxabs / cap, maxabs]
// so a zero or tiny eigenvalue cannot zero out the scale.
double spectrum_scale(const dvec& ev, double cap) {
    const double maxabs = ev.cwiseAbs().maxCoeff();
    if (!(maxabs > 0.0)) return 0.0;
    double log_sum = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        log_sum += std::log(std::min(maxabs, std::max(std::abs(ev(i)), maxabs / cap)));
    return std::exp(log_sum / static_cast<double>(ev.size()));
}

} // namespace

dmat filter_hessian(const dmat& b_prev, const dmat& b_hat, double mu2, double cond_cap,
                    bool* skipped) {
    if (mu2 < 0.0 || mu2 > 1.0) throw std::invalid_argument("filter_hessian: mu2 outside [0, 1]");
    if (!(cond_cap >= 1.0)) throw std::invalid_argument("filter_hessian: cap below 1");
    if (skipped) *skipped = false;
    if (mu2 == 1.0) return b_prev;

    // The frame built from B is invariant to B's overall scale, so only the
    // shape of the estimate is blended. Normalizing first keeps a magnitude
    // spike in the estimate (the pullback amplifies model noise by delta^-2
    // at small radii) from steamrolling the accumulated shape.
    const dmat sym = 0.5 * (b_hat + b_hat.transpose());
    if (!sym.allFinite()) {
        if (skipped) *skipped = true;
        return b_prev;
    }
    Eigen::SelfAdjointEigenSolver<dmat> hat_es(sym);
    const double hat_scale = spectrum_scale(hat_es.eigenvalues(), cond_cap);
    if (!(hat_scale > 0.0) || !std::isfinite(hat_scale)) {
        if (skipped) *skipped = true;
        return b_prev;
    }

    const dmat blend = mu2 * b_prev + ((1.0 - mu2) / hat_scale) * sym;

    Eigen::SelfAdjointEigenSolver<dmat> es(blend);
    dvec ev = es.eigenvalues();
    if (!(ev.maxCoeff() > 0.0)) {
        if (skipped) *skipped = true;
        return b_prev;
    }

    // Push the spectrum into [max / cap, max], then rescale to unit geometric
    // mean; the cap bounds the frame's axis ratio at sqrt(cond_cap).
    const double floor = ev.maxCoeff() / cond_cap;
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), floor);
    const double gm = std::exp(ev.array().log().sum() / static_cast<double>(ev.size()));
    const dmat lifted = es.eigenvectors() * (ev / gm).asDiagonal() * es.eigenvectors().transpose();
    return 0.5 * (lifted + lifted.transpose());
}

AffineMap build_map(const dvec& center, const dmat& b, double radius) {
    const Eigen::Index n = center.size();
    if (n < 1) throw std::invalid_argument("build_map: empty center");
    if (b.rows() != n || b.cols() != n) throw std::invalid_argument("build_map: dimension mismatch");
    if (!(radius > 0.0)) throw std::invalid_argument("build_map: radius must be positive");

    AffineMap map;
    map.center = center;
    map.radius = radius;

    if (b.isIdentity(0.0)) {
        map.spherical = true;
        map.lambda = radius;
        map.a = radius * dmat::Identity(n, n);
        map.a_inv = dmat::Identity(n, n) / radius;
        return map;
    }

    Eigen::SelfAdjointEigenSolver<dmat> es(0.5 * (b + b.transpose()));
    const dvec sig = es.eigenvalues();
    if (!(sig.minCoeff() > 0.0))
        throw std::runtime_error("build_map: frame matrix is not positive definite");

    // Isovolumetric scaling: lambda^n * prod(sigma^-1/2) = radius^n.
    const double lambda = radius * std::exp(sig.array().log().sum() / (2.0 * static_cast<double>(n)));
    map.spherical = false;
    map.lambda = lambda;
    map.a = lambda * es.eigenvectors() * sig.cwiseSqrt().cwiseInverse().asDiagonal();
    map.a_inv = (1.0 / lambda) * sig.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    return map;
}

dmat bfgs_update(const dmat& b, const dvec& s, const dvec& y, bool* skipped) {
    const double sy = y.dot(s);
    if (sy <= 1e-8 * s.norm() * y.norm()) {
        if (skipped) *skipped = true;
        return b;
    }
    if (skipped) *skipped = false;

    const dvec bs = b * s;
    const double sbs = s.dot(bs);
    dmat next = b + (y * y.transpose()) / sy;
    if (sbs > 0.0) next -= (bs * bs.transpose()) / sbs;
    return 0.5 * (next + next.transpose());
}

dmat hessian_to_original(const AffineMap& map, const dmat& hess_unit) {
    return map.a_inv.transpose() * hess_unit * map.a_inv;
}

} // namespace uktr
