#include "uktr/surrogate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace uktr {

namespace {

constexpr double kCondWarn = 1e12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Phi(i, k) = phi(|z_i - z_k|_w), assembled row-wise through the batched
// kernel entry points, then symmetrized to strip reduction-order round-off.
dmat assemble_phi(const PointList& pts, const PointBlock& block,
                  const kernels::RbfParams& kernel, const dvec& weights) {
    const int q = block.q, n = block.n;
    const kernels::Table& kt = kernels::active();
    dmat phi(q, q);
    std::vector<double> r2(q), row(q);
    for (int i = 0; i < q; ++i) {
        kt.wsqdist(pts[i].data(), block.data.data(), weights.data(), n, q, r2.data());
        kt.rbf_d0(kernel, r2.data(), q, row.data());
        for (int k = 0; k < q; ++k) phi(i, k) = row[k];
    }
    phi = 0.5 * (phi + phi.transpose()).eval();
    return phi;
}

dmat assemble_tail(const PointList& pts, int n) {
    const int q = static_cast<int>(pts.size());
    dmat pi(q, n + 1);
    for (int i = 0; i < q; ++i) {
        pi.row(i).head(n) = pts[i].transpose();
        pi(i, n) = 1.0;
    }
    return pi;
}

} // namespace

SurrogateModel::SurrogateModel(const PointList& pts, const dvec& f,
                               kernels::RbfParams kernel, const dvec& weights)
    : kernel_(kernel), weights_(weights), points_(pts) {
    q_ = static_cast<int>(pts.size());
    if (q_ == 0) throw std::invalid_argument("surrogate: empty point list");
    n_ = static_cast<int>(pts.front().size());
    for (const auto& p : pts)
        if (p.size() != n_) throw std::invalid_argument("surrogate: inconsistent dimensions");
    if (f.size() != q_) throw std::invalid_argument("surrogate: point/value count mismatch");
    if (q_ < n_ + 2) throw std::invalid_argument("surrogate: need at least n+2 points");
    if (weights_.size() != n_ || (weights_.array() <= 0.0).any())
        throw std::invalid_argument("surrogate: weights must be positive, one per coordinate");

    centers_ = PointBlock::from(pts);
    const dmat phi = assemble_phi(points_, centers_, kernel_, weights_);
    const dmat pi = assemble_tail(points_, n_);

    {
        Eigen::ColPivHouseholderQR<dmat> qr(pi);
        qr.setThreshold(1e-10);
        if (qr.rank() < n_ + 1)
            throw std::runtime_error("surrogate: points do not span affinely (ill-poised set)");
    }

    const int m = q_ + n_ + 1;
    dmat saddle = dmat::Zero(m, m);
    saddle.topLeftCorner(q_, q_) = phi;
    saddle.topRightCorner(q_, n_ + 1) = pi;
    saddle.bottomLeftCorner(n_ + 1, q_) = pi.transpose();
    dvec rhs = dvec::Zero(m);
    rhs.head(q_) = f;

    Eigen::PartialPivLU<dmat> lu(saddle);
    const dvec sol = lu.solve(rhs);
    alpha_ = sol.head(q_);
    beta_ = sol.tail(n_ + 1);

    const double rc = lu.rcond();
    diag_.condition_estimate = rc > 0.0 ? std::max(1.0, 1.0 / rc) : kInf;
    diag_.ill_conditioned = !(diag_.condition_estimate < kCondWarn);

    // f - Pi b = Phi a, so the quadratic form collapses to a dot product
    diag_.sigma2 = std::max(0.0, alpha_.dot(f - pi * beta_) / q_);

    Eigen::PartialPivLU<dmat> lu_phi(phi);
    double log_det = 0.0;
    bool det_ok = true;
    for (int i = 0; i < q_ && det_ok; ++i) {
        const double d = std::abs(lu_phi.matrixLU()(i, i));
        if (d <= 0.0 || !std::isfinite(d))
            det_ok = false;
        else
            log_det += std::log(d);
    }
    const double score = det_ok ? std::exp(log_det / q_) * diag_.sigma2 : kInf;
    diag_.likelihood_score = std::isfinite(score) ? score : kInf;
}

double SurrogateModel::predict(const dvec& x) const {
    if (x.size() != n_) throw std::invalid_argument("surrogate: dimension mismatch");
    const kernels::Table& kt = kernels::active();
    std::vector<double> r2(q_), phi(q_);
    kt.wsqdist(x.data(), centers_.data.data(), weights_.data(), n_, q_, r2.data());
    kt.rbf_d0(kernel_, r2.data(), q_, phi.data());
    return kt.dot(phi.data(), alpha_.data(), q_) + beta_.head(n_).dot(x) + beta_[n_];
}

dvec SurrogateModel::gradient(const dvec& x) const {
    if (x.size() != n_) throw std::invalid_argument("surrogate: dimension mismatch");
    const kernels::Table& kt = kernels::active();
    std::vector<double> r2(q_), phi(q_), w(q_), aw(q_);
    kt.wsqdist(x.data(), centers_.data.data(), weights_.data(), n_, q_, r2.data());
    kt.rbf_d1(kernel_, r2.data(), q_, phi.data(), w.data());
    for (int k = 0; k < q_; ++k) aw[k] = alpha_[k] * w[k];
    const double tw = kt.sum(aw.data(), q_);
    // grad phi_i = w_i * G (x - z_i) with G = diag(weights)
    dvec g = beta_.head(n_);
    for (int j = 0; j < n_; ++j)
        g[j] += weights_[j] * (x[j] * tw - kt.dot(aw.data(), centers_.row(j), q_));
    return g;
}

dmat SurrogateModel::hessian(const dvec& x) const {
    if (x.size() != n_) throw std::invalid_argument("surrogate: dimension mismatch");
    const kernels::Table& kt = kernels::active();
    std::vector<double> r2(q_), phi(q_), w(q_), c(q_), aw(q_), ac(q_);
    kt.wsqdist(x.data(), centers_.data.data(), weights_.data(), n_, q_, r2.data());
    kt.rbf_d2(kernel_, r2.data(), q_, phi.data(), w.data(), c.data());
    for (int k = 0; k < q_; ++k) {
        aw[k] = alpha_[k] * w[k];
        ac[k] = alpha_[k] * c[k];
    }
    const double tw = kt.sum(aw.data(), q_);
    const double tc = kt.sum(ac.data(), q_);
    // hess phi_i = c_i G (x - z_i)(x - z_i)^T G + w_i G; expand the dyad sums
    // into moments of the centers so each entry is one weighted reduction.
    dvec bc(n_);
    for (int j = 0; j < n_; ++j) bc[j] = kt.dot(ac.data(), centers_.row(j), q_);
    dmat h(n_, n_);
    for (int j = 0; j < n_; ++j) {
        for (int l = j; l < n_; ++l) {
            const double s = kt.wdot(ac.data(), centers_.row(j), centers_.row(l), q_);
            const double m = x[j] * x[l] * tc - x[j] * bc[l] - x[l] * bc[j] + s;
            h(j, l) = h(l, j) = weights_[j] * weights_[l] * m;
        }
        h(j, j) += weights_[j] * tw;
    }
    return h;
}

double tuning_objective(const PointList& pts, const dvec& f, kernels::RbfParams kernel,
                        const dvec& weights) {
    const SurrogateModel model(pts, f, kernel, weights);
    if (model.diagnostics().ill_conditioned) return kInf;
    const double score = model.diagnostics().likelihood_score;
    return std::isfinite(score) ? score : kInf;
}

dvec tune_weights(const PointList& pts, const dvec& f, kernels::RbfParams kernel,
                  double w_lo, double w_hi) {
    if (!(w_lo > 0.0) || !(w_lo <= w_hi))
        throw std::invalid_argument("tune_weights: need 0 < w_lo <= w_hi");
    if (pts.empty()) throw std::invalid_argument("tune_weights: empty point list");
    const int n = static_cast<int>(pts.front().size());
    if (w_lo == w_hi) return dvec::Constant(n, w_lo);

    const double l_lo = std::log(w_lo), l_hi = std::log(w_hi);
    dvec base = dvec::Constant(n, 0.5 * (l_lo + l_hi));
    auto score = [&](const dvec& logw) {
        return tuning_objective(pts, f, kernel, logw.array().exp().matrix());
    };
    double base_score = score(base);

    double span = 0.5 * (l_hi - l_lo);
    for (int sweep = 0; sweep < 3; ++sweep) {
        // every coordinate scans its seven levels against the same base, so
        // the result is independent of coordinate order
        dvec proposal = base;
        for (int j = 0; j < n; ++j) {
            double best_level = base[j], best_score = base_score;
            dvec trial = base;
            for (int k = -3; k <= 3; ++k) {
                if (k == 0) continue;
                const double level =
                    std::min(l_hi, std::max(l_lo, base[j] + span * (k / 3.0)));
                trial[j] = level;
                const double s = score(trial);
                if (s < best_score) {
                    best_score = s;
                    best_level = level;
                }
            }
            proposal[j] = best_level;
        }
        const double proposal_score = score(proposal);
        if (proposal_score < base_score) {
            base = proposal;
            base_score = proposal_score;
        }
        span /= 3.0;
    }
    return base.array().exp().matrix();
}

} // namespace uktr
