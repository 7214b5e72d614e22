#pragma once

#include <uktr/kernels.hpp>
#include <uktr/types.hpp>

// Radial-basis interpolant with a full linear tail, the model the trust-region
// loop minimizes. Centers live in the unit-ball coordinates of the current
// frame; anisotropy enters only through per-coordinate distance weights, so
// the same fitted object serves both the isotropic kernels (weights all one)
// and the tuned gaussian kernel.

namespace uktr {

struct FitDiagnostics {
    double condition_estimate = 1.0;  // saddle-matrix condition estimate, >= 1
    double sigma2 = 0.0;              // process-variance estimate (f - P b)^T a / q
    double likelihood_score = 0.0;    // det(Phi)^(1/q) * sigma2, what the tuner minimizes
    bool ill_conditioned = false;     // condition above 1e12; fit still returned
};

class SurrogateModel {
  public:
    // Needs q >= n+2 points whose affine span is full (std::invalid_argument /
    // std::runtime_error otherwise) and positive per-coordinate weights.
    SurrogateModel(const PointList& pts, const dvec& f, kernels::RbfParams kernel,
                   const dvec& weights);

    double predict(const dvec& x) const;
    dvec gradient(const dvec& x) const;
    dmat hessian(const dvec& x) const;

    int dim() const { return n_; }
    int size() const { return q_; }
    const dvec& radial_coeff() const { return alpha_; }
    const dvec& tail_coeff() const { return beta_; }  // [linear part; constant]
    const FitDiagnostics& diagnostics() const { return diag_; }
    const dvec& distance_weights() const { return weights_; }
    const kernels::RbfParams& kernel() const { return kernel_; }
    const PointList& centers() const { return points_; }

  private:
    int n_ = 0, q_ = 0;
    kernels::RbfParams kernel_;
    dvec weights_;
    PointBlock centers_;
    PointList points_;
    dvec alpha_;
    dvec beta_;
    FitDiagnostics diag_;
};

// Model-selection score det(Phi)^(1/q) * sigma2 for a candidate weight vector;
// smaller is better. Numerically singular candidates score +infinity.
double tuning_objective(const PointList& pts, const dvec& f, kernels::RbfParams kernel,
                        const dvec& weights);

// Deterministic coordinate pattern search on log-spaced weights inside
// [w_lo, w_hi]: three sweeps, seven levels per coordinate, coordinates
// scanned independently against the sweep base so symmetric inputs produce
// identical weights on every axis.
dvec tune_weights(const PointList& pts, const dvec& f, kernels::RbfParams kernel,
                  double w_lo = 1e-2, double w_hi = 1e-1);

} // namespace uktr
