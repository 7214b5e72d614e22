#pragma once

#include <uktr/kernels.hpp>
#include <uktr/surrogate.hpp>
#include <uktr/types.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

// Derivative-free trust-region loop: per iteration the evaluation history is
// reduced to a well-poised interpolation set in the current frame, a radial
// surrogate is fitted (gaussian kernels get their distance weights tuned),
// its minimizer over the unit ball proposes the step, and the classic
// ratio test drives acceptance and the radius.

namespace uktr {

struct SolverConfig {
    // geometry and acceptance
    double theta1 = 1.25;   // affine-subset periphery, as a multiple of the radius
    double theta2 = 10.0;   // recycle radius for extra history points
    double eta1 = 0.0;      // failure threshold on the ratio test
    double eta2 = 0.6;      // success threshold on the ratio test
    double gamma1 = 0.5;    // radius contraction
    double gamma2 = 2.0;    // radius expansion
    double delta_min = 0.0; // lower radius clip (a 1e-14 floor always applies)
    double delta_max = -1;  // upper radius clip; negative means 3 * delta0
    double mu1 = 0.5;       // fraction of the best simplex volume to restore
    double mu2 = 1.0;       // Hessian blending weight; 1 keeps the sphere
    int q_max = 100;        // interpolation-set size cap

    // model
    kernels::RbfParams kernel{kernels::Rbf::gaussian, 1.0, 2.0};
    bool tune = true;       // gaussian only; others use unit distance weights
    double tune_lo = 1e-2;  // hyperparameter box for the tuner
    double tune_hi = 1e-1;

    // run control
    double delta0 = 1.0;
    int budget = 1000;
    double f_target = -std::numeric_limits<double>::infinity();  // stop when f <= target
    double eps_g = 0.0;     // gradient-norm stop; 0 disables
    double kappa_g = 1.0;   // fully-linear re-check radius is eps_g / (2 kappa_g)
    std::uint64_t seed = 1;
    dvec lower, upper;      // optional box, empty = unbounded; points are clipped
    bool record_frames = false;  // keep per-iteration frame/curvature matrices
};

struct IterationRow {
    int iter = 0;
    int evals = 0;       // cumulative evaluations after the iteration
    double f_best = 0.0;
    double delta = 0.0;  // radius the iteration ran with
    double rho = 0.0;
    int q = 0;           // interpolation-set size
    int fresh_count = 0; // geometry points generated this iteration
    double lambda = 0.0; // frame scale
    bool accepted = false;
};

struct RunRecord {
    dvec x_best;
    double f_best = std::numeric_limits<double>::infinity();
    int evals = 0;
    std::string stop_reason;  // "target", "budget", "radius", "gradient"
    std::vector<IterationRow> iterations;
    std::vector<double> best_history;  // best f seen after each evaluation
    std::vector<dmat> frames;          // per-iteration A, when record_frames is set
    std::vector<dmat> curvatures;      // per-iteration B, when record_frames is set
};

RunRecord solve(const std::function<double(const dvec&)>& f, const dvec& x0,
                const SolverConfig& cfg);

// Minimizer of the surrogate over the closed unit ball, by multi-start
// projected gradient descent with a Newton polish on interior candidates.
dvec minimize_on_ball(const SurrogateModel& model, std::uint64_t seed = 7,
                      double tol = 1e-10);

// Next radius from the ratio-test outcome, including the min/max clips.
double update_radius(double rho, double delta, double delta0, const SolverConfig& cfg);

// True when the affine subset, rescaled to the given radius around the center,
// stays within the theta1 periphery and meets the volume criterion mu1 * V*.
bool check_fully_linear(const PointList& affine_subset, const dvec& center, double radius,
                        double theta1, double mu1);

} // namespace uktr
