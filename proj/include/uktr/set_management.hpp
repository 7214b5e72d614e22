#pragma once

#include <uktr/kernels.hpp>
#include <uktr/types.hpp>

#include <optional>
#include <vector>

// Interpolation-set maintenance in unit-ball coordinates: completing a point
// set to a well-poised affine basis, growing it back to target simplex volume
// with fresh unit-norm points, and recycling extra past evaluations when the
// fit stays well conditioned.

namespace uktr {

// New points that extend z to an affine basis of R^n (so |z| + returned = n+1).
// Returned points have unit norm; their placement maximizes the volume of the
// joint simplex over a one-parameter family of regular-simplex embeddings.
PointList simexpand(int n, const PointList& z);

struct ExpandResult {
    std::vector<int> kept;  // indices into the candidate list, in retained order
    PointList fresh;        // generated unit-norm points, |kept| + |fresh| = n+1
    double volume = 0.0;    // simplex volume of kept u fresh
    double target = 0.0;    // best achievable volume at the same radius
};

// Keep candidates no farther than theta1 from the center, prune to at most
// n+1 by distance-to-unit-sphere, then add fresh points until the simplex
// volume reaches mu1 * target, discarding kept candidates when necessary.
// mu1 = 1 degenerates to a full regular simplex of fresh points.
ExpandResult expand2volume(int n, const PointList& candidates, double theta1, double mu1);

// Indices of extras (scanned nearest-to-origin first) that can be appended to
// base without the interpolation saddle matrix dropping below rcond_floor,
// stopping at q_max total points. Extras farther than theta1 from the center
// or within 1e-10 of an already retained point are skipped.
std::vector<int> recycle_extra_points(const PointList& base, const PointList& extras,
                                      const kernels::RbfParams& kernel, const dvec& weights,
                                      double theta1, int q_max, double rcond_floor = 1e-12);

struct PoisednessReport {
    double volume = 0.0;     // simplex volume of the affine subset
    double target = 0.0;     // regular-simplex volume at unit radius
    double ratio = 0.0;      // volume / target
    double sigma_min = 0.0;  // smallest singular value of the point matrix
};

// Geometry quality of a scaled point set whose first n+1 members form the
// affine subset.
PoisednessReport poisedness_report(const PointList& points);

// Past evaluations with exact-replay lookup. Points closer than tol in the
// max norm are treated as the same site.
class EvaluationLedger {
  public:
    explicit EvaluationLedger(double tol = 1e-12) : tol_(tol) {}

    std::optional<double> lookup(const dvec& x) const;
    void record(const dvec& x, double f);
    int size() const { return static_cast<int>(entries_.size()); }
    const std::vector<std::pair<dvec, double>>& entries() const { return entries_; }

  private:
    double tol_;
    std::vector<std::pair<dvec, double>> entries_;
};

} // namespace uktr
