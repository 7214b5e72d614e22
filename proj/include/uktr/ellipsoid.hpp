#pragma once

#include <uktr/types.hpp>

// Curvature-adapted trust-region frame. The model Hessian accepted so far is
// blended into an SPD matrix B, and the frame x = center + A u maps the unit
// ball onto the ellipsoid {s : s^T B s <= lambda^2} whose volume equals that
// of the radius-delta ball. B = I reproduces the spherical frame exactly.

namespace uktr {

struct AffineMap {
    dmat a;          // frame matrix, |det a| = delta^n
    dmat a_inv;
    dvec center;
    double lambda = 0.0;  // a^T B a = lambda^2 I
    double radius = 0.0;
    bool spherical = true;  // true -> to_original/to_unit use the scalar form

    dvec to_original(const dvec& u) const;  // center + a * u
    dvec to_unit(const dvec& x) const;      // a_inv * (x - center)
};

// Blend mu2 * b_prev + (1 - mu2) * sym(b_hat) / scale(b_hat), where scale is
// the geometric mean of the estimate's |eigenvalues|: the frame ignores B's
// overall scale, so only shape is averaged and magnitude spikes in a noisy
// estimate cannot overwhelm the blend. The result is pushed SPD with its
// spectrum confined to [max / cond_cap, max] and renormalized to unit
// geometric mean. mu2 = 1 returns b_prev unchanged, bit for bit; a non-finite,
// zero, or non-positive-direction estimate is skipped (prev returned, *skipped
// set when provided).
dmat filter_hessian(const dmat& b_prev, const dmat& b_hat, double mu2,
                    double cond_cap = 1e4, bool* skipped = nullptr);

// Frame for the SPD matrix b at the given center and radius. b = I yields the
// spherical fast path (a = radius * I without any factorization round-off).
AffineMap build_map(const dvec& center, const dmat& b, double radius);

// Standard BFGS update of b with step s and gradient difference y; returns b
// unchanged (and sets *skipped when provided) when s^T y <= 1e-8 * |s| * |y|.
dmat bfgs_update(const dmat& b, const dvec& s, const dvec& y, bool* skipped = nullptr);

// Pull a Hessian taken in unit-ball coordinates back to original coordinates:
// a_inv^T h a_inv.
dmat hessian_to_original(const AffineMap& map, const dmat& hess_unit);

} // namespace uktr
