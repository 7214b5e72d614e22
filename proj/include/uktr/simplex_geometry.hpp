#pragma once

#include <cstdint>
#include <utility>

#include "uktr/types.hpp"

// Geometry of regular simplices inscribed in a ball and the set-spread metric
// used to judge interpolation geometry. Scaling identities:
//   volume of the regular n-simplex with edge l:   sqrt(n+1)/n! * (l/sqrt2)^n
//   edge of the regular n-simplex inscribed at Delta: sqrt2*sqrt(n+1)/sqrt(n)*Delta
//   m-face factors at Delta: r = sqrt(m(n+1)/((m+1)n))*Delta,
//                            d = sqrt((n-m)/((m+1)n))*Delta,  d^2 + r^2 = Delta^2.

namespace uktr {

struct SimplexFactors {
    int n = 0;
    int m = 0;
    double edge_length = 0.0;    // edge of the parent regular n-simplex
    double circum_radius = 0.0;  // circumradius of the m-face in its hull
    double offset = 0.0;         // distance of the m-face hull from the center
};

// |det [z1-z0 ... zn-z0]| / n!; requires exactly dim+1 points.
double simplex_volume(const PointList& pts);

double regular_simplex_volume(int n, double edge);

double inscribed_edge_length(int n, double radius);

SimplexFactors sub_simplex_factors(int n, int m, double radius);

// m+1 unit-norm points in dimension n forming a regular m-simplex whose
// affine hull passes through the origin (centroid at 0 for m >= 1); pairwise
// distances equal inscribed_edge_length(m, 1). Deterministic construction.
PointList regsim(int n, int m);

// Orthonormal bases (span, kernel) of the column space of a.
std::pair<dmat, dmat> orthonormal_bases(const dmat& a, double rank_tol = 1e-10);

// max over ||x|| <= radius of the mean distance from x to the set members.
// Convex objective, so the maximum sits on the sphere; found by seeded
// multistart projected ascent (64*n random boundary starts plus axis starts).
double theta_star(const PointList& pts, double radius, std::uint64_t seed = 7,
                  double tol = 1e-6);

} // namespace uktr
