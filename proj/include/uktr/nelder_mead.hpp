#pragma once

#include <uktr/tr_solver.hpp>
#include <uktr/types.hpp>

#include <functional>

// Nelder-Mead simplex search, the non-model baseline in the benchmark
// matrix. Standard coefficients (reflect 1, expand 2, contract 1/2,
// shrink 1/2); the initial simplex is x0 plus a regular simplex of
// circumradius delta0.

namespace uktr {

RunRecord nelder_mead(const std::function<double(const dvec&)>& f, const dvec& x0,
                      double delta0, int budget,
                      double f_target = -std::numeric_limits<double>::infinity(),
                      const dvec& lower = dvec(), const dvec& upper = dvec());

} // namespace uktr
