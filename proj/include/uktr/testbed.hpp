#pragma once

#include <uktr/types.hpp>

#include <functional>
#include <string>
#include <vector>

// Analytic benchmark problems with their standard starting points and known
// optimal values, used by the benchmark harness and the validation suite.

namespace uktr {

struct BenchmarkProblem {
    std::string name;   // catalogue key, e.g. "ROSENBROCK"
    int n = 0;
    dvec x0;
    double f_star = 0.0;
    double delta0 = 1.0;       // default initial radius for this problem
    dvec lower, upper;         // empty = unbounded
    std::function<double(const dvec&)> f;
};

const std::vector<BenchmarkProblem>& problem_catalogue();

// Lookup by name, optionally disambiguated by dimension (n = -1 takes the
// unique entry of that name; throws if ambiguous or missing).
const BenchmarkProblem& find_problem(const std::string& name, int n = -1);

} // namespace uktr
