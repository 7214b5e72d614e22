#pragma once

#include <uktr/testbed.hpp>
#include <uktr/types.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

// Benchmark driver: runs a problem x variant x seed matrix, counts
// evaluations to tolerance, reports per-cell medians and writes CSV
// histories plus a JSON summary.

namespace uktr {

struct VariantSpec {
    std::string name;  // V1..V4 for the trust-region solver, NM for Nelder-Mead
    double mu1 = 0.5;
    double mu2 = 1.0;
    bool nelder_mead = false;
};

// V1 (0.5, 1), V2 (0.5, 0.95), V3 (0.75, 0.95), V4 (1, 0.95), NM.
const std::vector<VariantSpec>& variant_catalogue();
const VariantSpec& find_variant(const std::string& name);

struct BenchConfig {
    std::vector<std::string> problems;   // catalogue keys, NAME or NAME:n
    std::vector<std::string> variants;   // variant names
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int budget = 1000;
    double f_tol = 1e-6;                 // converged when f - f_star < f_tol
    std::string out_dir;                 // empty = no files written
    std::map<std::string, double> delta0_override;  // key -> initial radius
};

struct CellResult {
    std::string problem;  // NAME:n key
    std::string variant;
    std::uint64_t seed = 0;
    bool converged = false;
    int evals = 0;        // evaluations to tolerance, budget if not reached
    double f_best = 0.0;
};

struct BenchSummary {
    std::vector<CellResult> cells;
    // (problem key, variant) -> median evaluations over seeds (budget counts
    // as the cell value for non-converged runs)
    std::map<std::pair<std::string, std::string>, double> median_evals;
    std::map<std::pair<std::string, std::string>, int> converged_count;
};

BenchSummary run_matrix(const BenchConfig& cfg);

// Per-run best-so-far CSV ("eval,f_best" rows) under dir, named
// <problem>_<variant>_s<seed>.csv.
void export_history(const std::string& dir, const CellResult& cell,
                    const std::vector<double>& best_history);

void write_summary_json(const BenchSummary& summary, const std::string& path);

} // namespace uktr
