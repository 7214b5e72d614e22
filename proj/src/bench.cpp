#include <uktr/bench.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include <uktr/nelder_mead.hpp>
#include <uktr/tr_solver.hpp>

namespace uktr {
namespace {

// Canonical "NAME:n" key for a catalogue entry; accepts bare names when the
// dimension is unique.
std::pair<std::string, int> parse_key(const std::string& key) {
    const auto pos = key.find(':');
    if (pos == std::string::npos) return {key, -1};
    const std::string name = key.substr(0, pos);
    try {
        return {name, std::stoi(key.substr(pos + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument("bad problem key: " + key);
    }
}

std::string canonical_key(const BenchmarkProblem& p) {
    return p.name + ":" + std::to_string(p.n);
}

double resolve_delta0(const BenchConfig& cfg, const BenchmarkProblem& p) {
    auto it = cfg.delta0_override.find(canonical_key(p));
    if (it != cfg.delta0_override.end()) return it->second;
    it = cfg.delta0_override.find(p.name);
    if (it != cfg.delta0_override.end()) return it->second;
    return p.delta0;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ':', '_');
    return s;
}

} // namespace

const std::vector<VariantSpec>& variant_catalogue() {
    static const std::vector<VariantSpec> v = {
        {"V1", 0.5, 1.0, false},  {"V2", 0.5, 0.95, false}, {"V3", 0.75, 0.95, false},
        {"V4", 1.0, 0.95, false}, {"NM", 0.0, 0.0, true},
    };
    return v;
}

const VariantSpec& find_variant(const std::string& name) {
    for (const auto& v : variant_catalogue())
        if (v.name == name) return v;
    throw std::invalid_argument("unknown variant: " + name);
}

BenchSummary run_matrix(const BenchConfig& cfg) {
    if (!(cfg.f_tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (cfg.budget < 1) throw std::invalid_argument("budget must be at least 1");
    if (cfg.seeds.empty()) throw std::invalid_argument("no seeds given");

    // Resolve every name up front so config errors precede any run.
    std::vector<const BenchmarkProblem*> problems;
    for (const auto& key : cfg.problems) {
        const auto [name, n] = parse_key(key);
        problems.push_back(&find_problem(name, n));
    }
    std::vector<const VariantSpec*> variants;
    for (const auto& name : cfg.variants) variants.push_back(&find_variant(name));

    if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);

    BenchSummary summary;
    for (const auto* p : problems) {
        const double delta0 = resolve_delta0(cfg, *p);
        // Stop exactly when f - f_star < tolerance.
        const double target = std::nextafter(p->f_star + cfg.f_tol,
                                             -std::numeric_limits<double>::infinity());
        for (const auto* v : variants) {
            std::vector<double> evals_cells;
            int converged = 0;
            for (const auto seed : cfg.seeds) {
                RunRecord rec;
                if (v->nelder_mead) {
                    if (cfg.budget < p->n + 2) {
                        rec.x_best = p->x0;
                        rec.f_best = p->f(p->x0);
                        rec.evals = 1;
                        rec.best_history = {rec.f_best};
                        rec.stop_reason = "budget";
                    } else {
                        rec = nelder_mead(p->f, p->x0, delta0, cfg.budget, target, p->lower,
                                          p->upper);
                    }
                } else {
                    SolverConfig sc;
                    sc.mu1 = v->mu1;
                    sc.mu2 = v->mu2;
                    sc.delta0 = delta0;
                    sc.budget = cfg.budget;
                    sc.f_target = target;
                    sc.seed = seed;
                    sc.lower = p->lower;
                    sc.upper = p->upper;
                    rec = solve(p->f, p->x0, sc);
                }

                CellResult cell;
                cell.problem = canonical_key(*p);
                cell.variant = v->name;
                cell.seed = seed;
                cell.converged = rec.f_best - p->f_star < cfg.f_tol;
                cell.evals = cell.converged ? rec.evals : cfg.budget;
                cell.f_best = rec.f_best;
                summary.cells.push_back(cell);
                evals_cells.push_back(static_cast<double>(cell.evals));
                converged += cell.converged ? 1 : 0;

                if (!cfg.out_dir.empty()) export_history(cfg.out_dir, cell, rec.best_history);
            }
            const auto key = std::make_pair(canonical_key(*p), v->name);
            summary.median_evals[key] = median(std::move(evals_cells));
            summary.converged_count[key] = converged;
        }
    }

    if (!cfg.out_dir.empty())
        write_summary_json(summary, (std::filesystem::path(cfg.out_dir) / "summary.json").string());
    return summary;
}

void export_history(const std::string& dir, const CellResult& cell,
                    const std::vector<double>& best_history) {
    const auto [name, n] = parse_key(cell.problem);
    const double f_star = find_problem(name, n).f_star;

    const auto path = std::filesystem::path(dir) /
                      (sanitize(cell.problem) + "_" + cell.variant + "_s" +
                       std::to_string(cell.seed) + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write history file: " + path.string());
    out << "eval,f_best,gap\n";
    out.precision(17);
    for (std::size_t i = 0; i < best_history.size(); ++i)
        out << (i + 1) << "," << best_history[i] << "," << best_history[i] - f_star << "\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_summary_json(const BenchSummary& summary, const std::string& path) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : summary.cells)
        cells.push_back({{"problem", c.problem},
                         {"variant", c.variant},
                         {"seed", c.seed},
                         {"converged", c.converged},
                         {"evals", c.evals},
                         {"f_best", c.f_best}});

    nlohmann::json medians = nlohmann::json::array();
    for (const auto& [key, med] : summary.median_evals)
        medians.push_back({{"problem", key.first},
                           {"variant", key.second},
                           {"median_evals", med},
                           {"converged_seeds", summary.converged_count.at(key)}});

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write summary file: " + path);
    out << nlohmann::json{{"cells", cells}, {"medians", medians}}.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace uktr
