#include <uktr/nelder_mead.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <uktr/simplex_geometry.hpp>

namespace uktr {
namespace {

dvec clip_to_box(dvec x, const dvec& lower, const dvec& upper) {
    if (lower.size()) x = x.cwiseMax(lower);
    if (upper.size()) x = x.cwiseMin(upper);
    return x;
}

} // namespace

RunRecord nelder_mead(const std::function<double(const dvec&)>& f, const dvec& x0,
                      double delta0, int budget, double f_target, const dvec& lower,
                      const dvec& upper) {
    const int n = static_cast<int>(x0.size());
    if (n < 1) throw std::invalid_argument("empty starting point");
    if (!(delta0 > 0.0)) throw std::invalid_argument("initial size must be positive");
    if (budget < n + 2) throw std::invalid_argument("budget must be at least n + 2");
    if ((lower.size() && lower.size() != n) || (upper.size() && upper.size() != n))
        throw std::invalid_argument("bound dimension mismatch");

    RunRecord rec;
    rec.f_best = std::numeric_limits<double>::infinity();
    std::string stop;

    auto evaluate = [&](const dvec& x) -> double {
        const double v = f(x);
        const double ordered = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        ++rec.evals;
        if (ordered < rec.f_best) {
            rec.f_best = ordered;
            rec.x_best = x;
        }
        rec.best_history.push_back(rec.f_best);
        if (rec.f_best <= f_target)
            stop = "target";
        else if (rec.evals >= budget)
            stop = "budget";
        return ordered;
    };

    std::vector<dvec> verts;
    std::vector<double> fv;
    for (const auto& s : regsim(n, n)) {
        verts.push_back(clip_to_box(x0 + delta0 * s, lower, upper));
        fv.push_back(evaluate(verts.back()));
        if (!stop.empty()) break;
    }

    int sweep = 0;
    // An iteration needs at least a reflection plus one follow-up evaluation.
    while (stop.empty() && budget - rec.evals >= 2) {
        std::vector<int> order(verts.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fv[a] < fv[b]; });
        const int best = order[0], second = order[n - 1], worst = order[n];

        dvec centroid = dvec::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += verts[i];
        centroid /= n;

        const double f_low = rec.f_best;
        auto replace_worst = [&](const dvec& x, double v) {
            verts[worst] = x;
            fv[worst] = v;
        };

        const dvec xr = clip_to_box(centroid + (centroid - verts[worst]), lower, upper);
        const double fr = evaluate(xr);
        if (!stop.empty()) {
            if (fr < fv[worst]) replace_worst(xr, fr);
        } else if (fr < fv[best]) {
            const dvec xe = clip_to_box(centroid + 2.0 * (centroid - verts[worst]), lower, upper);
            const double fe = evaluate(xe);
            if (fe < fr)
                replace_worst(xe, fe);
            else
                replace_worst(xr, fr);
        } else if (fr < fv[second]) {
            replace_worst(xr, fr);
        } else {
            bool shrink = false;
            if (fr < fv[worst]) {
                const dvec xc = clip_to_box(centroid + 0.5 * (xr - centroid), lower, upper);
                const double fc = evaluate(xc);
                if (fc <= fr)
                    replace_worst(xc, fc);
                else
                    shrink = true;
            } else {
                const dvec xc = clip_to_box(centroid - 0.5 * (centroid - verts[worst]), lower, upper);
                const double fc = evaluate(xc);
                if (fc < fv[worst])
                    replace_worst(xc, fc);
                else
                    shrink = true;
            }
            if (shrink && stop.empty()) {
                for (int i = 0; i <= n && stop.empty(); ++i) {
                    if (i == best) continue;
                    verts[i] = clip_to_box(verts[best] + 0.5 * (verts[i] - verts[best]),
                                           lower, upper);
                    fv[i] = evaluate(verts[i]);
                }
            }
        }

        IterationRow row;
        row.iter = sweep++;
        row.evals = rec.evals;
        row.f_best = rec.f_best;
        double size = 0.0;
        for (const auto& v : verts) size = std::max(size, (v - verts[best]).norm());
        row.delta = size;
        row.lambda = size;
        row.accepted = rec.f_best < f_low;
        row.q = n + 1;
        rec.iterations.push_back(row);
    }

    rec.stop_reason = stop.empty() ? "budget" : stop;
    return rec;
}

} // namespace uktr
