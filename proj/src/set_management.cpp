#include "uktr/set_management.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "uktr/simplex_geometry.hpp"

namespace uktr {

namespace {

constexpr double kVolumeSlack = 1e-9;  // relative guard on the volume criterion
constexpr double kMinSeparation = 1e-10;

dmat columns_of(const PointList& pts, int n) {
    dmat a(n, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = pts[j];
    return a;
}

// [Z] operator: differences against the first member, spanning the affine hull.
dmat affine_directions(const PointList& pts, int n) {
    if (pts.size() < 2) return dmat(n, 0);
    dmat a(n, static_cast<Eigen::Index>(pts.size() - 1));
    for (std::size_t j = 1; j < pts.size(); ++j)
        a.col(static_cast<Eigen::Index>(j - 1)) = pts[j] - pts[0];
    return a;
}

double union_volume(const PointList& a, const PointList& b) {
    PointList all;
    all.reserve(a.size() + b.size());
    all.insert(all.end(), a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    if (all.empty()) return 0.0;
    if (static_cast<Eigen::Index>(all.size()) != all.front().size() + 1) return 0.0;
    return simplex_volume(all);
}

} // namespace

PointList simexpand(int n, const PointList& z) {
    if (n < 1) throw std::invalid_argument("simexpand: dimension must be positive");
    for (const auto& p : z)
        if (p.size() != n) throw std::invalid_argument("simexpand: point dimension mismatch");
    const int p = static_cast<int>(z.size());
    if (p > n + 1) throw std::invalid_argument("simexpand: more than n+1 input points");
    if (p == n + 1) return {};
    if (p == 0) return regsim(n, n);

    const int k = n + 1 - p;

    // Split coordinates three ways: directions along the affine hull of z, the
    // remaining directions inside span(z), and the complement of span(z). The
    // in-span direction orthogonal to the hull is the projection direction e of
    // the origin onto the hull; fresh points are offset along it.
    const dmat hull_dirs = orthonormal_bases(affine_directions(z, n)).first;
    const auto [span, span_kernel] = orthonormal_bases(columns_of(z, n));
    dmat joint(n, hull_dirs.cols() + span_kernel.cols());
    joint.leftCols(hull_dirs.cols()) = hull_dirs;
    joint.rightCols(span_kernel.cols()) = span_kernel;
    const dmat joint_kernel = orthonormal_bases(joint).second;

    dvec e = dvec::Zero(n);
    bool have_e = false;
    if (joint_kernel.cols() > 0) {
        e = joint_kernel.col(0);
        dvec mean = dvec::Zero(n);
        for (const auto& pt : z) mean += pt;
        mean /= static_cast<double>(p);
        if (e.dot(mean) < 0.0) e = -e;
        have_e = true;
    }

    if (k == 1) {
        // One missing vertex: the volume is linear in its offset along the hull
        // normal, so the maximizer sits at the far pole.
        if (have_e) return {dvec(-e)};
        // Origin inside the hull: step out of span(z) instead.
        return {dvec(span_kernel.col(0))};
    }

    // Template regular (k-1)-simplex, rotated so its span lands in the
    // complement of span(z); offsets sigma*e keep every point on the sphere.
    const PointList x = regsim(n, k - 1);
    const auto [x_span, x_kernel] = orthonormal_bases(columns_of(x, n));
    dmat left(n, span_kernel.cols() + span.cols());
    left.leftCols(span_kernel.cols()) = span_kernel;
    left.rightCols(span.cols()) = span;
    dmat right(n, x_span.cols() + x_kernel.cols());
    right.leftCols(x_span.cols()) = x_span;
    right.rightCols(x_kernel.cols()) = x_kernel;
    const dmat rot = left * right.transpose();

    PointList rotated(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) rotated[j] = rot * x[j];

    auto points_at = [&](double s) {
        const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
        PointList out(rotated.size());
        for (std::size_t j = 0; j < rotated.size(); ++j) out[j] = s * e + c * rotated[j];
        return out;
    };
    auto volume_at = [&](double s) { return union_volume(z, points_at(s)); };

    double sigma = 0.0;
    if (have_e) {
        const int grid = 41;
        const double lo0 = -0.9999, hi0 = 0.9999;
        const double step = (hi0 - lo0) / (grid - 1);
        double best_s = 0.0, best_v = -1.0;
        for (int i = 0; i < grid; ++i) {
            const double s = lo0 + step * i;
            const double v = volume_at(s);
            if (v > best_v) {
                best_v = v;
                best_s = s;
            }
        }
        double a = std::max(best_s - step, -1.0);
        double b = std::min(best_s + step, 1.0);
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = volume_at(x1), f2 = volume_at(x2);
        while (b - a > 1e-10) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = volume_at(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = volume_at(x1);
            }
        }
        sigma = 0.5 * (a + b);
    }

    return points_at(sigma);
}

ExpandResult expand2volume(int n, const PointList& candidates, double theta1, double mu1) {
    if (n < 1) throw std::invalid_argument("expand2volume: dimension must be positive");
    if (theta1 < 1.0) throw std::invalid_argument("expand2volume: theta1 must be >= 1");
    if (!(mu1 > 0.0) || mu1 > 1.0)
        throw std::invalid_argument("expand2volume: mu1 must be in (0, 1]");
    for (const auto& p : candidates)
        if (p.size() != n) throw std::invalid_argument("expand2volume: point dimension mismatch");

    ExpandResult out;
    out.target = regular_simplex_volume(n, inscribed_edge_length(n, 1.0));
    const double bar = mu1 * out.target * (1.0 - kVolumeSlack);

    // Periphery filter.
    std::vector<int> kept;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i)
        if (candidates[i].norm() <= theta1) kept.push_back(i);

    // Oversized sets: keep the n+1 members closest to the unit sphere.
    if (static_cast<int>(kept.size()) > n + 1) {
        std::stable_sort(kept.begin(), kept.end(), [&](int a, int b) {
            return std::abs(1.0 - candidates[a].norm()) < std::abs(1.0 - candidates[b].norm());
        });
        kept.resize(n + 1);
    }

    auto kept_points = [&]() {
        PointList pts;
        pts.reserve(kept.size());
        for (int i : kept) pts.push_back(candidates[i]);
        return pts;
    };

    PointList fresh;
    if (static_cast<int>(kept.size()) < n + 1) fresh = simexpand(n, kept_points());
    double volume = union_volume(kept_points(), fresh);

    if (!kept.empty() && volume < bar) {
        // Memory of discarded members, seeded with the candidate nearest the
        // center; removals walk outward from the memory centroid.
        std::vector<int> memory;
        {
            int seed = kept.front();
            for (int i : kept)
                if (candidates[i].norm() < candidates[seed].norm()) seed = i;
            memory.push_back(seed);
        }
        auto memory_mean = [&]() {
            dvec m = dvec::Zero(n);
            for (int i : memory) m += candidates[i];
            return dvec(m / static_cast<double>(memory.size()));
        };

        while (volume < bar && !kept.empty()) {
            const dvec anchor = memory_mean();
            std::size_t drop = 0;
            double best = (candidates[kept[0]] - anchor).norm();
            for (std::size_t j = 1; j < kept.size(); ++j) {
                const double d = (candidates[kept[j]] - anchor).norm();
                if (d < best) {
                    best = d;
                    drop = j;
                }
            }
            const int dropped = kept[drop];
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(drop));
            if (std::find(memory.begin(), memory.end(), dropped) == memory.end())
                memory.push_back(dropped);

            // Re-expand around the memory centroid as a virtual member, then
            // complete the one slot the virtual member occupied.
            PointList anchored = kept_points();
            anchored.push_back(memory_mean());
            fresh = simexpand(n, anchored);

            PointList real = kept_points();
            real.insert(real.end(), fresh.begin(), fresh.end());
            const PointList completion = simexpand(n, real);
            fresh.insert(fresh.end(), completion.begin(), completion.end());

            volume = union_volume(kept_points(), fresh);
        }
    }

    if (volume < bar) {
        // Candidates exhausted: fall back to a fresh regular simplex, which
        // attains the target volume exactly.
        kept.clear();
        fresh = simexpand(n, {});
        volume = union_volume({}, fresh);
    }

    out.kept = std::move(kept);
    out.fresh = std::move(fresh);
    out.volume = volume;
    return out;
}

std::vector<int> recycle_extra_points(const PointList& base, const PointList& extras,
                                      const kernels::RbfParams& kernel, const dvec& weights,
                                      double theta1, int q_max, double rcond_floor) {
    if (base.empty()) throw std::invalid_argument("recycle: empty base set");
    const int n = static_cast<int>(base.front().size());
    if (weights.size() != n) throw std::invalid_argument("recycle: weight count mismatch");

    auto saddle_rcond = [&](const PointList& pts) {
        const int q = static_cast<int>(pts.size());
        const PointBlock block = PointBlock::from(pts);
        const kernels::Table& kt = kernels::active();
        dmat phi(q, q);
        std::vector<double> r2(q), row(q);
        for (int i = 0; i < q; ++i) {
            kt.wsqdist(pts[i].data(), block.data.data(), weights.data(), n, q, r2.data());
            kt.rbf_d0(kernel, r2.data(), q, row.data());
            for (int c = 0; c < q; ++c) phi(i, c) = row[c];
        }
        phi = 0.5 * (phi + phi.transpose()).eval();
        const int m = q + n + 1;
        dmat saddle = dmat::Zero(m, m);
        saddle.topLeftCorner(q, q) = phi;
        for (int i = 0; i < q; ++i) {
            saddle.block(i, q, 1, n) = pts[i].transpose();
            saddle(i, q + n) = 1.0;
        }
        saddle.bottomLeftCorner(n + 1, q) = saddle.topRightCorner(q, n + 1).transpose();
        return Eigen::PartialPivLU<dmat>(saddle).rcond();
    };

    std::vector<int> order(extras.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return extras[a].norm() < extras[b].norm(); });

    PointList retained = base;
    std::vector<int> picked;
    for (int idx : order) {
        if (static_cast<int>(retained.size()) >= q_max) break;
        const dvec& x = extras[idx];
        if (x.size() != n) throw std::invalid_argument("recycle: point dimension mismatch");
        if (x.norm() > theta1) continue;
        bool close = false;
        for (const auto& r : retained)
            if ((r - x).norm() < kMinSeparation) {
                close = true;
                break;
            }
        if (close) continue;
        retained.push_back(x);
        if (saddle_rcond(retained) >= rcond_floor) {
            picked.push_back(idx);
        } else {
            retained.pop_back();
        }
    }
    return picked;
}

PoisednessReport poisedness_report(const PointList& points) {
    PoisednessReport rep;
    if (points.empty()) return rep;
    const int n = static_cast<int>(points.front().size());
    rep.target = regular_simplex_volume(n, inscribed_edge_length(n, 1.0));

    const int m = std::min<int>(n + 1, static_cast<int>(points.size()));
    PointList affine(points.begin(), points.begin() + m);
    if (m == n + 1) rep.volume = simplex_volume(affine);
    rep.ratio = rep.volume / rep.target;

    const dmat z = columns_of(affine, n);
    rep.sigma_min = z.jacobiSvd().singularValues().minCoeff();
    return rep;
}

std::optional<double> EvaluationLedger::lookup(const dvec& x) const {
    for (const auto& [site, value] : entries_)
        if ((site - x).lpNorm<Eigen::Infinity>() <= tol_) return value;
    return std::nullopt;
}

void EvaluationLedger::record(const dvec& x, double f) { entries_.emplace_back(x, f); }

} // namespace uktr
