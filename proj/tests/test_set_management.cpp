#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "uktr/kernels.hpp"
#include "uktr/set_management.hpp"
#include "uktr/simplex_geometry.hpp"
#include "uktr/types.hpp"

using uktr::dmat;
using uktr::dvec;
using uktr::PointList;

namespace {

// Independent volume oracle: Cayley-Menger determinant over pairwise squared
// distances, vol^2 = (-1)^(m+1) det(CM) / (2^m (m!)^2) for m+1 vertices.
double cm_volume(const PointList& pts) {
    const int m = static_cast<int>(pts.size()) - 1;
    dmat cm = dmat::Zero(m + 2, m + 2);
    for (int i = 0; i <= m; ++i) {
        cm(0, i + 1) = cm(i + 1, 0) = 1.0;
        for (int j = 0; j <= m; ++j) cm(i + 1, j + 1) = (pts[i] - pts[j]).squaredNorm();
    }
    const double det = cm.determinant();
    const double sign = (m % 2 == 0) ? -1.0 : 1.0;
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    const double v2 = sign * det / (std::pow(2.0, m) * fact * fact);
    return v2 > 0.0 ? std::sqrt(v2) : 0.0;
}

double target_volume(int n) {
    return uktr::regular_simplex_volume(n, uktr::inscribed_edge_length(n, 1.0));
}

PointList gather(const PointList& candidates, const uktr::ExpandResult& r) {
    PointList all;
    for (int i : r.kept) all.push_back(candidates[i]);
    for (const auto& p : r.fresh) all.push_back(p);
    return all;
}

dvec vec2(double x, double y) {
    dvec v(2);
    v << x, y;
    return v;
}

} // namespace

TEST_CASE("simexpand from nothing produces a regular simplex on the sphere") {
    for (int n : {1, 2, 3, 5}) {
        const PointList out = uktr::simexpand(n, {});
        REQUIRE(out.size() == static_cast<std::size_t>(n + 1));
        const double edge = uktr::inscribed_edge_length(n, 1.0);
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t j = i + 1; j < out.size(); ++j)
                CHECK((out[i] - out[j]).norm() == doctest::Approx(edge).epsilon(1e-12));
        }
        CHECK(cm_volume(out) == doctest::Approx(target_volume(n)).epsilon(1e-9));
    }
}

TEST_CASE("simexpand completes one triangle vertex to the full triangle") {
    const PointList tri = uktr::regsim(2, 2);
    const PointList out = uktr::simexpand(2, {tri[0]});
    REQUIRE(out.size() == 2);

    PointList all = {tri[0], out[0], out[1]};
    for (const auto& p : all) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-10));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            CHECK((all[i] - all[j]).norm() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));

    // The sphere offset along the anchor direction is -1/2 for n = 2.
    const dvec e = tri[0] / tri[0].norm();
    CHECK(out[0].dot(e) == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(out[1].dot(e) == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("simexpand recovers the dropped vertex of a regular simplex") {
    for (int n : {2, 4}) {
        const PointList full = uktr::regsim(n, n);
        PointList most(full.begin(), full.end() - 1);
        const PointList out = uktr::simexpand(n, most);
        REQUIRE(out.size() == 1);
        CHECK((out[0] - full.back()).norm() <= 1e-9);
    }
}

TEST_CASE("simexpand steps out of the span when the origin lies in the hull") {
    const PointList z = {vec2(0.5, 0.0), vec2(-0.7, 0.0)};
    const PointList out = uktr::simexpand(2, z);
    REQUIRE(out.size() == 1);
    CHECK(out[0].norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(out[0](0)) <= 1e-12);
    CHECK(cm_volume({z[0], z[1], out[0]}) == doctest::Approx(0.6).epsilon(1e-10));
}

TEST_CASE("simexpand handles dependent directions and full inputs") {
    dvec a = dvec::Zero(3), b = dvec::Zero(3);
    a(0) = 1.0;
    b(0) = 0.9;
    const PointList out = uktr::simexpand(3, {a, b});
    REQUIRE(out.size() == 2);
    for (const auto& p : out) {
        CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(p(0)) <= 1e-8);  // orthogonal to the degenerate span
    }

    CHECK(uktr::simexpand(2, uktr::regsim(2, 2)).empty());
    PointList too_many = uktr::regsim(2, 2);
    too_many.push_back(vec2(0.1, 0.2));
    CHECK_THROWS_AS((void)uktr::simexpand(2, too_many), std::invalid_argument);
}

TEST_CASE("simexpand offsets are shared and orthogonal to the input hull") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> rad(0.3, 1.3);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        PointList z;
        for (int i = 0; i < p; ++i) {
            dvec v(n);
            for (int j = 0; j < n; ++j) v(j) = gauss(rng);
            z.push_back(v.normalized() * rad(rng));
        }
        const PointList out = uktr::simexpand(n, z);
        REQUIRE(out.size() == static_cast<std::size_t>(n + 1 - p));

        // Projector onto span(z), built independently.
        dmat zm(n, p);
        for (int i = 0; i < p; ++i) zm.col(i) = z[i];
        Eigen::JacobiSVD<dmat> svd(zm, Eigen::ComputeFullU);
        const int rank = (svd.singularValues().array() > 1e-10 * svd.singularValues()(0)).count();
        const dmat u = svd.matrixU().leftCols(rank);

        dvec shared = u * (u.transpose() * out[0]);
        for (const auto& pt : out) {
            CHECK(pt.norm() == doctest::Approx(1.0).epsilon(1e-8));
            const dvec proj = u * (u.transpose() * pt);
            CHECK((proj - shared).norm() <= 1e-8);  // common offset sigma*e
            for (int i = 1; i < p; ++i)
                CHECK(std::abs(proj.dot(z[i] - z[0])) <= 1e-8 * (1.0 + (z[i] - z[0]).norm()));
        }
    }
}

TEST_CASE("expand2volume keeps a qualifying regular simplex untouched") {
    for (int n : {2, 3, 4}) {
        const PointList cands = uktr::regsim(n, n);
        const auto r = uktr::expand2volume(n, cands, 1.25, 1.0);
        REQUIRE(r.kept.size() == static_cast<std::size_t>(n + 1));
        CHECK(r.fresh.empty());
        for (int i = 0; i <= n; ++i) CHECK(r.kept[i] == i);
        CHECK(r.volume == doctest::Approx(r.target).epsilon(1e-9));
        CHECK(r.target == doctest::Approx(target_volume(n)).epsilon(1e-12));
    }
}

TEST_CASE("expand2volume expands empty or filtered-out candidate lists in full") {
    const auto empty = uktr::expand2volume(3, {}, 1.25, 0.5);
    CHECK(empty.kept.empty());
    CHECK(empty.fresh.size() == 4);
    CHECK(empty.volume == doctest::Approx(target_volume(3)).epsilon(1e-9));

    dvec far = dvec::Zero(3);
    far(1) = 2.0;  // outside the theta1 periphery
    const auto filtered = uktr::expand2volume(3, {far}, 1.25, 0.5);
    CHECK(filtered.kept.empty());
    CHECK(filtered.fresh.size() == 4);
    CHECK(filtered.volume == doctest::Approx(target_volume(3)).epsilon(1e-9));
}

TEST_CASE("expand2volume prunes oversized sets by distance to the unit sphere") {
    const double pi = 3.14159265358979323846;
    auto polar = [&](double r, double deg) {
        return vec2(r * std::cos(deg * pi / 180.0), r * std::sin(deg * pi / 180.0));
    };
    const PointList cands = {polar(1.02, 90.0), polar(0.97, 210.0), polar(1.10, 330.0),
                             polar(0.70, 45.0), polar(1.35, 160.0)};
    const auto r = uktr::expand2volume(2, cands, 1.5, 0.5);

    REQUIRE(r.kept.size() == 3);
    CHECK(r.kept[0] == 0);
    CHECK(r.kept[1] == 1);
    CHECK(r.kept[2] == 2);
    CHECK(r.fresh.empty());

    // Shoelace area of the retained triangle.
    const dvec a = cands[0], b = cands[1], c = cands[2];
    const double area =
        0.5 * std::abs((b(0) - a(0)) * (c(1) - a(1)) - (c(0) - a(0)) * (b(1) - a(1)));
    CHECK(r.volume == doctest::Approx(area).epsilon(1e-12));
    CHECK(r.volume >= 0.5 * r.target * (1.0 - 1e-9));
}

TEST_CASE("expand2volume discards clustered candidates until the volume recovers") {
    const double pi = 3.14159265358979323846;
    auto on_circle = [&](double deg) {
        return vec2(std::cos(deg * pi / 180.0), std::sin(deg * pi / 180.0));
    };
    // Three nearly collinear points on the sphere: volume far below target.
    const PointList cands = {on_circle(0.0), on_circle(10.0), on_circle(20.0)};
    const auto r = uktr::expand2volume(2, cands, 1.25, 0.5);

    REQUIRE(r.kept.size() == 1);
    CHECK(r.kept[0] == 2);  // removals walk outward from the memory centroid
    CHECK(r.fresh.size() == 2);
    for (const auto& p : r.fresh) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.volume >= 0.5 * r.target * (1.0 - 1e-9));
    CHECK(r.volume == doctest::Approx(cm_volume(gather(cands, r))).epsilon(1e-10));
}

TEST_CASE("expand2volume falls back to a fresh simplex when mu1 = 1 is unreachable") {
    const double pi = 3.14159265358979323846;
    auto on_circle = [&](double deg) {
        return vec2(std::cos(deg * pi / 180.0), std::sin(deg * pi / 180.0));
    };
    const PointList cands = {on_circle(0.0), on_circle(10.0), on_circle(20.0)};
    const auto r = uktr::expand2volume(2, cands, 1.25, 1.0);

    CHECK(r.kept.empty());
    REQUIRE(r.fresh.size() == 3);
    CHECK(r.volume >= r.target * (1.0 - 1e-9));
    CHECK(r.volume <= r.target * (1.0 + 1e-9));
}

TEST_CASE("expand2volume is deterministic") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    PointList cands;
    for (int i = 0; i < 7; ++i) {
        dvec v(3);
        for (int j = 0; j < 3; ++j) v(j) = gauss(rng);
        cands.push_back(v.normalized() * (0.4 + 0.15 * i));
    }
    const auto r1 = uktr::expand2volume(3, cands, 1.25, 0.75);
    const auto r2 = uktr::expand2volume(3, cands, 1.25, 0.75);
    REQUIRE(r1.kept == r2.kept);
    REQUIRE(r1.fresh.size() == r2.fresh.size());
    for (std::size_t i = 0; i < r1.fresh.size(); ++i)
        CHECK((r1.fresh[i] - r2.fresh[i]).norm() == 0.0);
    CHECK(r1.volume == r2.volume);
}

TEST_CASE("expand2volume postcondition replay over random configurations") {
    std::mt19937_64 rng(977);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int n = 2; n <= 6; ++n) {
        std::uniform_int_distribution<int> count(0, 2 * n + 4);
        std::uniform_real_distribution<double> rad(0.05, 1.6);
        for (int rep = 0; rep < 1000; ++rep) {
            PointList cands;
            const int q = count(rng);
            for (int i = 0; i < q; ++i) {
                dvec v(n);
                for (int j = 0; j < n; ++j) v(j) = gauss(rng);
                cands.push_back(v.normalized() * rad(rng));
            }
            if (rep % 10 == 0 && !cands.empty()) cands.push_back(cands.front());  // duplicate

            for (double mu1 : {0.5, 0.75, 1.0}) {
                const auto r = uktr::expand2volume(n, cands, 1.25, mu1);
                REQUIRE(r.kept.size() + r.fresh.size() == static_cast<std::size_t>(n + 1));
                CHECK(r.volume >= mu1 * r.target * (1.0 - 2e-9));
                for (int idx : r.kept) CHECK(cands[idx].norm() <= 1.25);
                for (const auto& p : r.fresh)
                    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-8));
                CHECK(r.volume == doctest::Approx(cm_volume(gather(cands, r))).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("recycle keeps nearest evaluations while the saddle system stays sound") {
    const uktr::kernels::RbfParams kernel{uktr::kernels::Rbf::cubic, 1.0, 2.0};
    const dvec weights = dvec::Ones(2);

    PointList base = {dvec::Zero(2)};
    for (const auto& p : uktr::regsim(2, 2)) base.push_back(p);

    SUBCASE("empty ledger") {
        CHECK(uktr::recycle_extra_points(base, {}, kernel, weights, 1.25, 100).empty());
    }

    SUBCASE("duplicates and periphery are skipped") {
        PointList extras = {base[1] + dvec::Constant(2, 1e-12),  // duplicate of a member
                            vec2(0.3, 0.4), vec2(2.0, 0.0)};     // good, outside periphery
        const auto picked = uktr::recycle_extra_points(base, extras, kernel, weights, 1.25, 100);
        REQUIRE(picked.size() == 1);
        CHECK(picked[0] == 1);
    }

    SUBCASE("cap at q_max, nearest to the origin first") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> rad(0.1, 1.2), ang(0.0, 6.28318530717958648);
        PointList extras;
        while (extras.size() < 200) {
            const double r = rad(rng), t = ang(rng);
            dvec v = vec2(r * std::cos(t), r * std::sin(t));
            bool apart = true;
            for (const auto& e : extras)
                if ((e - v).norm() < 1e-3) apart = false;
            for (const auto& b : base)
                if ((b - v).norm() < 1e-3) apart = false;
            if (apart) extras.push_back(v);
        }
        const auto picked = uktr::recycle_extra_points(base, extras, kernel, weights, 1.25, 100);
        REQUIRE(static_cast<int>(picked.size()) == 100 - static_cast<int>(base.size()));

        std::vector<int> order(extras.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return extras[a].norm() < extras[b].norm(); });
        order.resize(picked.size());
        CHECK(picked == order);
    }
}

TEST_CASE("recycle conditioning gate replays against an independent assembly") {
    // Flat gaussian kernel: the saddle system degrades as points accumulate,
    // so the rcond gate must start rejecting at some prefix.
    const uktr::kernels::RbfParams kernel{uktr::kernels::Rbf::gaussian, 1.0, 2.0};
    const dvec weights = dvec::Constant(2, 0.05);

    PointList base = {dvec::Zero(2)};
    for (const auto& p : uktr::regsim(2, 2)) base.push_back(p);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rad(0.2, 1.2), ang(0.0, 6.28318530717958648);
    PointList extras;
    for (int i = 0; i < 40; ++i) {
        const double r = rad(rng), t = ang(rng);
        extras.push_back(vec2(r * std::cos(t), r * std::sin(t)));
    }
    const double floor = 1e-12;
    const auto picked = uktr::recycle_extra_points(base, extras, kernel, weights, 1.25, 100, floor);
    CHECK(picked.size() < extras.size());

    // Independent greedy replay with a plain-Eigen saddle assembly.
    auto rcond_of = [&](const PointList& pts) {
        const int q = static_cast<int>(pts.size());
        dmat s = dmat::Zero(q + 3, q + 3);
        for (int i = 0; i < q; ++i) {
            for (int j = 0; j < q; ++j) {
                const dvec d = pts[i] - pts[j];
                const double r2 = 0.05 * d.squaredNorm();
                s(i, j) = std::exp(-r2);
            }
            s(i, q) = pts[i](0);
            s(i, q + 1) = pts[i](1);
            s(i, q + 2) = 1.0;
            s(q, i) = pts[i](0);
            s(q + 1, i) = pts[i](1);
            s(q + 2, i) = 1.0;
        }
        return Eigen::PartialPivLU<dmat>(s).rcond();
    };
    std::vector<int> order(extras.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return extras[a].norm() < extras[b].norm(); });
    PointList retained = base;
    std::vector<int> expected;
    for (int idx : order) {
        if (static_cast<int>(retained.size()) >= 100) break;
        if (extras[idx].norm() > 1.25) continue;
        bool close = false;
        for (const auto& r : retained)
            if ((r - extras[idx]).norm() < 1e-10) close = true;
        if (close) continue;
        retained.push_back(extras[idx]);
        if (rcond_of(retained) >= floor)
            expected.push_back(idx);
        else
            retained.pop_back();
    }
    CHECK(picked == expected);
}

TEST_CASE("poisedness report measures volume ratio and spread") {
    PointList reg = uktr::regsim(3, 3);
    const auto good = uktr::poisedness_report(reg);
    CHECK(good.ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(good.volume == doctest::Approx(good.target).epsilon(1e-9));
    CHECK(good.sigma_min == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));

    const PointList flat = {vec2(1.0, 0.0), vec2(0.5, 0.0), vec2(-0.3, 0.0)};
    const auto bad = uktr::poisedness_report(flat);
    CHECK(bad.volume == 0.0);
    CHECK(bad.ratio == 0.0);
    CHECK(bad.sigma_min == 0.0);

    const auto none = uktr::poisedness_report({});
    CHECK(none.volume == 0.0);
    CHECK(none.target == 0.0);
}

TEST_CASE("evaluation ledger replays cached sites") {
    uktr::EvaluationLedger ledger;
    CHECK(!ledger.lookup(vec2(0.0, 0.0)).has_value());

    ledger.record(vec2(1.0, 2.0), 3.5);
    ledger.record(vec2(-1.0, 0.5), -2.0);
    CHECK(ledger.size() == 2);

    auto hit = ledger.lookup(vec2(1.0, 2.0));
    REQUIRE(hit.has_value());
    CHECK(*hit == 3.5);

    // Within the dedupe tolerance in the max norm.
    hit = ledger.lookup(vec2(1.0 + 5e-13, 2.0 - 5e-13));
    REQUIRE(hit.has_value());
    CHECK(*hit == 3.5);

    CHECK(!ledger.lookup(vec2(1.0 + 5e-12, 2.0)).has_value());

    // First record wins on duplicates.
    ledger.record(vec2(1.0, 2.0), 99.0);
    CHECK(*ledger.lookup(vec2(1.0, 2.0)) == 3.5);
    CHECK(ledger.entries().size() == 3);
}
