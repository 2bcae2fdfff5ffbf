#include "gen.hpp"

#include "kakeya/cinematic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/tubes.hpp"

#include <gtest/gtest.h>

using namespace kakeya;

namespace {

SlopeCurveParams random_params(CounterRng& rng, double c) {
    return {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), c};
}

double family_oracle(const std::vector<SlopeCurveParams>& f, double delta) {
    double best = 0;
    for (const auto& p : f)
        for (double r = delta; r <= 8 * (1 + 1e-12); r *= 2) {
            int n = 0;
            for (const auto& q : f) n += std::abs(p.a - q.a) + std::abs(p.b - q.b) + std::abs(p.d - q.d) < r / 2;
            best = std::max(best, n / (r / delta));
        }
    return best;
}

} // namespace

TEST(CurveEval, Examples) {
    const auto id = polynomial({0, 1});
    const Jet z = curve_eval({0, 0, 0, 0}, id, 0.3);
    EXPECT_EQ(z.v, 0);
    EXPECT_EQ(z.d1, 0);
    EXPECT_EQ(z.d2, 0);
    for (double t : {-0.7, 0.0, 0.4}) {
        const Jet j = curve_eval({0, 0, 1, 0}, id, t);
        EXPECT_NEAR(j.v, t * t, 1e-15);
        EXPECT_NEAR(j.d1, 2 * t, 1e-15);
        EXPECT_NEAR(j.d2, 2, 1e-15);
    }
}

TEST(CurveEval, FiniteDifferences) {
    CounterRng rng(601);
    const auto f = polynomial({0, 1.5, 1.0 / 300});
    for (int i = 0; i < 200; ++i) {
        const auto p = random_params(rng, rng.uniform(-1, 1));
        const double t = rng.uniform(-0.99, 0.99), h = 1e-5;
        const Jet j = curve_eval(p, f, t);
        const double fd1 = (curve_eval(p, f, t + h).v - curve_eval(p, f, t - h).v) / (2 * h);
        const double fd2 = (curve_eval(p, f, t + h).d1 - curve_eval(p, f, t - h).d1) / (2 * h);
        EXPECT_NEAR(j.d1, fd1, 1e-4 * std::max(1.0, std::abs(j.d1)));
        EXPECT_NEAR(j.d2, fd2, 1e-4 * std::max(1.0, std::abs(j.d2)));
    }
}

TEST(BaseFunction, Checks) {
    EXPECT_TRUE(check_base_function(polynomial({0, 1}), true).ok);
    EXPECT_TRUE(check_base_function(polynomial({0, 1.5, 1.0 / 300}), true).ok);
    EXPECT_FALSE(check_base_function(constant_function(0), false).ok);
    EXPECT_FALSE(check_base_function(polynomial({0.1, 1}), true).ok);
    EXPECT_TRUE(check_base_function(polynomial({0.1, 1}), false).ok);
    EXPECT_FALSE(check_base_function(polynomial({0, 3}), false).ok);
    EXPECT_FALSE(check_base_function(polynomial({0, 1.5, 0.1}), false).ok);
    // the endpoint derivative 1 - 2/300 falls below 1
    EXPECT_FALSE(check_base_function(polynomial({0, 1, 1.0 / 300}), true).ok);
}

TEST(Twist, ZeroFunctionIsCoordinateProjection) {
    CounterRng rng(602);
    const auto e = testgen::random_nonempty(rng, 3, 4, 0.05);
    const auto img = twisted_project(e, constant_function(0), false);
    std::vector<Cell> want;
    for (const auto& c : e) want.push_back({c[0], c[2], 0});
    EXPECT_EQ(img, CellSet(Resolution{4, 2}, want));
    const auto dil = twisted_project(e, constant_function(0), true);
    EXPECT_TRUE(is_subset(img, dil));
    EXPECT_LE(dil.size(), 9 * img.size());
}

TEST(Twist, PointExample) {
    const int k = 6;
    const Resolution r3{k, 3}, r2{k, 2};
    const CellSet e(r3, {cell_of(Vec3(0.5, 1, 0.25), r3)});
    const auto id = polynomial({0, 1});
    const auto img = twisted_project(e, id, false);
    const Vec3 c = e.center(0);
    ASSERT_EQ(img.size(), 1u);
    EXPECT_EQ(img[0], cell_of(Vec3(c[0] + c[2] * c[1], c[2], 0), r2));
    EXPECT_TRUE(twisted_project(e, id, true).contains(cell_of(Vec3(0.75, 0.25, 0), r2)));
}

TEST(Twist, AxisTubeMapsNearSegment) {
    const int k = 5;
    const Resolution r3{k, 3};
    const Line axis = make_line(3, Vec3::Zero(), Vec3(0, 0, 1));
    const auto img = twisted_project(line_cells(axis, r3), polynomial({0, 1}), true);
    for (std::size_t i = 0; i < img.size(); ++i) EXPECT_LE(std::abs(img.center(i)[0]), 3 * r3.delta());
}

TEST(Twist, SliceFubini) {
    // each z-row of the image spans at most the x-extent of that slab's image points plus dilation
    CounterRng rng(603);
    const auto e = testgen::random_nonempty(rng, 3, 4, 0.1);
    const auto f = polynomial({0, 1.5, 1.0 / 300});
    const auto img = twisted_project(e, f, false);
    std::map<std::int32_t, std::pair<std::int32_t, std::int32_t>> extent;
    std::map<std::int32_t, std::int64_t> count;
    for (const auto& c : img) {
        auto [it, fresh] = extent.try_emplace(c[1], c[0], c[0]);
        it->second.first = std::min(it->second.first, c[0]);
        it->second.second = std::max(it->second.second, c[0]);
        ++count[c[1]];
    }
    for (const auto& [z, n] : count) EXPECT_LE(n, extent[z].second - extent[z].first + 1);
}

TEST(Cinematic, Examples) {
    const auto id = polynomial({0, 1});
    const SlopeCurveParams p{0.2, -0.3, 0.5, 0.1};
    const auto same = cinematic_gap(p, p, id);
    EXPECT_EQ(same.lhs, 0);
    EXPECT_EQ(same.rhs, 0);
    auto q = p;
    q.a += 0.25;
    const auto da = cinematic_gap(p, q, id);
    EXPECT_NEAR(da.lhs, 0.25, 1e-12);
    EXPECT_TRUE(da.holds());
    q = p;
    q.d -= 0.3;
    const auto dd = cinematic_gap(p, q, id);
    EXPECT_NEAR(dd.lhs, 0.6, 1e-9);
    EXPECT_NEAR(dd.rhs, 0.15, 1e-12);
    q.c = 0.7;
    EXPECT_THROW(cinematic_gap(p, q, id), Error);
}

TEST(Cinematic, HalfBoundForAdmissibleBase) {
    CounterRng rng(604);
    for (const auto& f : {polynomial({0, 1}), polynomial({0, 1.5, 1.0 / 300}), polynomial({0, -1.2, -1.0 / 200})}) {
        ASSERT_TRUE(check_base_function(f, true).ok);
        for (int i = 0; i < 300; ++i) {
            const double c = rng.uniform(-1, 1);
            const auto g = cinematic_gap(random_params(rng, c), random_params(rng, c), f);
            EXPECT_TRUE(g.holds()) << "lhs " << g.lhs << " rhs " << g.rhs << " t " << g.t_min;
        }
    }
}

TEST(Cinematic, InfimumMatchesDenseGrid) {
    CounterRng rng(605);
    const auto f = polynomial({0, 1});
    for (int i = 0; i < 20; ++i) {
        const auto p = random_params(rng, 0), q = random_params(rng, 0);
        const auto g = cinematic_gap(p, q, f);
        double dense = INFINITY;
        for (int s = 0; s <= 200000; ++s) {
            const double t = -1 + 2.0 * s / 200000;
            const Jet a = curve_eval(p, f, t), b = curve_eval(q, f, t);
            dense = std::min(dense, std::abs(a.v - b.v) + std::abs(a.d1 - b.d1) + std::abs(a.d2 - b.d2));
        }
        EXPECT_LE(g.lhs, dense + 1e-9);
        EXPECT_GE(g.lhs, dense - 1e-4);
    }
}

TEST(LpNorm, Examples) {
    const int k = 4;
    const Resolution r{k, 2};
    const double cell = r.delta() * r.delta();
    const CellSet a(r, {Cell{0, 0, 0}, Cell{1, 0, 0}, Cell{2, 0, 0}});
    const CellSet b(r, {Cell{5, 5, 0}});
    for (double p : {1.0, 1.5, 3.0}) {
        EXPECT_NEAR(lp_norm_union({a}, p), std::pow(3 * cell, 1 / p), 1e-14);
        EXPECT_NEAR(lp_norm_union({a, b}, p), std::pow(4 * cell, 1 / p), 1e-14);
        EXPECT_NEAR(lp_norm_union({a, a}, p), std::pow(std::pow(2, p) * 3 * cell, 1 / p), 1e-14);
    }
    EXPECT_THROW(lp_norm_union({a}, 0.5), Error);
    EXPECT_THROW(lp_norm_union({a, CellSet(Resolution{k + 1, 2}, {Cell{0, 0, 0}})}, 1.5), Error);
    EXPECT_EQ(lp_norm_union({}, 1.5), 0);
}

TEST(FamilyFrostman, Examples) {
    const double delta = 1.0 / 64;
    std::vector<SlopeCurveParams> ap;
    for (int i = 0; i < 64; ++i) ap.push_back({-0.5 + i * delta, 0, 0, 0});
    const auto r = frostman_family_check(ap, delta, 0.1);
    EXPECT_DOUBLE_EQ(r.constant, 1.0);
    EXPECT_TRUE(r.ok);
    EXPECT_THROW(frostman_family_check({ap[0], ap[0]}, delta, 0.1), Error);
    EXPECT_THROW(frostman_family_check({}, delta, 0.1), Error);
}

TEST(FamilyFrostman, MatchesBallCountOracle) {
    CounterRng rng(606);
    const double delta = 1.0 / 32;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<SlopeCurveParams> fam;
        while (fam.size() < 32) {
            const auto p = random_params(rng, 0);
            bool sep = true;
            for (const auto& q : fam) sep &= std::abs(p.a - q.a) + std::abs(p.b - q.b) + std::abs(p.d - q.d) >= delta;
            if (sep) fam.push_back(p);
        }
        const auto r = frostman_family_check(fam, delta, 0.5);
        EXPECT_DOUBLE_EQ(r.constant, family_oracle(fam, delta));
        EXPECT_EQ(r.ok, r.constant <= std::pow(delta, -0.5));
    }
}

TEST(TubeImage, RandomTubesNearCurve) {
    CounterRng rng(607);
    const auto f = polynomial({0, 1.5, 1.0 / 300});
    for (int i = 0; i < 20; ++i) {
        const SlopeCurveParams p{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                                 rng.uniform(-0.3, 0.3)};
        const auto c = tube_image_check(p, f, 5);
        EXPECT_TRUE(c.holds()) << "max distance " << c.max_distance;
    }
}

TEST(Probe, Examples) {
    EXPECT_THROW(sigma_probe("single", 1, constant_function(0), {4}), Error);
    EXPECT_THROW(sigma_probe("nope", 1, polynomial({0, 1.5}), {4}), Error);
    const auto rows = sigma_probe("single", 1, polynomial({0, 1.5}), {4, 5, 6});
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& row : rows) {
        EXPECT_EQ(row.tubes, 1u);
        // one dilated curve neighbourhood of length 2: measure a bounded multiple of delta
        const double delta = std::ldexp(1.0, -row.k);
        EXPECT_GE(row.image_measure, 2 * delta);
        EXPECT_LE(row.image_measure, 16 * delta);
    }
    EXPECT_LT(rows[0].log_ratio, rows[1].log_ratio);
    EXPECT_LT(rows[1].log_ratio, rows[2].log_ratio);
}
