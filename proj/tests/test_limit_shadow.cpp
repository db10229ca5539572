#include "nashadow/errors.hpp"
#include "nashadow/family.hpp"
#include "nashadow/limit_shadow.hpp"
#include "nashadow/pseudo_orbit.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nashadow;

namespace {

std::vector<double> harmonic(std::size_t n, double cap) {
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = std::min(cap, 1.0 / (i + 1));
    return e;
}

}  // namespace

TEST(EquicontinuityTest, IsometriesGiveEpsilon) {
    EXPECT_DOUBLE_EQ(equicontinuity_modulus(builtin::identity_circle(), 0.1).delta, 0.1);
    EXPECT_DOUBLE_EQ(equicontinuity_modulus(builtin::rotations({0.3, 0.17}), 0.1).delta, 0.1);
    EXPECT_DOUBLE_EQ(equicontinuity_modulus(builtin::finite_cycle(3), 0.5).delta, 0.5);
}

TEST(EquicontinuityTest, DoublingFails) {
    try {
        equicontinuity_modulus(builtin::doubling(), 0.1, 20);
        FAIL();
    } catch (const ShadowError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotEquicontinuousAtHorizon);
    }
}

TEST(SpliceTest, ZeroCutUnchanged) {
    const MapFamily R = builtin::rotations({0.2});
    const PseudoOrbit po = inject_defects(R, {0.1}, harmonic(50, 0.4));
    const SplicedOrbit s = splice(R, po, 0);
    EXPECT_EQ(s.orbit.points, po.points);
}

TEST(SpliceTest, PermutationHeadIsExactBackwardIteration) {
    const MapFamily C = builtin::finite_cycle(5);
    const PseudoOrbit po = perturb_orbit(C, C.space(0).point_at(2), 20, 0.0, 0);
    std::vector<Point> pts = po.points;
    pts[10] = C.space(0).point_at(0);  // a jump
    const PseudoOrbit jumped = make_pseudo_orbit(C, pts);
    const SplicedOrbit s = splice(C, jumped, 10);
    // Walk backward from x_10 through the inverse permutation.
    std::size_t state = 0;
    for (std::size_t j = 10; j-- > 0;) {
        state = (state + 4) % 5;
        EXPECT_EQ(s.orbit.points[j], C.space(0).point_at(state));
    }
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(s.orbit.defects[i], 0.0);
}

TEST(SpliceTest, RotationSpliceDefectsBelowCutThreshold) {
    const MapFamily R = builtin::rotations({0.6180339887498949});
    const PseudoOrbit po = inject_defects(R, {0.1}, harmonic(2000, 0.49));
    for (std::size_t n = 1; n <= 8; ++n) {
        std::size_t cut = 0;
        while (po.defects[cut] >= 1.0 / n) ++cut;
        const SplicedOrbit s = splice(R, po, cut);
        EXPECT_LT(s.orbit.max_defect(), 1.0 / n);
    }
}

TEST(LimitShadowTest, TrueOrbitGivesStartPoint) {
    const MapFamily R = builtin::rotations({0.3});
    const PseudoOrbit po = perturb_orbit(R, {0.25}, 400, 0.0, 0);
    const auto r = limit_shadow_point(R, po, 4);
    EXPECT_NEAR(circle_distance(r.y[0], 0.25), 0.0, 1e-12);
    for (const auto& row : r.table) EXPECT_LT(row.level_error, 1e-12);
    EXPECT_TRUE(r.verdict);
}

TEST(LimitShadowTest, RotationHarmonicDefects) {
    const MapFamily R = builtin::rotations({0.6180339887498949});
    const PseudoOrbit po = inject_defects(R, {0.1}, harmonic(10000, 0.5));
    const auto r = limit_shadow_point(R, po, 8);
    ASSERT_EQ(r.table.size(), 8u);
    for (std::size_t i = 1; i < r.table.size(); ++i) {
        EXPECT_LE(r.table[i].window_error, r.table[i - 1].window_error);
        EXPECT_LT(r.table[i].level_error, r.table[i - 1].level_error);
        EXPECT_EQ(r.table[i].cut, i + 1);
    }
    EXPECT_LT(r.table.back().window_error, 1.0 / 8);
    EXPECT_TRUE(r.verdict);
    EXPECT_EQ(r.oracle, ShadowOracle::Transport);
}

TEST(LimitShadowTest, PermutationEventuallyZeroDefectsExact) {
    const MapFamily C = builtin::finite_cycle(4);
    std::vector<double> e(60, 0.0);
    e[3] = 1.0;
    e[7] = 1.0;
    const PseudoOrbit po = inject_defects(C, C.space(0).point_at(1), e);
    const auto r = limit_shadow_point(C, po, 3);
    EXPECT_EQ(r.oracle, ShadowOracle::Exhaustive);
    // Brute force: the state whose orbit matches the tail after the last jump.
    std::size_t match = 99;
    for (std::size_t s = 0; s < 4; ++s) {
        Point y = C.space(0).point_at(s);
        bool ok = true;
        for (std::size_t i = 0; i < po.points.size(); ++i) {
            if (i >= 8 && y != po.points[i]) ok = false;
            y = evaluate(C, i, y);
        }
        if (ok) match = s;
    }
    EXPECT_EQ(r.y, C.space(0).point_at(match));
    EXPECT_EQ(r.errors.back(), 0.0);
}

TEST(LimitShadowTest, NonEquicontinuousGate) {
    const MapFamily D = builtin::doubling();
    const PseudoOrbit po = perturb_orbit(D, {0.1}, 100, 0.0, 0);
    LimitOptions opt;
    opt.oracle = ShadowOracle::Transport;
    EXPECT_THROW(limit_shadow_point(D, po, 4, opt), ShadowError);
}

TEST(LimitShadowTest, ExpandingSolverRoute) {
    const MapFamily D = builtin::doubling();
    std::vector<double> e(400);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = 0.049 / (i + 1);
    const PseudoOrbit po = inject_defects(D, {0.1}, e);
    LimitOptions opt;
    opt.check_equicontinuity = false;
    const auto r = limit_shadow_point(D, po, 6, opt);
    EXPECT_EQ(r.oracle, ShadowOracle::Solver);
    EXPECT_TRUE(r.verdict);
    EXPECT_LT(r.errors.back(), 1e-6);
}
