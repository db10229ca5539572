#include "nashadow/average_shadow.hpp"
#include "nashadow/errors.hpp"
#include "nashadow/family.hpp"
#include "nashadow/pseudo_orbit.hpp"

#include <gtest/gtest.h>

using namespace nashadow;

namespace {

std::vector<double> squares(std::size_t H, double v = 1.0) {
    std::vector<double> e(H, 0.0);
    for (std::size_t k = 0; k * k < H; ++k) e[k * k] = v;
    return e;
}

std::vector<Point> states(const MapFamily& F, std::initializer_list<std::size_t> ids) {
    std::vector<Point> out;
    for (auto i : ids) out.push_back(F.space(0).point_at(i));
    return out;
}

void expect_partition(const BlockDecomposition& b) {
    std::vector<int> cover(b.horizon, 0);
    std::size_t prev_end = 0;
    bool first = true;
    for (const auto& [a, e] : b.blocks) {
        ASSERT_LE(a, e);
        if (!first) ASSERT_GT(a, prev_end);
        first = false;
        prev_end = e;
        for (std::size_t i = a; i <= e; ++i) ++cover[i];
    }
    for (std::size_t i = 0; i < b.horizon; ++i)
        ASSERT_EQ(cover[i], b.J_prime.contains(i) ? 0 : 1) << i;
}

}  // namespace

TEST(VisitConditionTest, InvariantPointsAlwaysVisit) {
    const MapFamily F = builtin::funnel8();
    const auto A = InvariantSubsystem::finite(F, states(F, {0, 1, 2}));
    const auto r = visit_condition(A, 0.5, 10, states(F, {0, 1, 2}));
    EXPECT_DOUBLE_EQ(r.worst_fraction, 1.0);
    EXPECT_TRUE(r.verdict);
}

TEST(VisitConditionTest, FunnelEntersQuickly) {
    const MapFamily F = builtin::funnel8();
    const auto A = InvariantSubsystem::finite(F, states(F, {0, 1, 2}));
    const auto r = visit_condition(A, 0.5, 10, states(F, {0, 1, 2, 3, 4, 5, 6, 7}));
    EXPECT_GE(r.worst_fraction, 0.8);
    EXPECT_TRUE(r.verdict);
}

TEST(VisitConditionTest, IdentityControlFails) {
    const MapFamily F = builtin::finite_identity(4);
    const auto A = InvariantSubsystem::finite(F, states(F, {0}));
    const auto r = visit_condition(A, 0.5, 10, states(F, {3}));
    EXPECT_EQ(r.worst_fraction, 0.0);
    EXPECT_FALSE(r.verdict);
}

TEST(InvariantSubsystemTest, RejectsNonInvariantAndEmpty) {
    const MapFamily F = builtin::funnel8();
    EXPECT_THROW(InvariantSubsystem::finite(F, states(F, {0, 1})), ShadowError);
    EXPECT_THROW(InvariantSubsystem::finite(F, {}), ShadowError);
}

TEST(BlockDecomposeTest, EmptySetSingleBlock) {
    const auto b = block_decompose(IndexSet::empty(1000), 1000);
    ASSERT_EQ(b.blocks.size(), 1u);
    EXPECT_EQ(b.blocks[0], (std::pair<std::size_t, std::size_t>{0, 999}));
    EXPECT_EQ(b.B.members, std::vector<std::size_t>{999});
}

TEST(BlockDecomposeTest, SquaresExhaustive) {
    const std::size_t H = 1 << 14;
    const IndexSet J = IndexSet::where(H, [](std::size_t n) {
        std::size_t r = 0;
        while (r * r < n) ++r;
        return r * r == n;
    });
    const auto b = block_decompose(J, H);
    expect_partition(b);
    for (auto j : J.members) EXPECT_TRUE(b.J_prime.contains(j));
    for (std::size_t i = 0; i < b.blocks.size(); ++i) EXPECT_TRUE(b.B.contains(b.blocks[i].second));
    EXPECT_LT(b.density_J_prime_B.value(), 0.1);
    // Block identity against an independently rebuilt dyadic cover.
    for (std::size_t i = 1; i <= b.selectors.size(); ++i) {
        const std::size_t lo = b.boundaries[i - 1];
        const std::size_t hi = i < b.boundaries.size() ? b.boundaries[i] : H;
        const std::size_t len = std::size_t{1} << b.selectors[i - 1];
        std::vector<bool> cover(H, false);
        for (auto j : J.members)
            for (std::size_t t = (j / len) * len; t < std::min(H, (j / len + 1) * len); ++t) cover[t] = true;
        for (std::size_t t = lo; t < hi; ++t) ASSERT_EQ(b.J_prime.contains(t), cover[t]) << t;
    }
}

TEST(BlockDecomposeTest, DenseSetRejected) {
    const IndexSet evens = IndexSet::where(1000, [](std::size_t n) { return n % 2 == 0; });
    try {
        block_decompose(evens, 1000);
        FAIL();
    } catch (const ShadowError& e) {
        EXPECT_EQ(e.code(), ErrorCode::DensityTooHigh);
    }
}

TEST(LiftTest, OrbitInsideAIsKept) {
    const MapFamily F = builtin::funnel8();
    const auto A = InvariantSubsystem::finite(F, states(F, {0, 1, 2}));
    const PseudoOrbit po = perturb_orbit(F, F.space(0).point_at(1), 200, 0.0, 0);
    const auto b = block_decompose(IndexSet::empty(201), 201);
    const auto l = lift_to_A(A, po, b, F.space(0).point_at(0));
    for (std::size_t i = 0; i <= 200; ++i)
        if (!b.J_prime.contains(i)) EXPECT_EQ(l.y[i], po.points[i]);
    EXPECT_EQ(l.cesaro_defect, 0.0);
}

TEST(LiftTest, TwoCycleLiftIsExactOnBlocks) {
    const MapFamily F = builtin::finite_constant(StateSpace::discrete(4), {1, 0, 0, 1}, "two_cycle");
    const auto A = InvariantSubsystem::finite(F, states(F, {0, 1}));
    const std::size_t H = 10000;
    const PseudoOrbit po = inject_defects(F, F.space(0).point_at(0), squares(H));
    IndexSet J = IndexSet::where(H + 1, [&](std::size_t i) { return i < H && po.defects[i] > 0; });
    const auto b = block_decompose(J, H + 1);
    const auto l = lift_to_A(A, po, b, F.space(0).point_at(0));
    for (const auto& [a, e] : b.blocks)
        for (std::size_t i = a; i < e; ++i) ASSERT_EQ(l.y[i + 1], evaluate(F, i, l.y[i]));
    EXPECT_TRUE(l.support_in_J_prime_B);
    // Defects live on J' u B, so their mean is at most diam * #(J' u B) / H.
    const IndexSet S = set_union(b.J_prime, b.B);
    EXPECT_LE(l.cesaro_defect, static_cast<double>(S.count_below(H)) / H + 1e-12);
    EXPECT_LT(l.cesaro_defect, 0.1);
}

TEST(AverageShadowTest, ExactOrbitInA) {
    const MapFamily F = builtin::funnel8();
    const auto A = InvariantSubsystem::finite(F, states(F, {0, 1, 2}));
    const PseudoOrbit po = perturb_orbit(F, F.space(0).point_at(2), 500, 0.0, 0);
    const auto r = average_shadow_point(A, po);
    EXPECT_EQ(r.y, F.space(0).point_at(2));
    EXPECT_EQ(r.cesaro_error, 0.0);
}

TEST(AverageShadowTest, FunnelSquaresMatchesExhaustiveOracle) {
    const MapFamily F = builtin::funnel8();
    const auto A = InvariantSubsystem::finite(F, states(F, {0, 1, 2}));
    const std::size_t H = 10000;
    const PseudoOrbit po = inject_defects(F, F.space(0).point_at(0), squares(H));
    const auto r = average_shadow_point(A, po);
    double best = 1e9;
    for (std::size_t s = 0; s < 3; ++s) {
        Point y = F.space(0).point_at(s);
        double sum = 0;
        for (std::size_t i = 0; i <= H; ++i) {
            sum += F.space(i).distance(y, po.points[i]);
            if (i < H) y = evaluate(F, i, y);
        }
        best = std::min(best, sum / (H + 1));
    }
    EXPECT_NEAR(r.cesaro_error, best, 1e-12);
    EXPECT_LT(r.cesaro_error, 0.05);
    EXPECT_LE(r.cesaro_error, r.certificate);
    EXPECT_TRUE(r.lift.support_in_J_prime_B);
    EXPECT_TRUE(r.verdict);
}

TEST(AverageShadowTest, IdentityControlRaisesHypothesisError) {
    const MapFamily F = builtin::finite_identity(4);
    const auto A = InvariantSubsystem::finite(F, states(F, {0}));
    const PseudoOrbit po = perturb_orbit(F, F.space(0).point_at(3), 100, 0.0, 0);
    try {
        average_shadow_point(A, po);
        FAIL();
    } catch (const ShadowError& e) {
        EXPECT_EQ(e.code(), ErrorCode::HypothesisViolated);
    }
}
