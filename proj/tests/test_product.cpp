#include "nashadow/errors.hpp"
#include "nashadow/family.hpp"
#include "nashadow/product.hpp"
#include "nashadow/pseudo_orbit.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace nashadow;

namespace {

// Brute-force h-shadowing on a constant finite system: every delta-pseudo-orbit
// of up to L steps has an exact orbit eps-close that ends on x_n.
bool brute_h_shadow(const MapFamily& F, double eps, double delta, std::size_t L) {
    const StateSpace& X = F.space(0);
    const std::size_t N = X.cardinality();
    std::vector<std::size_t> next(N);
    for (std::size_t s = 0; s < N; ++s) next[s] = X.index_of(evaluate(F, 0, X.point_at(s)));
    auto d = [&](std::size_t a, std::size_t b) { return X.distance(X.point_at(a), X.point_at(b)); };
    std::vector<std::size_t> path;
    std::function<bool()> rec = [&]() -> bool {
        if (path.size() >= 2) {
            bool found = false;
            for (std::size_t z = 0; z < N && !found; ++z) {
                std::size_t y = z;
                bool ok = true;
                for (std::size_t i = 0; i + 1 < path.size() && ok; ++i) {
                    if (!(d(y, path[i]) < eps)) ok = false;
                    y = next[y];
                }
                found = ok && y == path.back();
            }
            if (!found) return false;
        }
        if (path.size() == L + 1) return true;
        for (std::size_t s = 0; s < N; ++s) {
            if (!path.empty() && !(d(next[path.back()], s) < delta)) continue;
            path.push_back(s);
            const bool ok = rec();
            path.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    return rec();
}

}  // namespace

TEST(ProductTest, IdentityTimesIdentity) {
    const MapFamily P = product(builtin::identity_circle(), builtin::identity_interval());
    EXPECT_EQ(evaluate(P, 3, {0.3, 0.7}), (Point{0.3, 0.7}));
    EXPECT_TRUE(P.isometric());
}

TEST(ProductTest, RateIsMaxOfFactors) {
    const MapFamily P = product(builtin::doubling(), builtin::tripling());
    EXPECT_TRUE(P.expanding());
    EXPECT_DOUBLE_EQ(*P.rate(0), 0.5);
    EXPECT_DOUBLE_EQ(P.branch_radius(), std::min(builtin::doubling().branch_radius(),
                                                 builtin::tripling().branch_radius()));
}

TEST(ProductTest, ProjectionConsistency) {
    const MapFamily F = builtin::alternating_2_3();
    const MapFamily G = builtin::rotations({0.1, 0.7, 0.3});
    const MapFamily P = product(F, G);
    for (int t = 0; t < 20; ++t) {
        const double x = golden_sample(t), y = golden_sample(100 + t);
        const auto seg = compose(P, {x, y}, 9);
        const auto fx = compose(F, {x}, 9), gy = compose(G, {y}, 9);
        for (std::size_t i = 0; i <= 9; ++i) {
            EXPECT_NEAR(circle_distance(seg.points[i][0], fx.points[i][0]), 0.0, 1e-12);
            EXPECT_NEAR(circle_distance(seg.points[i][1], gy.points[i][0]), 0.0, 1e-12);
        }
    }
}

TEST(ProductTest, ScheduleMismatch) {
    const MapFamily short_F = MapFamily::finite_schedule(
        "short", {StateSpace::circle(), StateSpace::circle()}, {CircleLiftMap::linear(2)});
    try {
        product(short_F, builtin::doubling());
        FAIL();
    } catch (const ShadowError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ScheduleMismatch);
    }
}

TEST(ProductTest, VariantNames) {
    for (auto v : {ShadowingVariant::Plain, ShadowingVariant::H, ShadowingVariant::SLimit,
                   ShadowingVariant::Limit, ShadowingVariant::Average,
                   ShadowingVariant::AsymptoticAverage, ShadowingVariant::Periodic,
                   ShadowingVariant::Lipschitz})
        EXPECT_EQ(variant_from_name(variant_name(v)), v);
    EXPECT_FALSE(is_remark_level(ShadowingVariant::H));
    EXPECT_FALSE(is_remark_level(ShadowingVariant::SLimit));
    EXPECT_TRUE(is_remark_level(ShadowingVariant::Average));
    EXPECT_THROW(variant_from_name("sideways"), ShadowError);
}

TEST(HShadowTest, PermutationWithSmallDelta) {
    const auto r = h_shadow_check(builtin::finite_cycle(3), 0.25, 0.5);
    EXPECT_TRUE(r.verdict);
    EXPECT_EQ(r.semantics, "exhaustive");
}

TEST(HShadowTest, FiniteSystemsMatchBruteForce) {
    for (double spacing : {1.0, 0.2}) {
        for (const MapFamily& F : {builtin::finite_cycle(3, spacing), builtin::finite_shift4(spacing),
                                   builtin::finite_identity(4, spacing)}) {
            for (double eps : {0.15, 0.25, 0.5}) {
                for (double delta : {0.1, 0.3, 0.6}) {
                    VariantBudget b;
                    b.eps = eps;
                    b.delta = delta;
                    b.max_length = 5;
                    const bool got = shadowing_check(F, ShadowingVariant::H, b).verdict;
                    EXPECT_EQ(got, brute_h_shadow(F, eps, delta, 5))
                        << F.name() << " spacing " << spacing << " eps " << eps << " delta " << delta;
                }
            }
        }
    }
}

TEST(HShadowTest, FailureCarriesWitness) {
    const auto r = h_shadow_check(builtin::finite_identity(4, 0.2), 0.25, 0.3);
    EXPECT_FALSE(r.verdict);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_LT(r.witness->max_defect(), 0.3);
}

TEST(EquivalenceTest, BothPassProductPasses) {
    VariantBudget b;
    const auto rec = product_equivalence_check(builtin::finite_cycle(3), builtin::finite_shift4(),
                                               ShadowingVariant::H, b);
    EXPECT_TRUE(rec.factor_F.verdict);
    EXPECT_TRUE(rec.factor_G.verdict);
    EXPECT_TRUE(rec.product.verdict);
    EXPECT_TRUE(rec.consistent);
}

TEST(EquivalenceTest, FailingFactorFailsProduct) {
    VariantBudget b;
    const auto rec = product_equivalence_check(builtin::finite_cycle(3),
                                               builtin::finite_identity(4, 0.2),
                                               ShadowingVariant::H, b);
    EXPECT_TRUE(rec.factor_F.verdict);
    EXPECT_FALSE(rec.factor_G.verdict);
    EXPECT_FALSE(rec.product.verdict);
    EXPECT_TRUE(rec.consistent);
}

TEST(SLimitTest, PermutationPasses) {
    EXPECT_TRUE(s_limit_check(builtin::finite_cycle(3), 0.25, 0.5).verdict);
}

TEST(SLimitTest, DoublingPassesViaSolver) {
    const auto r = s_limit_check(builtin::doubling(), 0.1, 0.049, 128);
    EXPECT_TRUE(r.verdict) << r.detail;
}

TEST(SLimitTest, ProductProjectionsRecovered) {
    VariantBudget b;
    const auto rec = product_equivalence_check(builtin::finite_shift4(), builtin::finite_cycle(3),
                                               ShadowingVariant::SLimit, b);
    EXPECT_TRUE(rec.consistent);
    EXPECT_EQ(rec.product.verdict, rec.factor_F.verdict && rec.factor_G.verdict);
}

TEST(CheckJsonTest, RecordSerializes) {
    VariantBudget b;
    const auto rec = product_equivalence_check(builtin::finite_cycle(3), builtin::finite_cycle(3),
                                               ShadowingVariant::Periodic, b);
    const auto j = to_json(rec);
    EXPECT_EQ(j.at("variant"), "periodic");
    EXPECT_TRUE(j.at("product").at("remark_level").get<bool>());
}
