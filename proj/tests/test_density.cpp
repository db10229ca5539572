#include "nashadow/density.hpp"
#include "nashadow/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nashadow;

namespace {

bool is_square(std::size_t n) {
    std::size_t r = 0;
    while (r * r < n) ++r;
    return r * r == n;
}

std::vector<double> squares_indicator(std::size_t H) {
    std::vector<double> a(H, 0.0);
    for (std::size_t n = 0; n < H; ++n) a[n] = is_square(n) ? 1.0 : 0.0;
    return a;
}

}  // namespace

TEST(DensityTest, UpperDensityExamples) {
    const IndexSet evens = IndexSet::where(1000, [](std::size_t n) { return n % 2 == 0; });
    EXPECT_DOUBLE_EQ(upper_density(evens, 1000).value(), 0.5);
    const IndexSet sq = IndexSet::where(10000, is_square);
    EXPECT_EQ(sq.size(), 100u);
    EXPECT_DOUBLE_EQ(upper_density(sq, 10000).value(), 0.01);
    EXPECT_EQ(upper_density(IndexSet::empty(50), 50).value(), 0.0);
    EXPECT_THROW(upper_density(sq, 0), ShadowError);
}

TEST(DensityTest, IndexSetNormalizes) {
    const IndexSet s(10, {5, 1, 5, 3});
    EXPECT_EQ(s.members, (std::vector<std::size_t>{1, 3, 5}));
    EXPECT_EQ(s.count_below(4), 2u);
    EXPECT_TRUE(s.contains(3));
    EXPECT_FALSE(s.contains(4));
    EXPECT_THROW(IndexSet(4, {4}), ShadowError);
    EXPECT_EQ(set_union(IndexSet(10, {1, 2}), IndexSet(10, {2, 7})).members,
              (std::vector<std::size_t>{1, 2, 7}));
}

TEST(DensityTest, CesaroToDensityZeroOnZeroAndHarmonic) {
    const std::vector<double> zero(1000, 0.0);
    EXPECT_EQ(cesaro_to_density_zero(zero, 1000).J.size(), 0u);
    std::vector<double> h(1000);
    for (std::size_t n = 0; n < h.size(); ++n) h[n] = 1.0 / (n + 1);
    const CesaroSplit s = cesaro_to_density_zero(h, 1000);
    EXPECT_LE(s.J.size(), 1u);
    EXPECT_LE(s.density.value(), 0.001);
}

TEST(DensityTest, CesaroToDensityZeroSquares) {
    const std::size_t H = 10000;
    const auto a = squares_indicator(H);
    const CesaroSplit s = cesaro_to_density_zero(a, H);
    EXPECT_EQ(s.J, IndexSet::where(H, is_square));
    EXPECT_DOUBLE_EQ(s.density.value(), 0.01);
    for (std::size_t n = 0; n < H; ++n)
        if (!s.J.contains(n)) ASSERT_EQ(a[n], 0.0) << n;
    EXPECT_EQ(s.complement_sup, 0.0);
}

TEST(DensityTest, CesaroToDensityZeroLevelGuarantee) {
    // Random sparse spikes over a decaying floor; check sup off J past each cut.
    std::vector<double> a(4096);
    std::uint64_t x = 12345;
    for (std::size_t n = 0; n < a.size(); ++n) {
        x = x * 6364136223846793005ULL + 1442695040888963407ULL;
        a[n] = ((x >> 33) % 97 == 0 ? 0.9 : 0.0) + 0.5 / std::sqrt(n + 1.0);
    }
    const CesaroSplit s = cesaro_to_density_zero(a, a.size());
    for (std::size_t k = 0; k < s.cuts.size(); ++k)
        for (std::size_t n = s.cuts[k]; n < a.size(); ++n)
            if (!s.J.contains(n)) ASSERT_LE(a[n], s.levels[k] + 1e-15);
}

TEST(DensityTest, NonNullCesaroRejected) {
    const std::vector<double> ones(100, 1.0);
    EXPECT_THROW(cesaro_to_density_zero(ones, 100), ShadowError);
}

TEST(DensityTest, DensityZeroToCesaroExamples) {
    const std::vector<double> zero(100, 0.0);
    const auto c0 = density_zero_to_cesaro(zero, IndexSet::empty(100), 1.0);
    EXPECT_EQ(c0.bound, 0.0);
    EXPECT_EQ(c0.actual, 0.0);

    const auto a = squares_indicator(10000);
    const auto c = density_zero_to_cesaro(a, IndexSet::where(10000, is_square), 1.0);
    EXPECT_DOUBLE_EQ(c.actual, 0.01);
    EXPECT_LE(c.actual, c.bound);
    for (std::size_t n = 0; n < c.actual_means.size(); ++n)
        ASSERT_LE(c.actual_means[n], c.bound_by_n[n] + 1e-15);

    std::vector<double> ev(1000);
    for (std::size_t n = 0; n < ev.size(); ++n) ev[n] = n % 2 == 0 ? 3.0 : 0.0;
    const auto ce = density_zero_to_cesaro(ev, IndexSet::where(1000, [](std::size_t n) { return n % 2 == 0; }), 3.0);
    EXPECT_NEAR(ce.bound, 1.5, 1e-12);
}

TEST(DensityTest, PatchSetsEmptyAndSingle) {
    const std::size_t H = 1024;
    std::vector<IndexSet> menus(12, IndexSet::all(H));
    const auto r = patch_sets(std::vector<IndexSet>(12, IndexSet::empty(H)), menus, H);
    EXPECT_EQ(r.J.size(), 0u);
    const IndexSet sq = IndexSet::where(H, is_square);
    const auto one = patch_sets({sq}, menus, H, {true});
    EXPECT_EQ(one.J, sq);
}

TEST(DensityTest, PatchSetsBlockIdentityExhaustive) {
    const std::size_t H = 1 << 14;
    std::vector<IndexSet> J, R;
    for (std::size_t i = 0; i < 13; ++i) {
        const std::size_t step = std::size_t{1} << (i + 1);
        J.push_back(IndexSet::where(H, [step](std::size_t n) { return n % step == 0; }));
        R.push_back(IndexSet::all(H));
    }
    const PatchResult r = patch_sets(J, R, H);
    EXPECT_LT(r.density.value(), 0.01);
    for (std::size_t b = 1; b <= r.selectors.size(); ++b) {
        const std::size_t lo = r.boundaries[b - 1];
        const std::size_t hi = b < r.boundaries.size() ? r.boundaries[b] : H;
        const IndexSet& Jl = J[r.selectors[b - 1]];
        for (std::size_t n = lo; n < hi; ++n) ASSERT_EQ(r.J.contains(n), Jl.contains(n)) << n;
    }
}

TEST(DensityTest, PatchSetsRespectsMenus) {
    const std::size_t H = 1 << 12;
    std::vector<IndexSet> J, R;
    for (std::size_t i = 0; i < 11; ++i) {
        const std::size_t step = std::size_t{1} << (i + 1);
        J.push_back(IndexSet::where(H, [step](std::size_t n) { return n % step == 0; }));
        R.push_back(IndexSet::where(H, [i](std::size_t n) { return n % (50 + i) == 7; }));
    }
    const PatchResult r = patch_sets(J, R, H);
    for (std::size_t i = 1; i < r.boundaries.size(); ++i)
        EXPECT_TRUE(R[i - 1].contains(r.boundaries[i])) << i;
    std::vector<IndexSet> tiny(11, IndexSet(H, {1}));
    EXPECT_THROW(patch_sets(J, tiny, H), ShadowError);
}
