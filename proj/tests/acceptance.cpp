// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [--criterion N]

#include "nashadow/average_shadow.hpp"
#include "nashadow/density.hpp"
#include "nashadow/errors.hpp"
#include "nashadow/family.hpp"
#include "nashadow/limit_shadow.hpp"
#include "nashadow/product.hpp"
#include "nashadow/pseudo_orbit.hpp"
#include "nashadow/scenario.hpp"
#include "nashadow/shadow_solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>

using namespace nashadow;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

bool is_square(std::size_t n) {
    std::size_t r = 0;
    while (r * r < n) ++r;
    return r * r == n;
}

// 1. Shadowing bound on the doubling family.
Verdict criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const MapFamily D = builtin::doubling();
    const auto budget = delta_budget(D, 64, 0.1, 0.98);
    const double delta = budget.front();
    double worst = 0.0;
    bool ok = std::fabs(delta - 0.049) < 1e-15;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const PseudoOrbit po = perturb_orbit(D, {golden_sample(seed)}, 64, delta, seed);
        const ShadowResult r = pullback_shadow(D, po, 0.1);
        worst = std::max(worst, r.report.max_error);
        ok = ok && r.report.verdict && r.report.max_error < 0.1;
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 1.0;
    return {ok, "delta " + num(delta) + ", worst max error " + num(worst) + " < 0.1 over 100 seeds, " +
                    num(secs, 3) + " s < 1 s"};
}

// 2. Uniqueness decay.
Verdict criterion2() {
    bool ok = true;
    const double eps = 0.1;
    const MapFamily D = builtin::doubling();
    const PseudoOrbit pd = perturb_orbit(D, {0.2}, 30, 0.0, 0);
    for (std::size_t k = 1; k <= 30; ++k)
        ok = ok && uniqueness_certificate(D, pd, eps, k) == 2 * eps * std::ldexp(1.0, -static_cast<int>(k));
    const MapFamily S = builtin::slow_expanding();
    const PseudoOrbit ps = perturb_orbit(S, {0.2}, 100, 0.0, 0);
    double worst = 0.0;
    for (std::size_t k = 1; k <= 100; ++k)
        worst = std::max(worst, std::fabs(uniqueness_certificate(S, ps, eps, k) - 2 * eps / (k + 1.0)));
    ok = ok && worst <= 1e-12;
    const MapFamily P = builtin::positive_product_control();
    const PseudoOrbit pp = perturb_orbit(P, {0.2}, 200, 0.0, 0);
    double inf_prod = 1.0;
    for (int n = 1; n < 200; ++n) inf_prod *= 1.0 - std::ldexp(1.0, -n);
    const double floor = 0.2 * 2 * eps * inf_prod;
    double smallest = 1.0;
    for (std::size_t k = 1; k <= 200; ++k) smallest = std::min(smallest, uniqueness_certificate(P, pp, eps, k));
    ok = ok && smallest > floor;
    return {ok, "half rate exact for k=1..30; telescoping error " + num(worst) +
                    " <= 1e-12; control min " + num(smallest) + " > " + num(floor)};
}

// 3. Solver against a brute-force grid minimizer.
Verdict criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    const MapFamily D = builtin::doubling();
    const double eps = 0.1;
    const std::size_t H = 16, cells = 1000000;
    const double cert = diameter_bound(D, H, eps);
    bool ok = true;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const PseudoOrbit po = perturb_orbit(D, {golden_sample(seed + 7)}, H, 0.049, 100 + seed);
        const double z = pullback_shadow(D, po, eps).report.shadow_point[0];
        double best = 1.0, best_x = 0.0;
        for (std::size_t g = 0; g < cells; ++g) {
            double x = static_cast<double>(g) * 1e-6, err = 0.0;
            for (std::size_t n = 0; n <= H && err < best; ++n) {
                err = std::max(err, circle_distance(x, po.points[n][0]));
                x = std::fmod(2.0 * x, 1.0);
            }
            if (err < best) best = err, best_x = static_cast<double>(g) * 1e-6;
        }
        const double gap = circle_distance(z, best_x);
        worst = std::max(worst, gap);
        ok = ok && gap <= cert;
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 30.0;
    return {ok, "worst |solver - grid| " + num(worst) + " <= certificate " + num(cert) + ", " +
                    num(secs, 3) + " s < 30 s"};
}

// 4. Periodic shadowing near {1/3, 2/3}.
Verdict criterion4() {
    const MapFamily D = builtin::doubling();
    Rng rng(4);
    const double amp = 0.01 / 3.0;
    auto jitter = [&](double c) { return wrap_unit(c + (2 * rng.uniform() - 1) * amp); };
    const double a = jitter(1.0 / 3), b = jitter(2.0 / 3);
    const PseudoOrbit po = periodicize(D, make_pseudo_orbit(D, {{a}, {b}, {a}}), 2, 8);
    const PeriodicShadowResult r = periodic_shadow(D, po, 2, 0.05);
    const double x = r.point[0];
    const double res = circle_distance(wrap_unit(4.0 * x), x);
    const double dist = circle_distance(x, 1.0 / 3);
    const bool ok = po.max_defect() < 0.01 && res < 1e-9 && dist < 0.05;
    return {ok, "max defect " + num(po.max_defect()) + " < 0.01, |F_2(x)-x| " + num(res) +
                    " < 1e-9, d(x,1/3) " + num(dist) + " < 0.05"};
}

// 5. Cesaro null versus density zero on the square indicator.
Verdict criterion5() {
    const std::size_t H = 10000;
    std::vector<double> a(2 * H);
    for (std::size_t n = 0; n < a.size(); ++n) a[n] = is_square(n) ? 1.0 : 0.0;
    const std::span<const double> head(a.data(), H);
    const CesaroSplit s = cesaro_to_density_zero(head, H);
    const bool j_ok = s.J == IndexSet::where(H, is_square) && s.density.value() == 0.01;
    bool comp_ok = true;
    for (std::size_t n = 0; n < H; ++n)
        if (!s.J.contains(n) && a[n] != 0.0) comp_ok = false;
    const CesaroCertificate c = density_zero_to_cesaro(head, s.J, 1.0);
    const bool cert_ok = c.actual == 0.01 && c.actual <= c.bound;
    const CesaroSplit s2 = cesaro_to_density_zero(a, 2 * H);
    const double ratio = s2.density.value() / s.density.value();
    const bool halves = std::fabs(ratio - 0.5) <= 0.05;
    return {j_ok && comp_ok && cert_ok && halves,
            "J density " + num(s.density.value()) + (j_ok ? " (= squares)" : " (mismatch)") +
                ", complement zero " + (comp_ok ? "yes" : "no") + ", actual " + num(c.actual) +
                " <= certificate " + num(c.bound) + ", doubling ratio " + num(ratio) +
                (halves ? " within" : " NOT within") + " 10% of 1/2"};
}

// 6. Patching block identity at 2^14.
Verdict criterion6() {
    const std::size_t H = 1 << 14;
    std::vector<IndexSet> J, R;
    for (std::size_t i = 0; i < 14; ++i) {
        const std::size_t step = std::size_t{2} << i;
        J.push_back(IndexSet::where(H, [step](std::size_t n) { return n % step == 0; }));
        R.push_back(IndexSet::where(H, [i](std::size_t n) { return n % (i + 3) == 1; }));
    }
    const PatchResult r = patch_sets(J, R, H);
    bool ident = true, menus = true;
    std::size_t checked = 0;
    for (std::size_t i = 1; i <= r.selectors.size(); ++i) {
        const std::size_t lo = r.boundaries[i - 1];
        const std::size_t hi = i < r.boundaries.size() ? r.boundaries[i] : H;
        const IndexSet& Jl = J[r.selectors[i - 1]];
        for (std::size_t n = lo; n < hi; ++n, ++checked)
            if (r.J.contains(n) != Jl.contains(n)) ident = false;
        if (i < r.boundaries.size() && !R[i - 1].contains(r.boundaries[i])) menus = false;
    }
    const bool ok = ident && menus && checked == H;
    return {ok, std::to_string(r.selectors.size()) + " blocks, " + std::to_string(checked) +
                    " indices scanned, identity " + (ident ? "holds" : "broken") + ", m_i in R_i " +
                    (menus ? "yes" : "no") + ", density " + num(r.density.value())};
}

// 7. Limit shadowing on a rotation family.
Verdict criterion7() {
    const MapFamily R = builtin::rotations({0.6180339887498949});
    std::vector<double> e(10000);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::min(1.0 / (i + 1), R.space(i + 1).diameter());
    const PseudoOrbit po = inject_defects(R, {0.1}, e);
    const LimitShadowResult r = limit_shadow_point(R, po, 8);
    bool mono = true, strict = true;
    for (std::size_t i = 1; i < r.table.size(); ++i) {
        if (!(r.table[i].window_error <= r.table[i - 1].window_error)) mono = false;
        if (!(r.table[i].level_error < r.table[i - 1].level_error)) strict = false;
    }
    const double last = r.table.back().window_error;
    const bool ok = mono && strict && r.table.size() == 8 && last < 1.0 / 8;
    return {ok, std::string("level errors strictly decreasing ") + (strict ? "yes" : "no") +
                    ", window errors nonincreasing " + (mono ? "yes" : "no") +
                    ", final window error " + num(last) + " < 0.125"};
}

// 8. Average shadowing on funnel8.
Verdict criterion8() {
    const MapFamily F = builtin::funnel8();
    const StateSpace& X = F.space(0);
    const auto A = InvariantSubsystem::finite(F, {X.point_at(0), X.point_at(1), X.point_at(2)});
    const std::size_t H = 10000;
    std::vector<double> e(H, 0.0);
    for (std::size_t k = 0; k * k < H; ++k) e[k * k] = 1.0;
    const PseudoOrbit po = inject_defects(F, X.point_at(0), e);
    const AverageShadowResult r = average_shadow_point(A, po);

    // Exact re-count: the discrete metric takes values in {0, 1}.
    const IndexSet S = set_union(r.blocks.J_prime, r.blocks.B);
    long long lhs = 0, shadow = 0, lift = 0, exceptional = 0;
    Point y = r.y;
    for (std::size_t i = 0; i <= H; ++i) {
        const auto d_yx = static_cast<long long>(X.distance(y, po.points[i]));
        const auto d_yl = static_cast<long long>(X.distance(y, r.lift.y[i]));
        const auto d_lx = static_cast<long long>(X.distance(r.lift.y[i], po.points[i]));
        lhs += d_yx;
        shadow += d_yl;
        if (S.contains(i)) ++exceptional;
        else lift += d_lx;
        if (i < H) y = evaluate(F, i, y);
    }
    const bool triangle = lhs <= shadow + lift + exceptional;
    const bool ok = r.lift.support_in_J_prime_B && r.cesaro_error < 0.05 && triangle;
    return {ok, std::string("support in J'uB ") + (r.lift.support_in_J_prime_B ? "yes" : "no") +
                    ", Cesaro error " + num(r.cesaro_error) + " < 0.05, counts " + std::to_string(lhs) +
                    " <= " + std::to_string(shadow) + " + " + std::to_string(lift) + " + " +
                    std::to_string(exceptional)};
}

// 9. Product equivalence on finite built-ins.
Verdict criterion9() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<MapFamily> systems;
    for (double spacing : {1.0, 0.2}) {
        systems.push_back(builtin::finite_cycle(3, spacing));
        systems.push_back(builtin::finite_shift4(spacing));
        systems.push_back(builtin::finite_identity(4, spacing));
    }
    VariantBudget b;
    b.eps = 0.25;
    b.delta = 0.3;
    b.max_length = 6;
    std::size_t cases = 0, consistent = 0, product_pass = 0;
    for (auto v : {ShadowingVariant::H, ShadowingVariant::SLimit})
        for (const auto& F : systems)
            for (const auto& G : systems) {
                const EquivalenceRecord rec = product_equivalence_check(F, G, v, b);
                ++cases;
                consistent += rec.consistent;
                product_pass += rec.product.verdict;
            }
    const double secs = seconds_since(t0);
    const bool ok = consistent == cases && secs < 60.0;
    return {ok, std::to_string(consistent) + "/" + std::to_string(cases) + " consistent (" +
                    std::to_string(product_pass) + " products pass), " + num(secs, 3) + " s < 60 s"};
}

// 10. Determinism of the bundled suite.
Verdict criterion10() {
    const SuiteResult a = run_suite(NASHADOW_SCENARIO_DIR, {});
    const SuiteResult b = run_suite(NASHADOW_SCENARIO_DIR, {});
    bool same = a.outcomes.size() == b.outcomes.size() && !a.outcomes.empty();
    for (std::size_t i = 0; same && i < a.outcomes.size(); ++i)
        same = a.outcomes[i].report.dump(2) == b.outcomes[i].report.dump(2);
    const bool ok = same && a.exit_code == 0;
    return {ok, std::to_string(a.outcomes.size()) + " scenario reports byte-identical " +
                    (same ? "yes" : "no") + ", suite exit " + std::to_string(a.exit_code)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"shadowing bound", criterion1},   {"uniqueness decay", criterion2},
        {"oracle agreement", criterion3},  {"periodic shadowing", criterion4},
        {"Cesaro/density equivalence", criterion5}, {"patching", criterion6},
        {"limit shadowing", criterion7},   {"average shadowing", criterion8},
        {"product equivalence", criterion9},  {"determinism", criterion10}};
    std::size_t only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::stoul(argv[++i]);
    if (only > criteria.size()) {
        std::fprintf(stderr, "no criterion %zu\n", only);
        return 2;
    }
    int failures = 0;
    for (std::size_t c = 1; c <= criteria.size(); ++c) {
        if (only && c != only) continue;
        Verdict v;
        try {
            v = criteria[c - 1].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw ") + e.what()};
        }
        std::printf("criterion %2zu %s  %s: %s\n", c, v.pass ? "PASS" : "FAIL", criteria[c - 1].first,
                    v.detail.c_str());
        failures += !v.pass;
    }
    return failures == 0 ? 0 : 1;
}
