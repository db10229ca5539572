#include "nashadow/limit_shadow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashadow/errors.hpp"
#include "nashadow/shadow_solver.hpp"

namespace nashadow {

namespace {

bool all_continuous(const StateSpace& s) {
    const auto& k = s.coordinate_kinds();
    return std::all_of(k.begin(), k.end(), [](CoordKind c) { return c != CoordKind::Finite; });
}

bool pair_survives(const MapFamily& family, std::size_t m, Point x, Point y, double eps,
                   std::size_t horizon) {
    for (std::size_t n = m; n < horizon; ++n) {
        x = evaluate(family, n, x);
        y = evaluate(family, n, y);
        if (!(family.space(n + 1).distance(x, y) < eps)) return false;
    }
    return true;
}

bool rung_passes(const MapFamily& family, double eps, double delta, std::size_t horizon,
                 std::size_t samples, std::size_t& tested) {
    for (std::size_t m = 0; m < horizon; ++m) {
        const StateSpace& X = family.space(m);
        if (X.is_finite()) {
            const std::size_t N = X.cardinality();
            for (std::size_t a = 0; a < N; ++a)
                for (std::size_t b = 0; b < N; ++b) {
                    if (a == b) continue;
                    const Point pa = X.point_at(a), pb = X.point_at(b);
                    if (!(X.distance(pa, pb) < delta)) continue;
                    ++tested;
                    if (!pair_survives(family, m, pa, pb, eps, horizon)) return false;
                }
            continue;
        }
        if (!all_continuous(X))
            fail(ErrorCode::InvalidArgument, "mixed finite/continuous spaces are not sampled");
        const std::size_t dim = X.dimension();
        for (std::size_t i = 0; i < samples; ++i) {
            Point x(dim);
            for (std::size_t c = 0; c < dim; ++c) x[c] = golden_sample(i * dim + c);
            for (double frac : {0.999, -0.5}) {
                Point y = x;
                for (std::size_t c = 0; c < dim; ++c) y = X.shift(y, c, frac * delta);
                if (!(X.distance(x, y) < delta)) continue;
                ++tested;
                if (!pair_survives(family, m, x, y, eps, horizon)) return false;
            }
        }
    }
    return true;
}

// Orbit of y for i = 0..K, evaluated forward.
std::vector<Point> forward_orbit(const MapFamily& family, const Point& y, std::size_t K) {
    return compose(family, y, K).points;
}

// Backward chain from x_K choosing at each step the preimage closest to x_i.
std::vector<Point> transport_chain(const MapFamily& family, const PseudoOrbit& po) {
    const std::size_t K = po.horizon();
    std::vector<Point> z(K + 1);
    z[K] = po.points[K];
    for (std::size_t i = K; i-- > 0;) {
        const auto pre = preimages(family, i, z[i + 1]);
        if (pre.empty())
            fail(ErrorCode::PreimageSearchFailed, "no preimage at step " + std::to_string(i));
        const StateSpace& X = family.space(i);
        auto best = std::min_element(pre.begin(), pre.end(), [&](const Point& a, const Point& b) {
            return X.distance(a, po.points[i]) < X.distance(b, po.points[i]);
        });
        z[i] = X.canonical(*best);
    }
    return z;
}

double sup_distance(const MapFamily& family, const std::vector<Point>& orbit,
                    const std::vector<Point>& target, std::size_t from) {
    double s = 0.0;
    for (std::size_t i = from; i < target.size(); ++i)
        s = std::max(s, family.space(i).distance(orbit[i], target[i]));
    return s;
}

// Minimal k with every defect from k on below thr(i). Defects within a
// relative 1e-12 of the threshold count as ties and are not below it.
template <class Threshold>
std::size_t minimal_cut(const PseudoOrbit& po, Threshold thr) {
    std::size_t k = po.defects.size();
    while (k > 0 && po.defects[k - 1] < thr(k - 1) * (1.0 - 1e-12)) --k;
    return k;
}

}  // namespace

EquicontinuityEstimate equicontinuity_modulus(const MapFamily& family, double eps,
                                              std::size_t horizon, std::size_t samples) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
    if (horizon == 0) fail(ErrorCode::ZeroHorizon, "horizon must be positive");
    EquicontinuityEstimate est;
    est.epsilon = eps;
    est.horizon = horizon;
    for (std::size_t r = 0; r < horizon; ++r) {
        const double delta = std::ldexp(eps, -static_cast<int>(r));
        if (rung_passes(family, eps, delta, horizon, samples, est.pairs_tested)) {
            est.delta = delta;
            est.rung = r;
            return est;
        }
    }
    fail(ErrorCode::NotEquicontinuousAtHorizon,
         family.name() + ": no rung down to eps*2^-" + std::to_string(horizon - 1) + " holds up to n = " +
             std::to_string(horizon));
}

SplicedOrbit splice(const MapFamily& family, const PseudoOrbit& po, std::size_t cut) {
    if (cut > po.horizon()) fail(ErrorCode::InvalidArgument, "cut beyond horizon");
    SplicedOrbit s;
    s.cut = cut;
    s.head.resize(cut);
    Point next = po.points.at(cut);
    for (std::size_t i = cut; i-- > 0;) {
        const auto pre = preimages(family, i, next);
        if (pre.empty())
            fail(ErrorCode::PreimageSearchFailed,
                 "f_" + std::to_string(i) + " has no preimage of the spliced point");
        const StateSpace& X = family.space(i);
        auto best = std::min_element(pre.begin(), pre.end(), [&](const Point& a, const Point& b) {
            return X.distance(a, po.points[i]) < X.distance(b, po.points[i]);
        });
        s.head[i] = X.canonical(*best);
        next = s.head[i];
    }
    std::vector<Point> pts = s.head;
    pts.insert(pts.end(), po.points.begin() + static_cast<std::ptrdiff_t>(cut), po.points.end());
    s.orbit = make_pseudo_orbit(family, std::move(pts));
    s.orbit.start_index = po.start_index;
    return s;
}

LimitShadowResult limit_shadow_point(const MapFamily& family, const PseudoOrbit& po,
                                     std::size_t levels, LimitOptions options) {
    if (levels == 0) fail(ErrorCode::InvalidArgument, "levels must be positive");
    if (po.points.empty()) fail(ErrorCode::InvalidArgument, "empty pseudo-orbit");
    const std::size_t K = po.horizon();

    ShadowOracle oracle = options.oracle;
    if (oracle == ShadowOracle::Auto) {
        if (family.space(0).is_finite() && family.constant_spaces())
            oracle = ShadowOracle::Exhaustive;
        else if (family.isometric())
            oracle = ShadowOracle::Transport;
        else if (family.expanding())
            oracle = ShadowOracle::Solver;
        else
            fail(ErrorCode::OracleUnavailable, family.name() + " has no shadowing oracle");
    }
    if (options.check_equicontinuity)
        equicontinuity_modulus(family, 1.0 / static_cast<double>(levels), std::min<std::size_t>(20, std::max<std::size_t>(K, 1)));

    LimitShadowResult res;
    res.oracle = oracle;
    std::vector<std::vector<Point>> state_orbits;  // exhaustive oracle cache
    if (oracle == ShadowOracle::Exhaustive) {
        const StateSpace& X = family.space(0);
        for (std::size_t s = 0; s < X.cardinality(); ++s)
            state_orbits.push_back(forward_orbit(family, X.point_at(s), K));
    }
    std::vector<Point> transport;
    if (oracle == ShadowOracle::Transport) transport = transport_chain(family, po);

    std::vector<Point> orbit;  // orbit of the latest y_n
    for (std::size_t n = 1; n <= levels; ++n) {
        const double target = 1.0 / static_cast<double>(n);
        ConvergenceRow row;
        row.level = n;
        if (oracle == ShadowOracle::Solver) {
            const double eps = 0.99 * std::min(target, family.branch_radius() / 2.0);
            row.cut = minimal_cut(po, [&](std::size_t i) {
                return options.margin * (1.0 - family.rate(i).value()) * eps;
            });
            row.delta = options.margin * (1.0 - family.rate(row.cut < K ? row.cut : 0).value()) * eps;
            const SplicedOrbit sp = splice(family, po, row.cut);
            const ShadowResult sr = pullback_shadow(family, sp.orbit, eps);
            orbit = sr.chain.orbit;
            row.level_error = sup_distance(family, orbit, sp.orbit.points, 0);
        } else {
            row.delta = target;
            row.cut = minimal_cut(po, [&](std::size_t) { return target; });
            const SplicedOrbit sp = splice(family, po, row.cut);
            if (oracle == ShadowOracle::Transport) {
                orbit = transport;
            } else {
                std::size_t best = 0;
                double best_err = std::numeric_limits<double>::infinity();
                for (std::size_t s = 0; s < state_orbits.size(); ++s) {
                    const double e = sup_distance(family, state_orbits[s], sp.orbit.points, 0);
                    if (e < best_err) {
                        best_err = e;
                        best = s;
                    }
                }
                orbit = state_orbits.at(best);
            }
            row.level_error = sup_distance(family, orbit, sp.orbit.points, 0);
        }
        if (!(row.level_error < target))
            fail(ErrorCode::OracleFailed, "level " + std::to_string(n) + ": best error " +
                                              std::to_string(row.level_error) + " is not below 1/" +
                                              std::to_string(n));
        if (!res.level_points.empty())
            row.step = family.space(0).distance(orbit[0], res.level_points.back());
        res.level_points.push_back(orbit[0]);
        res.table.push_back(row);
    }
    if (levels >= 2 && !(res.table.back().step < options.cauchy_tolerance))
        fail(ErrorCode::NoConvergence, "y_n still moving by " + std::to_string(res.table.back().step) +
                                           " at the last level");

    res.y = orbit[0];
    res.errors.resize(K + 1);
    for (std::size_t i = 0; i <= K; ++i) res.errors[i] = family.space(i).distance(orbit[i], po.points[i]);
    for (auto& row : res.table) {
        const std::size_t hi = std::min(K, 2 * row.cut);
        row.window_error = 0.0;
        for (std::size_t i = row.cut; i <= hi; ++i) row.window_error = std::max(row.window_error, res.errors[i]);
    }
    res.monotone = true;
    for (std::size_t i = 1; i < res.table.size(); ++i)
        if (res.table[i].window_error > res.table[i - 1].window_error) res.monotone = false;
    res.verdict = res.monotone && res.table.back().window_error < 1.0 / static_cast<double>(levels);
    return res;
}

}  // namespace nashadow
