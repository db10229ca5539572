#include "nashadow/average_shadow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashadow/errors.hpp"

namespace nashadow {

// ---------------------------------------------------------------- subsystem

InvariantSubsystem InvariantSubsystem::finite(const MapFamily& ambient, std::vector<Point> points,
                                              std::size_t check_horizon) {
    if (points.empty()) fail(ErrorCode::EmptyA, "A has no points");
    if (!ambient.constant_spaces())
        fail(ErrorCode::NonConstantSpaces, "invariant sets need a constant space");
    InvariantSubsystem sub(ambient);
    const StateSpace& X = ambient.space(0);
    for (auto& p : points) {
        if (!X.contains(p)) fail(ErrorCode::PointOutsideSpace, "point of A outside X");
        p = X.canonical(p);
    }
    sub.points_ = std::move(points);
    std::size_t limit = check_horizon;
    if (auto l = ambient.schedule_limit()) limit = std::min(limit, *l);
    for (std::size_t n = 0; n < limit; ++n)
        for (const auto& a : sub.points_) {
            const Point img = evaluate(ambient, n, a);
            if (!(sub.distance_to(img) <= 1e-12))
                fail(ErrorCode::HypothesisViolated,
                     "f_" + std::to_string(n) + " maps a point of A outside A");
        }
    return sub;
}

InvariantSubsystem InvariantSubsystem::interval(const MapFamily& ambient, double lo, double hi,
                                                std::size_t check_horizon) {
    if (!(lo <= hi)) fail(ErrorCode::EmptyA, "empty arc");
    if (ambient.space(0).kind() != SpaceKind::Interval || !ambient.constant_spaces())
        fail(ErrorCode::InvalidArgument, "arcs are supported on the interval only");
    if (lo < 0.0 || hi > 1.0) fail(ErrorCode::PointOutsideSpace, "arc outside [0,1]");
    InvariantSubsystem sub(ambient);
    sub.arc_ = std::pair{lo, hi};
    std::size_t limit = check_horizon;
    if (auto l = ambient.schedule_limit()) limit = std::min(limit, *l);
    for (std::size_t n = 0; n < limit; ++n)
        for (std::size_t i = 0; i <= 64; ++i) {
            const Point img = evaluate(ambient, n, {lo + (hi - lo) * static_cast<double>(i) / 64.0});
            if (!(sub.distance_to(img) <= 1e-12))
                fail(ErrorCode::HypothesisViolated,
                     "f_" + std::to_string(n) + " maps a sample of A outside A");
        }
    return sub;
}

double InvariantSubsystem::distance_to(const Point& x) const {
    if (arc_) return std::max({0.0, arc_->first - x.at(0), x.at(0) - arc_->second});
    const StateSpace& X = ambient_.space(0);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : points_) best = std::min(best, X.distance(a, x));
    return best;
}

Point InvariantSubsystem::nearest(const Point& x) const {
    if (arc_) return {std::clamp(x.at(0), arc_->first, arc_->second)};
    const StateSpace& X = ambient_.space(0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (X.distance(points_[i], x) < X.distance(points_[best], x)) best = i;
    return points_[best];
}

Point InvariantSubsystem::first_point() const {
    if (arc_) return {arc_->first};
    return points_.front();
}

namespace {

// f_n(a) for a in A. Finite A is closed under the maps, so the image is
// snapped back onto A to keep long orbits free of rounding drift.
Point step_in_A(const InvariantSubsystem& sub, std::size_t n, const Point& a) {
    const Point img = evaluate(sub.ambient(), n, a);
    return sub.is_finite() ? sub.nearest(img) : img;
}

std::vector<Point> visit_samples(const InvariantSubsystem& sub) {
    const StateSpace& X = sub.ambient().space(0);
    std::vector<Point> out;
    if (X.is_finite()) {
        for (std::size_t s = 0; s < X.cardinality(); ++s) out.push_back(X.point_at(s));
        return out;
    }
    for (std::size_t i = 0; i < 64; ++i) {
        Point x(X.dimension());
        for (std::size_t c = 0; c < x.size(); ++c) x[c] = golden_sample(i * x.size() + c);
        out.push_back(X.canonical(x));
    }
    return out;
}

}  // namespace

VisitResult visit_condition(const InvariantSubsystem& sub, double eps, std::size_t n,
                            const std::vector<Point>& samples) {
    if (n == 0) fail(ErrorCode::ZeroHorizon, "window must be positive");
    VisitResult r;
    r.epsilon = eps;
    r.window = n;
    r.verdict = true;
    for (const auto& x0 : samples) {
        Point x = x0;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (sub.distance_to(x) < eps) ++hits;
            if (i + 1 < n) x = evaluate(sub.ambient(), i, x);
        }
        const double f = static_cast<double>(hits) / static_cast<double>(n);
        r.fractions.push_back(f);
        r.worst_fraction = std::min(r.worst_fraction, f);
        if (!(f > 1.0 - eps)) r.verdict = false;
    }
    return r;
}

// ---------------------------------------------------------------- blocks

BlockDecomposition block_decompose(const IndexSet& J, std::size_t horizon) {
    if (horizon == 0) fail(ErrorCode::ZeroHorizon, "empty horizon");
    if (J.horizon < horizon) fail(ErrorCode::InvalidArgument, "set shorter than horizon");
    const DensityRatio d = upper_density(J, horizon);
    if (d.value() > 0.1)
        fail(ErrorCode::DensityTooHigh, "density " + std::to_string(d.value()) +
                                            " of the exceptional set is not small at the horizon");

    std::size_t levels = 0;
    while ((std::size_t{2} << levels) <= horizon) ++levels;

    std::vector<IndexSet> covers;
    for (std::size_t n = 0; n <= levels; ++n) {
        const std::size_t len = std::size_t{1} << n;
        std::vector<std::size_t> members;
        std::size_t last_block = std::numeric_limits<std::size_t>::max();
        for (std::size_t j : J.members) {
            if (j >= horizon) break;
            const std::size_t l = j / len;
            if (l == last_block) continue;
            last_block = l;
            for (std::size_t t = l * len; t < std::min(horizon, (l + 1) * len); ++t) members.push_back(t);
        }
        covers.emplace_back(horizon, std::move(members));
    }
    std::vector<IndexSet> menus;
    for (std::size_t i = 1; i <= levels + 1; ++i) {
        const std::size_t step = std::size_t{2} << i;  // 2^{i+1}
        std::vector<std::size_t> m;
        for (std::size_t v = step - 1; v < horizon; v += step) m.push_back(v);
        m.push_back(horizon - 1);
        menus.emplace_back(horizon, std::move(m));
    }
    const PatchResult patch = patch_sets(covers, menus, horizon);

    BlockDecomposition out;
    out.horizon = horizon;
    out.J_prime = patch.J;
    out.boundaries = patch.boundaries;
    out.selectors = patch.selectors;
    std::vector<std::size_t> ends;
    std::size_t i = 0;
    while (i < horizon) {
        if (out.J_prime.contains(i)) {
            ++i;
            continue;
        }
        std::size_t b = i;
        while (b + 1 < horizon && !out.J_prime.contains(b + 1)) ++b;
        out.blocks.emplace_back(i, b);
        ends.push_back(b);
        i = b + 1;
    }
    out.B = IndexSet(horizon, std::move(ends));
    out.density_B = upper_density(out.B, horizon);
    out.density_J_prime_B = upper_density(set_union(out.J_prime, out.B), horizon);
    return out;
}

LiftResult lift_to_A(const InvariantSubsystem& sub, const PseudoOrbit& po,
                     const BlockDecomposition& blocks, const Point& p) {
    const std::size_t H = po.points.size();
    if (blocks.horizon != H) fail(ErrorCode::InvalidArgument, "blocks and pseudo-orbit lengths differ");
    if (!(sub.distance_to(p) <= 1e-12)) fail(ErrorCode::InvalidArgument, "fill point not in A");
    const MapFamily& F = sub.ambient();
    LiftResult r;
    r.y.assign(H, p);
    for (const auto& [a, b] : blocks.blocks) {
        r.y[a] = sub.nearest(po.points[a]);
        for (std::size_t t = a; t < b; ++t) r.y[t + 1] = step_in_A(sub, t, r.y[t]);
    }
    const IndexSet allowed = set_union(blocks.J_prime, blocks.B);
    std::vector<std::size_t> support;
    double sum = 0.0;
    r.defects.resize(H > 0 ? H - 1 : 0);
    for (std::size_t t = 0; t + 1 < H; ++t) {
        r.defects[t] = F.space(t + 1).distance(step_in_A(sub, t, r.y[t]), r.y[t + 1]);
        sum += r.defects[t];
        if (r.defects[t] > 0.0) support.push_back(t);
    }
    r.support = IndexSet(H, std::move(support));
    r.support_in_J_prime_B = std::all_of(r.support.members.begin(), r.support.members.end(),
                                         [&](std::size_t t) { return allowed.contains(t); });
    r.cesaro_defect = r.defects.empty() ? 0.0 : sum / static_cast<double>(r.defects.size());
    return r;
}

// ---------------------------------------------------------------- driver

AverageShadowResult average_shadow_point(const InvariantSubsystem& sub, const PseudoOrbit& po,
                                         AverageOptions options) {
    if (!sub.is_finite())
        fail(ErrorCode::OracleUnavailable, "no averaged-shadowing oracle for a continuous A");
    if (po.points.empty()) fail(ErrorCode::InvalidArgument, "empty pseudo-orbit");
    const MapFamily& F = sub.ambient();
    const std::size_t H = po.points.size();
    AverageShadowResult res;

    // visit condition on the ladder eps = 2^-k
    const auto samples = visit_samples(sub);
    std::vector<std::vector<double>> dist(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        Point x = samples[s];
        for (std::size_t i = 0; i < options.max_window; ++i) {
            dist[s].push_back(sub.distance_to(x));
            if (i + 1 < options.max_window) x = evaluate(F, i, x);
        }
    }
    for (std::size_t k = 1; k <= options.ladder_levels; ++k) {
        const double eps = std::ldexp(1.0, -static_cast<int>(k));
        std::vector<std::size_t> hits(samples.size(), 0);
        std::size_t found = 0;
        for (std::size_t n = 1; n <= options.max_window && !found; ++n) {
            bool ok = true;
            for (std::size_t s = 0; s < samples.size(); ++s) {
                if (dist[s][n - 1] < eps) ++hits[s];
                if (!(static_cast<double>(hits[s]) > (1.0 - eps) * static_cast<double>(n))) ok = false;
            }
            if (ok) found = n;
        }
        if (!found)
            fail(ErrorCode::HypothesisViolated, "visit condition fails at eps = 2^-" + std::to_string(k) +
                                                    " for every window up to " +
                                                    std::to_string(options.max_window));
        res.visit_windows.push_back(found);
    }

    // exceptional sets from the two null Cesaro sequences
    std::vector<double> to_A(H), defects(H, 0.0);
    for (std::size_t i = 0; i < H; ++i) to_A[i] = sub.distance_to(po.points[i]);
    std::copy(po.defects.begin(), po.defects.end(), defects.begin());
    const CesaroSplit q1 = cesaro_to_density_zero(to_A, H);
    const CesaroSplit q2 = cesaro_to_density_zero(defects, H);
    res.J = set_union(q1.J, q2.J);
    res.blocks = block_decompose(res.J, H);
    res.lift = lift_to_A(sub, po, res.blocks, options.fill_point.value_or(sub.first_point()));

    // restriction oracle: exhaustive over A
    double best = std::numeric_limits<double>::infinity();
    std::vector<Point> best_orbit;
    for (const auto& a : sub.points()) {
        std::vector<Point> orbit(H);
        orbit[0] = a;
        double sum = 0.0;
        for (std::size_t i = 0; i < H; ++i) {
            if (i > 0) orbit[i] = step_in_A(sub, i - 1, orbit[i - 1]);
            sum += F.space(i).distance(orbit[i], res.lift.y[i]);
        }
        if (sum < best) {
            best = sum;
            best_orbit = std::move(orbit);
        }
    }
    res.y = best_orbit[0];

    const IndexSet S = set_union(res.blocks.J_prime, res.blocks.B);
    const double Hd = static_cast<double>(H);
    double err = 0.0, c1 = 0.0, c2 = 0.0;
    res.cesaro_errors.resize(H);
    for (std::size_t i = 0; i < H; ++i) {
        err += F.space(i).distance(best_orbit[i], po.points[i]);
        c1 += F.space(i).distance(best_orbit[i], res.lift.y[i]);
        if (!S.contains(i)) c2 += F.space(i).distance(res.lift.y[i], po.points[i]);
        res.cesaro_errors[i] = err / static_cast<double>(i + 1);
    }
    res.cesaro_error = err / Hd;
    res.shadow_term = c1 / Hd;
    res.lift_term = c2 / Hd;
    res.exceptional_term = F.space(0).diameter() * upper_density(S, H).value();
    res.certificate = res.shadow_term + res.lift_term + res.exceptional_term;
    res.verdict = res.cesaro_error < options.tolerance && res.cesaro_error <= res.certificate + 1e-12;
    return res;
}

}  // namespace nashadow
