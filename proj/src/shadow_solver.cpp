#include "nashadow/shadow_solver.hpp"

#include <algorithm>
#include <cmath>

#include "nashadow/errors.hpp"

namespace nashadow {

namespace {

constexpr double kSlack = 1e-12;

double rate_at(const MapFamily& family, std::size_t n) {
    const auto r = family.rate(n);
    if (!r) fail(ErrorCode::NotExpanding, family.name() + ": f_" + std::to_string(n) + " is not expanding");
    return *r;
}

void require_expanding(const MapFamily& family) {
    if (!family.expanding()) fail(ErrorCode::NotExpanding, family.name() + " is not expanding");
}

void require_small_epsilon(double eps, double delta0) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
    if (eps >= delta0 / 2.0)
        fail(ErrorCode::EpsilonTooLarge, "epsilon " + std::to_string(eps) + " >= delta_0/2 = " +
                                             std::to_string(delta0 / 2.0));
}

// Box cell: per-coordinate half widths around a center.
struct Box {
    Point center;
    std::vector<double> half;
    double radius() const { return half.empty() ? 0.0 : *std::max_element(half.begin(), half.end()); }
};

// Intersects the box with the closed eps-ball (max metric) around x.
void intersect_ball(Box& box, const StateSpace& space, const Point& x, double eps, std::size_t j) {
    const auto& kinds = space.coordinate_kinds();
    for (std::size_t c = 0; c < kinds.size(); ++c) {
        double lo = -box.half[c];
        double hi = box.half[c];
        double s = 0.0;
        if (kinds[c] == CoordKind::Circle) {
            s = circle_signed_delta(box.center[c], x[c]);
        } else if (kinds[c] == CoordKind::Interval) {
            s = x[c] - box.center[c];
            lo = std::max(lo, -box.center[c]);
            hi = std::min(hi, 1.0 - box.center[c]);
        } else {
            fail(ErrorCode::NotExpanding, "finite coordinates have no pullback cells");
        }
        lo = std::max(lo, s - eps);
        hi = std::min(hi, s + eps);
        if (lo > hi + kSlack)
            fail(ErrorCode::EmptyCell, "pullback cell at j = " + std::to_string(j) +
                                           " misses the eps-ball around x_j");
        if (hi < lo) hi = lo;
        const double mid = 0.5 * (lo + hi);
        box.center[c] = kinds[c] == CoordKind::Circle ? wrap_unit(box.center[c] + mid)
                                                      : box.center[c] + mid;
        box.half[c] = 0.5 * (hi - lo);
    }
}

// Checks that every defect fits the admissible budget.
void check_budget(const MapFamily& family, const PseudoOrbit& po, double eps, std::size_t k) {
    for (std::size_t n = 0; n < k; ++n) {
        const double budget = (1.0 - rate_at(family, n)) * eps;
        if (!(po.defects[n] < budget))
            fail(ErrorCode::DeltaBudgetViolated, "defect " + std::to_string(po.defects[n]) +
                                                     " at n = " + std::to_string(n) +
                                                     " is not below " + std::to_string(budget));
    }
}

Point pull(const MapFamily& family, std::size_t j, const Point& xj, const Point& w, const Point& y) {
    const double d = family.space(j + 1).distance(w, y);
    if (!(d < family.branch_radius()))
        fail(ErrorCode::BranchDomainViolated,
             "pullback at j = " + std::to_string(j) + " leaves the branch domain (" +
                 std::to_string(d) + " >= " + std::to_string(family.branch_radius()) + ")");
    return family.space(j).canonical(family.map(j)->inverse_branch(w, xj, y));
}

}  // namespace

std::vector<double> delta_budget(std::span<const double> rates, double eps, double margin,
                                 double delta0) {
    require_small_epsilon(eps, delta0);
    if (!(margin > 0.0 && margin <= 1.0)) fail(ErrorCode::InvalidArgument, "margin must be in (0,1]");
    std::vector<double> out;
    out.reserve(rates.size());
    for (double lam : rates) {
        if (!(lam > 0.0 && lam < 1.0)) fail(ErrorCode::InvalidArgument, "rates must lie in (0,1)");
        const double d = margin * (1.0 - lam) * eps;
        if (margin < 1.0 && !(d < (1.0 - lam) * eps))
            fail(ErrorCode::DeltaBudgetViolated, "delta_n >= (1 - lambda_n) eps");
        out.push_back(d);
    }
    return out;
}

std::vector<double> delta_budget(const MapFamily& family, std::size_t horizon, double eps,
                                 double margin) {
    require_expanding(family);
    std::vector<double> rates(horizon);
    for (std::size_t n = 0; n < horizon; ++n) rates[n] = rate_at(family, n);
    return delta_budget(rates, eps, margin, family.branch_radius());
}

double diameter_bound(const MapFamily& family, std::size_t k, double eps) {
    double prod = 1.0;
    for (std::size_t i = 0; i < k; ++i) prod *= rate_at(family, i);
    return 2.0 * eps * prod;
}

ShadowResult pullback_shadow(const MapFamily& family, const PseudoOrbit& po, double eps,
                             ShadowOptions options) {
    require_expanding(family);
    require_small_epsilon(eps, family.branch_radius());
    if (po.points.empty()) fail(ErrorCode::InvalidArgument, "empty pseudo-orbit");
    const std::size_t k = po.horizon();
    if (options.enforce_budget) check_budget(family, po, eps, k);

    ShadowResult res;
    ShadowReport& rep = res.report;
    rep.horizon = k;
    rep.epsilon = eps;
    rep.delta_schedule.resize(k);
    double prod = 1.0;
    for (std::size_t n = 0; n < k; ++n) {
        const double lam = rate_at(family, n);
        rep.delta_schedule[n] = (1.0 - lam) * eps;
        prod *= lam;
    }
    rep.diameter_bound = 2.0 * eps * prod;

    std::vector<Point> images(k);  // w_j = f_j(x_j)
    for (std::size_t j = 0; j < k; ++j) {
        images[j] = evaluate(family, j, po.points[j]);
        if (!(po.defects[j] + eps < family.branch_radius()))
            fail(ErrorCode::BranchDomainViolated,
                 "defect plus epsilon reaches delta_0 at j = " + std::to_string(j));
    }

    // backward cells
    const std::size_t dim = po.points[0].size();
    Box box{po.points[k], std::vector<double>(dim, eps)};
    res.chain.cells.resize(k + 1);
    res.chain.cells[k] = {k, box.center, box.radius()};
    for (std::size_t j = k; j-- > 0;) {
        const double lam = rate_at(family, j);
        box.center = pull(family, j, po.points[j], images[j], box.center);
        for (double& h : box.half) h *= lam;
        intersect_ball(box, family.space(j), po.points[j], eps, j);
        res.chain.cells[j] = {j, box.center, box.radius()};
    }
    rep.cell_diameter = 2.0 * res.chain.cells[0].radius;

    // orbit of the shadow point
    auto& z = res.chain.orbit;
    z.resize(k + 1);
    if (options.rule == ShadowPointRule::Terminal) {
        z[k] = po.points[k];
        for (std::size_t j = k; j-- > 0;) z[j] = pull(family, j, po.points[j], images[j], z[j + 1]);
    } else {
        z[0] = res.chain.cells[0].center;
        for (std::size_t j = 0; j < k; ++j) z[j + 1] = evaluate(family, j, z[j]);
    }
    rep.shadow_point = z[0];
    rep.per_step_errors.resize(k + 1);
    for (std::size_t n = 0; n <= k; ++n) {
        rep.per_step_errors[n] = family.space(n).distance(z[n], po.points[n]);
        rep.max_error = std::max(rep.max_error, rep.per_step_errors[n]);
    }
    for (std::size_t j = 0; j < k; ++j)
        rep.chain_residual =
            std::max(rep.chain_residual, family.space(j + 1).distance(evaluate(family, j, z[j]), z[j + 1]));
    rep.verdict = rep.max_error < eps && rep.chain_residual <= 1e-9;
    return res;
}

double uniqueness_certificate(const MapFamily& family, const PseudoOrbit& po, double eps,
                              std::size_t k) {
    if (k > po.horizon()) fail(ErrorCode::InvalidArgument, "k exceeds the pseudo-orbit horizon");
    PseudoOrbit prefix;
    prefix.start_index = po.start_index;
    prefix.points.assign(po.points.begin(), po.points.begin() + static_cast<std::ptrdiff_t>(k + 1));
    prefix.defects.assign(po.defects.begin(), po.defects.begin() + static_cast<std::ptrdiff_t>(k));
    return pullback_shadow(family, prefix, eps).report.cell_diameter;
}

PeriodicShadowResult periodic_shadow(const MapFamily& family, const PseudoOrbit& po,
                                     std::size_t period, double eps) {
    require_expanding(family);
    require_small_epsilon(eps, family.branch_radius());
    if (!family.constant_spaces())
        fail(ErrorCode::NonConstantSpaces, family.name() + " has time-varying spaces");
    const std::size_t k = po.horizon();
    if (period == 0 || period > k)
        fail(ErrorCode::NonPeriodicInput, "period must be in [1, horizon]");
    for (std::size_t i = 0; i + period <= k; ++i)
        if (po.points[i + period] != po.points[i])
            fail(ErrorCode::NonPeriodicInput, "x_" + std::to_string(i + period) + " != x_" +
                                                  std::to_string(i));
    check_budget(family, po, eps, k);

    std::vector<Point> images(period);
    for (std::size_t j = 0; j < period; ++j) images[j] = evaluate(family, j, po.points[j]);
    const StateSpace& X = family.space(0);

    PeriodicShadowResult res;
    res.period = period;
    std::vector<Point> z(period + 1);
    Point y = po.points[0];
    for (res.iterations = 1; res.iterations <= 100000; ++res.iterations) {
        z[period] = y;
        for (std::size_t j = period; j-- > 0;) z[j] = pull(family, j, po.points[j], images[j], z[j + 1]);
        const double step = X.distance(z[0], y);
        y = z[0];
        if (step < 1e-9) break;
    }
    if (res.iterations > 100000) res.iterations = 100000;
    // final chain through the fixed point
    z[period] = y;
    for (std::size_t j = period; j-- > 0;) z[j] = pull(family, j, po.points[j], images[j], z[j + 1]);
    res.point = z[0];

    Point fwd = res.point;
    for (std::size_t j = 0; j < period; ++j) fwd = evaluate(family, j, fwd);
    res.fixed_point_residual = X.distance(fwd, res.point);

    bool periodic_maps = true;
    for (std::size_t i = period; i < k && periodic_maps; ++i)
        periodic_maps = family.map(i) == family.map(i % period);
    res.per_step_errors.resize(k + 1);
    Point cur = res.point;
    for (std::size_t i = 0; i <= k; ++i) {
        const Point& zi = periodic_maps ? z[i % period] : cur;
        res.per_step_errors[i] = X.distance(zi, po.points[i]);
        res.max_error = std::max(res.max_error, res.per_step_errors[i]);
        if (!periodic_maps && i < k) cur = evaluate(family, i, cur);
    }
    res.verdict = res.fixed_point_residual < 1e-9 && res.max_error < eps;
    return res;
}

LipschitzReport lipschitz_report(const MapFamily& family, std::span<const LipschitzTrial> trials,
                                 double margin) {
    require_expanding(family);
    const auto sup = family.sup_rate();
    if (!sup || !(*sup < 1.0))
        fail(ErrorCode::SupRateNotBounded, family.name() + " has sup lambda_n = 1 or unknown");
    if (!(margin > 0.0 && margin < 1.0)) fail(ErrorCode::InvalidArgument, "margin must be in (0,1)");
    LipschitzReport rep;
    rep.sup_rate = *sup;
    rep.certificate = 1.0 / (1.0 - *sup);
    rep.verdict = true;
    for (const auto& t : trials) {
        if (!(t.delta > 0.0)) {
            rep.deltas.push_back(0.0);
            rep.epsilons.push_back(0.0);
            rep.ratios.push_back(0.0);
            continue;
        }
        const double eps = t.delta / (margin * (1.0 - *sup));
        const Point x0 = t.x0.empty() ? family.space(0).canonical(Point(family.space(0).dimension(), 0.0))
                                      : t.x0;
        const PseudoOrbit po = perturb_orbit(family, x0, t.horizon, t.delta, t.seed);
        const ShadowResult res = pullback_shadow(family, po, eps);
        const double ratio = t.delta > 0.0 ? res.report.max_error / t.delta : 0.0;
        rep.deltas.push_back(t.delta);
        rep.epsilons.push_back(eps);
        rep.ratios.push_back(ratio);
        rep.estimate = std::max(rep.estimate, ratio);
        if (!(ratio <= rep.certificate) || !res.report.verdict) rep.verdict = false;
    }
    return rep;
}

}  // namespace nashadow
