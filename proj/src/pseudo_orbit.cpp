#include "nashadow/pseudo_orbit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "nashadow/errors.hpp"

namespace nashadow {

double PseudoOrbit::max_defect() const noexcept {
    return defects.empty() ? 0.0 : *std::max_element(defects.begin(), defects.end());
}

PseudoOrbit make_pseudo_orbit(const MapFamily& family, std::vector<Point> points) {
    PseudoOrbit po;
    po.points = std::move(points);
    for (std::size_t i = 0; i < po.points.size(); ++i) {
        if (!family.space(i).contains(po.points[i]))
            fail(ErrorCode::PointOutsideSpace, "x_" + std::to_string(i) + " not in its space");
        po.points[i] = family.space(i).canonical(po.points[i]);
    }
    po.defects.reserve(po.horizon());
    for (std::size_t i = 0; i + 1 < po.points.size(); ++i)
        po.defects.push_back(
            family.space(i + 1).distance(evaluate(family, i, po.points[i]), po.points[i + 1]));
    return po;
}

bool defects_consistent(const MapFamily& family, const PseudoOrbit& po, double tol) {
    if (po.defects.size() != po.horizon()) return false;
    for (std::size_t i = 0; i < po.points.size(); ++i)
        if (!family.space(i).contains(po.points[i])) return false;
    for (std::size_t i = 0; i < po.defects.size(); ++i) {
        const double d =
            family.space(i + 1).distance(evaluate(family, i, po.points[i]), po.points[i + 1]);
        if (std::fabs(d - po.defects[i]) > tol) return false;
    }
    return true;
}

DefectProfile defect_profile(std::span<const double> defects) {
    DefectProfile p;
    const std::size_t k = defects.size();
    p.cesaro_means.resize(k);
    p.tail_sup.resize(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sum += defects[i];
        p.cesaro_means[i] = sum / static_cast<double>(i + 1);
        p.max_defect = std::max(p.max_defect, defects[i]);
    }
    double tail = 0.0;
    for (std::size_t i = k; i-- > 0;) {
        tail = std::max(tail, defects[i]);
        p.tail_sup[i] = tail;
    }
    return p;
}

// ---------------------------------------------------------------- rng

Rng::Rng(std::uint64_t seed) {
    // splitmix64 expansion of the seed into xoshiro256** state
    std::uint64_t z = seed;
    for (auto& s : state_) {
        z += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = z;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        s = x ^ (x >> 31);
    }
}

std::uint64_t Rng::next() {
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(next() % n);
}

bool Rng::coin() { return (next() >> 63) != 0; }

// ---------------------------------------------------------------- perturbation

namespace {

Point slice(const Point& p, std::size_t from, std::size_t count) {
    return Point(p.begin() + static_cast<std::ptrdiff_t>(from),
                 p.begin() + static_cast<std::ptrdiff_t>(from + count));
}

Point join(Point a, const Point& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Point random_displacement(const StateSpace& space, const Point& p, double noise, Rng& rng) {
    switch (space.kind()) {
        case SpaceKind::Circle:
        case SpaceKind::Interval: {
            const double magnitude = rng.uniform() * noise;
            return space.shift(p, 0, rng.coin() ? magnitude : -magnitude);
        }
        case SpaceKind::Finite: {
            std::vector<std::size_t> near;
            for (std::size_t s = 0; s < space.cardinality(); ++s)
                if (space.distance(p, space.point_at(s)) < noise) near.push_back(s);
            return space.point_at(near[rng.below(near.size())]);
        }
        case SpaceKind::Product: {
            const std::size_t k = space.first().dimension();
            return join(random_displacement(space.first(), slice(p, 0, k), noise, rng),
                        random_displacement(space.second(), slice(p, k, p.size() - k), noise, rng));
        }
    }
    return p;
}

std::optional<Point> exact_displacement(const StateSpace& space, const Point& p, double e,
                                        bool positive, const StepMap* next_map) {
    if (e == 0.0) return p;
    switch (space.kind()) {
        case SpaceKind::Circle:
        case SpaceKind::Interval: {
            for (bool sign : {positive, !positive}) {
                Point q = space.shift(p, 0, sign ? e : -e);
                if (std::fabs(space.distance(p, q) - e) <= 1e-12) return q;
            }
            return std::nullopt;
        }
        case SpaceKind::Finite: {
            std::optional<Point> fallback;
            const Point target = next_map ? next_map->apply(p) : Point{};
            for (std::size_t s = 0; s < space.cardinality(); ++s) {
                Point q = space.point_at(s);
                if (std::fabs(space.distance(p, q) - e) > 1e-12) continue;
                if (next_map && next_map->apply(q) == target) return q;
                if (!fallback) fallback = q;
            }
            return fallback;
        }
        case SpaceKind::Product: {
            const std::size_t k = space.first().dimension();
            const Point a = slice(p, 0, k);
            const Point b = slice(p, k, p.size() - k);
            if (auto q = exact_displacement(space.first(), a, e, positive, nullptr))
                return join(*q, b);
            if (auto q = exact_displacement(space.second(), b, e, positive, nullptr))
                return join(a, *q);
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

PseudoOrbit perturb_orbit(const MapFamily& family, const Point& x0, std::size_t horizon,
                          double noise, std::uint64_t seed) {
    if (!(noise >= 0.0)) fail(ErrorCode::InvalidArgument, "noise must be nonnegative");
    Rng rng(seed);
    std::vector<Point> pts;
    pts.reserve(horizon + 1);
    if (!family.space(0).contains(x0)) fail(ErrorCode::PointOutsideSpace, "x0 not in X_0");
    pts.push_back(family.space(0).canonical(x0));
    for (std::size_t i = 0; i < horizon; ++i) {
        const StateSpace& next = family.space(i + 1);
        if (noise > next.diameter())
            fail(ErrorCode::NoiseExceedsSpace,
                 "noise " + std::to_string(noise) + " exceeds diameter of " + next.label());
        Point y = evaluate(family, i, pts.back());
        pts.push_back(noise > 0.0 ? random_displacement(next, y, noise, rng) : y);
    }
    return make_pseudo_orbit(family, std::move(pts));
}

PseudoOrbit inject_defects(const MapFamily& family, const Point& x0, std::span<const double> defects,
                           SignSchedule signs, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point> pts;
    pts.reserve(defects.size() + 1);
    if (!family.space(0).contains(x0)) fail(ErrorCode::PointOutsideSpace, "x0 not in X_0");
    pts.push_back(family.space(0).canonical(x0));
    for (std::size_t i = 0; i < defects.size(); ++i) {
        const Point y = evaluate(family, i, pts.back());
        bool positive = true;
        switch (signs) {
            case SignSchedule::Alternating: positive = (i % 2 == 0); break;
            case SignSchedule::Positive: positive = true; break;
            case SignSchedule::Random: positive = rng.coin(); break;
        }
        const StepMapPtr next_map = family.map(i + 1);
        auto q = exact_displacement(family.space(i + 1), y, defects[i], positive, next_map.get());
        if (!q)
            fail(ErrorCode::DefectNotRealizable,
                 "no point at distance " + std::to_string(defects[i]) + " at step " +
                     std::to_string(i));
        pts.push_back(std::move(*q));
    }
    return make_pseudo_orbit(family, std::move(pts));
}

Classification classify(const PseudoOrbit& po, double delta, double tol,
                        std::optional<std::size_t> horizon) {
    const std::size_t h = horizon.value_or(po.horizon());
    if (h > po.horizon()) fail(ErrorCode::InvalidArgument, "horizon exceeds pseudo-orbit length");
    Classification c;
    c.horizon = h;
    if (h == 0) {
        c.is_delta_pseudo = c.is_limit_pseudo = c.is_asymptotic_average = true;
        return c;
    }
    const std::span<const double> e(po.defects.data(), h);
    const DefectProfile p = defect_profile(e);
    c.max_defect = p.max_defect;
    c.tail_statistic = p.tail_sup[(3 * h) / 4];
    c.final_cesaro = p.cesaro_means.back();
    c.is_delta_pseudo = c.max_defect < delta;
    c.is_limit_pseudo = c.tail_statistic < tol;
    c.is_asymptotic_average = c.final_cesaro < tol;
    return c;
}

PseudoOrbit periodicize(const MapFamily& family, const PseudoOrbit& po, std::size_t period,
                        std::optional<std::size_t> horizon) {
    if (!family.constant_spaces())
        fail(ErrorCode::NonConstantSpaces, family.name() + " has time-varying spaces");
    if (period == 0 || period > po.points.size())
        fail(ErrorCode::InvalidArgument, "period must be in [1, length]");
    const std::size_t h = horizon.value_or(po.horizon());
    std::vector<Point> pts;
    pts.reserve(h + 1);
    for (std::size_t i = 0; i <= h; ++i) pts.push_back(po.points[i % period]);
    return make_pseudo_orbit(family, std::move(pts));
}

void write_csv(std::ostream& out, const PseudoOrbit& po) {
    const std::size_t dim = po.points.empty() ? 0 : po.points[0].size();
    out << "index";
    for (std::size_t c = 0; c < dim; ++c) out << ",x" << c;
    out << ",defect\n";
    out.precision(17);
    for (std::size_t i = 0; i < po.points.size(); ++i) {
        out << po.start_index + i;
        for (double v : po.points[i]) out << ',' << v;
        out << ',';
        if (i < po.defects.size()) out << po.defects[i];
        out << '\n';
    }
}

}  // namespace nashadow
