#include "nashadow/family.hpp"

#include <algorithm>
#include <cmath>

#include "nashadow/errors.hpp"
#include "nashadow/product.hpp"

namespace nashadow {

namespace {

MapFamily::Traits traits_of(const std::vector<StepMapPtr>& maps) {
    MapFamily::Traits t;
    t.expanding = !maps.empty();
    t.isometric = !maps.empty();
    t.branch_radius = std::numeric_limits<double>::infinity();
    double sup = 0.0;
    for (const auto& m : maps) {
        const auto r = m->contraction_rate();
        const auto b = m->branch_radius();
        if (!r || !b) {
            t.expanding = false;
        } else {
            sup = std::max(sup, *r);
            t.branch_radius = std::min(t.branch_radius, *b);
        }
        t.isometric = t.isometric && m->is_isometry();
    }
    if (t.expanding) {
        t.sup_rate = sup;
    } else {
        t.branch_radius = 0.0;
    }
    return t;
}

}  // namespace

MapFamily MapFamily::eventually_periodic(std::string name, std::vector<StateSpace> space_prefix,
                                         std::vector<StateSpace> space_cycle,
                                         std::vector<StepMapPtr> map_prefix,
                                         std::vector<StepMapPtr> map_cycle) {
    if (space_prefix.empty() && space_cycle.empty())
        fail(ErrorCode::InvalidArgument, "family needs at least one space");
    if (map_prefix.empty() && map_cycle.empty())
        fail(ErrorCode::InvalidArgument, "family needs at least one map");
    MapFamily f;
    f.name_ = std::move(name);
    f.space_prefix_ = std::move(space_prefix);
    f.space_cycle_ = std::move(space_cycle);
    f.map_prefix_ = std::move(map_prefix);
    f.map_cycle_ = std::move(map_cycle);
    std::vector<StepMapPtr> all = f.map_prefix_;
    all.insert(all.end(), f.map_cycle_.begin(), f.map_cycle_.end());
    f.traits_ = traits_of(all);
    f.descriptor_ = {{"kind", "custom"}, {"name", f.name_}};
    return f;
}

MapFamily MapFamily::constant(std::string name, const StateSpace& space, StepMapPtr map) {
    return eventually_periodic(std::move(name), {}, {space}, {}, {std::move(map)});
}

MapFamily MapFamily::generated(std::string name, const StateSpace& space, Generator generator,
                               Traits traits) {
    MapFamily f;
    f.name_ = std::move(name);
    f.generated_space_ = space;
    f.generator_ = std::move(generator);
    f.traits_ = traits;
    f.descriptor_ = {{"kind", "custom"}, {"name", f.name_}};
    return f;
}

MapFamily MapFamily::finite_schedule(std::string name, std::vector<StateSpace> spaces,
                                     std::vector<StepMapPtr> maps) {
    if (spaces.size() != maps.size() + 1)
        fail(ErrorCode::InvalidArgument, "finite schedule needs one more space than maps");
    return eventually_periodic(std::move(name), std::move(spaces), {}, std::move(maps), {});
}

MapFamily MapFamily::with_descriptor(nlohmann::json d) const {
    MapFamily f = *this;
    f.descriptor_ = std::move(d);
    return f;
}

std::size_t MapFamily::space_slot(std::size_t n) const {
    if (n < space_prefix_.size()) return n;
    if (space_cycle_.empty())
        fail(ErrorCode::IndexOutOfSchedule, "space index " + std::to_string(n) + " beyond schedule");
    return space_prefix_.size() + (n - space_prefix_.size()) % space_cycle_.size();
}

const StateSpace& MapFamily::space(std::size_t n) const {
    if (generated_space_) return *generated_space_;
    const std::size_t s = space_slot(n);
    return s < space_prefix_.size() ? space_prefix_[s] : space_cycle_[s - space_prefix_.size()];
}

StepMapPtr MapFamily::map(std::size_t n) const {
    if (generator_) return generator_(n);
    if (n < map_prefix_.size()) return map_prefix_[n];
    if (map_cycle_.empty())
        fail(ErrorCode::IndexOutOfSchedule, "map index " + std::to_string(n) + " beyond schedule");
    return map_cycle_[(n - map_prefix_.size()) % map_cycle_.size()];
}

std::optional<double> MapFamily::rate(std::size_t n) const { return map(n)->contraction_rate(); }

bool MapFamily::constant_spaces() const noexcept {
    if (generated_space_) return true;
    std::vector<const StateSpace*> all;
    for (const auto& s : space_prefix_) all.push_back(&s);
    for (const auto& s : space_cycle_) all.push_back(&s);
    return std::all_of(all.begin(), all.end(), [&](const StateSpace* s) { return *s == *all[0]; });
}

std::optional<std::size_t> MapFamily::schedule_limit() const noexcept {
    if (generator_ || !map_cycle_.empty()) return std::nullopt;
    return map_prefix_.size();
}

// ---------------------------------------------------------------- operations

Point evaluate(const MapFamily& family, std::size_t n, const Point& x) {
    const StateSpace& dom = family.space(n);
    if (!dom.contains(x))
        fail(ErrorCode::PointOutsideSpace, "point not in X_" + std::to_string(n));
    const StepMapPtr f = family.map(n);
    return family.space(n + 1).canonical(f->apply(dom.canonical(x)));
}

OrbitSegment compose(const MapFamily& family, const Point& x, std::size_t n) {
    if (!family.space(0).contains(x)) fail(ErrorCode::PointOutsideSpace, "point not in X_0");
    OrbitSegment seg;
    seg.points.reserve(n + 1);
    seg.points.push_back(family.space(0).canonical(x));
    for (std::size_t i = 0; i < n; ++i) seg.points.push_back(evaluate(family, i, seg.points.back()));
    return seg;
}

std::vector<Point> preimages(const MapFamily& family, std::size_t n, const Point& w) {
    if (!family.space(n + 1).contains(w))
        fail(ErrorCode::PointOutsideSpace, "point not in X_" + std::to_string(n + 1));
    return family.map(n)->preimages(family.space(n + 1).canonical(w));
}

Point inverse_branch(const MapFamily& family, std::size_t n, const Point& w, std::size_t branch,
                     const Point& y) {
    if (!family.expanding()) fail(ErrorCode::NotExpanding, family.name() + " is not expanding");
    const StateSpace& cod = family.space(n + 1);
    if (!cod.contains(y)) fail(ErrorCode::PointOutsideSpace, "y not in X_" + std::to_string(n + 1));
    const double d = cod.distance(w, y);
    if (d >= family.branch_radius())
        fail(ErrorCode::PointOutsideBranchDomain,
             "d(w,y) = " + std::to_string(d) + " >= delta_0 = " +
                 std::to_string(family.branch_radius()));
    const auto pre = preimages(family, n, w);
    if (branch >= pre.size())
        fail(ErrorCode::InvalidBranchId,
             "branch " + std::to_string(branch) + " of " + std::to_string(pre.size()));
    return family.space(n).canonical(
        family.map(n)->inverse_branch(cod.canonical(w), pre[branch], cod.canonical(y)));
}

double golden_sample(std::size_t i) noexcept {
    constexpr double kGolden = 0.61803398874989484820;
    return wrap_unit(static_cast<double>(i + 1) * kGolden);
}

namespace {

bool stays_close(const MapFamily& family, Point x, Point y, double eps0, std::size_t horizon) {
    for (std::size_t n = 0;; ++n) {
        if (family.space(n).distance(x, y) > eps0) return false;
        if (n == horizon) return true;
        x = evaluate(family, n, x);
        y = evaluate(family, n, y);
    }
}

}  // namespace

FalsifierResult expansiveness_falsifier(const MapFamily& family, double eps0, std::size_t horizon,
                                        std::size_t samples) {
    if (!(eps0 > 0.0)) fail(ErrorCode::InvalidArgument, "eps0 must be positive");
    const StateSpace& x0 = family.space(0);
    FalsifierResult out;
    if (x0.is_finite()) {
        const std::size_t n = x0.cardinality();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                ++out.pairs_tested;
                if (stays_close(family, x0.point_at(i), x0.point_at(j), eps0, horizon)) {
                    out.falsified = true;
                    out.counterexample = std::make_pair(x0.point_at(i), x0.point_at(j));
                    return out;
                }
            }
        return out;
    }
    if (!x0.is_continuous())
        fail(ErrorCode::InvalidArgument, "mixed finite/continuous spaces are not sampled");
    const std::size_t dim = x0.dimension();
    for (std::size_t i = 0; i < samples; ++i) {
        Point x(dim);
        for (std::size_t c = 0; c < dim; ++c) x[c] = golden_sample(i * dim + c);
        const double h = eps0 * std::ldexp(1.0, -static_cast<int>(1 + i % 10));
        Point y = x0.shift(x, 0, x[0] + h <= 1.0 ? h : -h);
        ++out.pairs_tested;
        if (x0.distance(x, y) == 0.0) continue;
        if (stays_close(family, x, y, eps0, horizon)) {
            out.falsified = true;
            out.counterexample = std::make_pair(x, y);
            return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------- built-ins

namespace builtin {

MapFamily doubling() {
    return MapFamily::constant("doubling", StateSpace::circle(), CircleLiftMap::linear(2))
        .with_descriptor({{"kind", "doubling"}});
}

MapFamily tripling() {
    return MapFamily::constant("tripling", StateSpace::circle(), CircleLiftMap::linear(3))
        .with_descriptor({{"kind", "tripling"}});
}

MapFamily alternating_2_3() {
    return MapFamily::eventually_periodic("alternating_2_3", {}, {StateSpace::circle()}, {},
                                          {CircleLiftMap::linear(2), CircleLiftMap::linear(3)})
        .with_descriptor({{"kind", "alternating"}});
}

MapFamily slow_expanding() {
    MapFamily::Traits t;
    t.expanding = true;
    t.branch_radius = 0.25;
    t.sup_rate = 1.0;
    return MapFamily::generated(
               "slow_expanding", StateSpace::circle(),
               [](std::size_t n) {
                   const double k = static_cast<double>(n);
                   return CircleLiftMap::two_slope((k + 1.0) / (k + 2.0));
               },
               t)
        .with_descriptor({{"kind", "slow_expanding"}});
}

MapFamily positive_product_control() {
    MapFamily::Traits t;
    t.expanding = true;
    t.branch_radius = 0.25;
    t.sup_rate = 1.0;
    return MapFamily::generated(
               "positive_product_control", StateSpace::circle(),
               [](std::size_t n) {
                   const double rate = 1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n + 1, 1000)));
                   return CircleLiftMap::two_slope(std::min(rate, std::nextafter(1.0, 0.0)));
               },
               t)
        .with_descriptor({{"kind", "positive_product"}});
}

MapFamily identity_circle() {
    return MapFamily::constant("identity_circle", StateSpace::circle(), CircleLiftMap::rotation(0.0))
        .with_descriptor({{"kind", "identity"}, {"space", "circle"}});
}

MapFamily identity_interval() {
    return MapFamily::constant("identity_interval", StateSpace::interval(),
                               std::make_shared<IntervalMap>(IntervalMap::Kind::Identity))
        .with_descriptor({{"kind", "identity"}, {"space", "interval"}});
}

MapFamily tent() {
    return MapFamily::constant("tent", StateSpace::interval(),
                               std::make_shared<IntervalMap>(IntervalMap::Kind::Tent))
        .with_descriptor({{"kind", "tent"}});
}

MapFamily rotations(std::vector<double> angles) {
    std::vector<StepMapPtr> maps;
    for (double a : angles) maps.push_back(CircleLiftMap::rotation(a));
    return MapFamily::eventually_periodic("rotations", {}, {StateSpace::circle()}, {},
                                          std::move(maps))
        .with_descriptor({{"kind", "rotation"}, {"angles", angles}});
}

MapFamily finite_constant(const StateSpace& space, std::vector<std::size_t> table,
                          std::string name) {
    auto map = std::make_shared<FiniteMap>(std::move(table), space, space, name);
    return MapFamily::constant(std::move(name), space, std::move(map));
}

namespace {
std::vector<double> spaced(std::size_t n, double spacing) {
    std::vector<double> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = static_cast<double>(i) * spacing;
    return pos;
}
}  // namespace

MapFamily finite_cycle(std::size_t n, double spacing) {
    std::vector<std::size_t> table(n);
    for (std::size_t i = 0; i < n; ++i) table[i] = (i + 1) % n;
    return finite_constant(StateSpace::line_points(spaced(n, spacing), "line"), std::move(table),
                           "cycle" + std::to_string(n))
        .with_descriptor({{"kind", "finite_cycle"}, {"n", n}, {"spacing", spacing}});
}

MapFamily finite_identity(std::size_t n, double spacing) {
    std::vector<std::size_t> table(n);
    for (std::size_t i = 0; i < n; ++i) table[i] = i;
    return finite_constant(StateSpace::line_points(spaced(n, spacing), "line"), std::move(table),
                           "identity" + std::to_string(n))
        .with_descriptor({{"kind", "finite_identity"}, {"n", n}, {"spacing", spacing}});
}

MapFamily finite_shift4(double spacing) {
    return finite_constant(StateSpace::line_points(spaced(4, spacing), "line"), {2, 3, 1, 0},
                           "shift4")
        .with_descriptor({{"kind", "finite_shift4"}, {"spacing", spacing}});
}

MapFamily funnel8() {
    return finite_constant(StateSpace::discrete(8), {1, 2, 0, 0, 1, 2, 3, 4}, "funnel8")
        .with_descriptor({{"kind", "funnel8"}});
}

}  // namespace builtin

// ---------------------------------------------------------------- JSON

namespace {

template <typename T>
T field(const nlohmann::json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) fail(ErrorCode::ConfigInvalid, path + "." + key + " is required");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ConfigInvalid, path + "." + key + ": " + e.what());
    }
}

template <typename T>
T field_or(const nlohmann::json& j, const std::string& key, T fallback, const std::string& path) {
    return j.contains(key) ? field<T>(j, key, path) : fallback;
}

MapFamily family_from_json_at(const nlohmann::json& d, const std::string& path) {
    if (!d.is_object()) fail(ErrorCode::ConfigInvalid, path + " must be an object");
    const auto kind = field<std::string>(d, "kind", path);
    if (kind == "doubling") return builtin::doubling();
    if (kind == "tripling") return builtin::tripling();
    if (kind == "alternating") return builtin::alternating_2_3();
    if (kind == "slow_expanding") return builtin::slow_expanding();
    if (kind == "positive_product") return builtin::positive_product_control();
    if (kind == "tent") return builtin::tent();
    if (kind == "funnel8") return builtin::funnel8();
    if (kind == "identity") {
        const auto space = field_or<std::string>(d, "space", "circle", path);
        if (space == "circle") return builtin::identity_circle();
        if (space == "interval") return builtin::identity_interval();
        fail(ErrorCode::ConfigInvalid, path + ".space must be circle or interval");
    }
    if (kind == "linear") {
        const int degree = field<int>(d, "degree", path);
        const double shift = field_or<double>(d, "shift", 0.0, path);
        if (degree < 1) fail(ErrorCode::ConfigInvalid, path + ".degree must be >= 1");
        return MapFamily::constant("linear", StateSpace::circle(),
                                   CircleLiftMap::linear(degree, shift))
            .with_descriptor(d);
    }
    if (kind == "rotation") {
        auto angles = field<std::vector<double>>(d, "angles", path);
        if (angles.empty()) fail(ErrorCode::ConfigInvalid, path + ".angles must be nonempty");
        return builtin::rotations(std::move(angles));
    }
    if (kind == "finite_cycle")
        return builtin::finite_cycle(field<std::size_t>(d, "n", path),
                                     field_or<double>(d, "spacing", 1.0, path));
    if (kind == "finite_identity")
        return builtin::finite_identity(field<std::size_t>(d, "n", path),
                                        field_or<double>(d, "spacing", 1.0, path));
    if (kind == "finite_shift4")
        return builtin::finite_shift4(field_or<double>(d, "spacing", 1.0, path));
    if (kind == "finite") {
        const auto table = field<std::vector<std::size_t>>(d, "table", path);
        try {
            if (d.contains("distances")) {
                auto space = StateSpace::finite(
                    field<std::vector<std::vector<double>>>(d, "distances", path));
                return builtin::finite_constant(space, table, "finite").with_descriptor(d);
            }
            auto space = StateSpace::line_points(field<std::vector<double>>(d, "positions", path));
            return builtin::finite_constant(space, table, "finite").with_descriptor(d);
        } catch (const ShadowError& e) {
            if (e.code() == ErrorCode::ConfigInvalid) throw;
            fail(ErrorCode::ConfigInvalid, path + ": " + e.what());
        }
    }
    if (kind == "product") {
        if (!d.contains("first") || !d.contains("second"))
            fail(ErrorCode::ConfigInvalid, path + " needs first and second");
        return product(family_from_json_at(d.at("first"), path + ".first"),
                       family_from_json_at(d.at("second"), path + ".second"));
    }
    fail(ErrorCode::ConfigInvalid, path + ".kind: unknown family kind '" + kind + "'");
}

}  // namespace

MapFamily family_from_json(const nlohmann::json& descriptor) {
    return family_from_json_at(descriptor, "family");
}

}  // namespace nashadow
