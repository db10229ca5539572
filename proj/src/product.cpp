#include "nashadow/product.hpp"

#include <algorithm>
#include <numeric>

#include "nashadow/errors.hpp"

namespace nashadow {

MapFamily product(const MapFamily& F, const MapFamily& G) {
    const auto lf = F.schedule_limit();
    const auto lg = G.schedule_limit();
    if (lf.has_value() != lg.has_value() || (lf && *lf != *lg))
        fail(ErrorCode::ScheduleMismatch, F.name() + " and " + G.name() + " have different schedules");
    const std::string name = F.name() + " x " + G.name();
    const std::size_t k = F.space(0).dimension();
    auto pair_map = [k](const StepMapPtr& a, const StepMapPtr& b) -> StepMapPtr {
        return std::make_shared<ProductMap>(a, b, k);
    };
    const nlohmann::json desc = {{"kind", "product"}, {"first", F.descriptor()}, {"second", G.descriptor()}};

    MapFamily out = [&] {
        if (F.generator_ || G.generator_) {
            if (!F.constant_spaces() || !G.constant_spaces())
                fail(ErrorCode::ScheduleMismatch, "generated factors need constant spaces");
            MapFamily::Traits t;
            t.expanding = F.expanding() && G.expanding();
            t.isometric = F.isometric() && G.isometric();
            if (t.expanding) {
                t.branch_radius = std::min(F.branch_radius(), G.branch_radius());
                if (F.sup_rate() && G.sup_rate()) t.sup_rate = std::max(*F.sup_rate(), *G.sup_rate());
            }
            MapFamily a = F, b = G;
            return MapFamily::generated(
                name, StateSpace::product(F.space(0), G.space(0)),
                [a, b, pair_map](std::size_t n) { return pair_map(a.map(n), b.map(n)); }, t);
        }
        auto align = [](std::size_t p1, std::size_t c1, std::size_t p2, std::size_t c2) {
            const std::size_t prefix = std::max(p1, p2);
            std::size_t cycle = 0;
            if (c1 && c2) cycle = std::lcm(c1, c2);
            return std::pair{prefix, cycle};
        };
        if (lf) {
            std::vector<StateSpace> spaces;
            std::vector<StepMapPtr> maps;
            for (std::size_t n = 0; n <= *lf; ++n) spaces.push_back(StateSpace::product(F.space(n), G.space(n)));
            for (std::size_t n = 0; n < *lf; ++n) maps.push_back(pair_map(F.map(n), G.map(n)));
            return MapFamily::finite_schedule(name, std::move(spaces), std::move(maps));
        }
        const auto [sp, sc] = align(F.space_prefix_.size(), F.space_cycle_.size(),
                                    G.space_prefix_.size(), G.space_cycle_.size());
        const auto [mp, mc] = align(F.map_prefix_.size(), F.map_cycle_.size(),
                                    G.map_prefix_.size(), G.map_cycle_.size());
        std::vector<StateSpace> space_prefix, space_cycle;
        std::vector<StepMapPtr> map_prefix, map_cycle;
        for (std::size_t n = 0; n < sp; ++n) space_prefix.push_back(StateSpace::product(F.space(n), G.space(n)));
        for (std::size_t n = sp; n < sp + sc; ++n) space_cycle.push_back(StateSpace::product(F.space(n), G.space(n)));
        for (std::size_t n = 0; n < mp; ++n) map_prefix.push_back(pair_map(F.map(n), G.map(n)));
        for (std::size_t n = mp; n < mp + mc; ++n) map_cycle.push_back(pair_map(F.map(n), G.map(n)));
        return MapFamily::eventually_periodic(name, std::move(space_prefix), std::move(space_cycle),
                                              std::move(map_prefix), std::move(map_cycle));
    }();
    return out.with_descriptor(desc);
}

}  // namespace nashadow
