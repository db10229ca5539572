#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nashadow/maps.hpp"
#include "nashadow/space.hpp"

namespace nashadow {

class MapFamily;
/// (F x G)_n = F_n x G_n on X_n x Y_n with the max metric.
MapFamily product(const MapFamily& F, const MapFamily& G);

/// A nonautonomous system: spaces X_n and maps f_n: X_n -> X_{n+1}.
///
/// Schedules are eventually periodic (a prefix followed by a repeating
/// cycle) or generated from a formula in n. Instances are immutable and can
/// be shared across threads.
class MapFamily {
public:
    using Generator = std::function<StepMapPtr(std::size_t)>;

    struct Traits {
        bool expanding = false;
        bool isometric = false;
        double branch_radius = 0.0;          // delta_0 when expanding
        std::optional<double> sup_rate;      // known sup of lambda_n, if any
    };

    static MapFamily eventually_periodic(std::string name, std::vector<StateSpace> space_prefix,
                                         std::vector<StateSpace> space_cycle,
                                         std::vector<StepMapPtr> map_prefix,
                                         std::vector<StepMapPtr> map_cycle);
    static MapFamily constant(std::string name, const StateSpace& space, StepMapPtr map);
    /// Constant space, maps produced by `generator(n)`. `traits` describes the
    /// whole infinite family and cannot be derived from a finite prefix.
    static MapFamily generated(std::string name, const StateSpace& space, Generator generator,
                               Traits traits);
    /// Finite schedule without periodic extension.
    static MapFamily finite_schedule(std::string name, std::vector<StateSpace> spaces,
                                     std::vector<StepMapPtr> maps);

    const std::string& name() const noexcept { return name_; }
    const StateSpace& space(std::size_t n) const;
    StepMapPtr map(std::size_t n) const;
    /// lambda_n of f_n, if f_n is expanding.
    std::optional<double> rate(std::size_t n) const;

    bool expanding() const noexcept { return traits_.expanding; }
    bool isometric() const noexcept { return traits_.isometric; }
    double branch_radius() const noexcept { return traits_.branch_radius; }
    std::optional<double> sup_rate() const noexcept { return traits_.sup_rate; }
    bool constant_spaces() const noexcept;
    /// Maps are defined for n < limit; nullopt for infinite schedules.
    std::optional<std::size_t> schedule_limit() const noexcept;

    const nlohmann::json& descriptor() const noexcept { return descriptor_; }
    MapFamily with_descriptor(nlohmann::json d) const;

private:
    friend MapFamily product(const MapFamily& F, const MapFamily& G);

    MapFamily() = default;
    std::size_t space_slot(std::size_t n) const;

    std::string name_;
    std::vector<StateSpace> space_prefix_;
    std::vector<StateSpace> space_cycle_;
    std::vector<StepMapPtr> map_prefix_;
    std::vector<StepMapPtr> map_cycle_;
    Generator generator_;
    std::optional<StateSpace> generated_space_;
    Traits traits_;
    nlohmann::json descriptor_;
};

/// An exact orbit piece: points[i] = F_i(points[0]) for start index 0.
struct OrbitSegment {
    std::size_t start_index = 0;
    std::vector<Point> points;
};

/// f_n(x). Throws PointOutsideSpace or IndexOutOfSchedule.
Point evaluate(const MapFamily& family, std::size_t n, const Point& x);

/// The segment x, F_1(x), ..., F_n(x), evaluated left to right.
OrbitSegment compose(const MapFamily& family, const Point& x, std::size_t n);

/// Preimages of w under f_n in branch-id order.
std::vector<Point> preimages(const MapFamily& family, std::size_t n, const Point& w);

/// The inverse branch of f_n through preimage number `branch` of w,
/// evaluated at y.
Point inverse_branch(const MapFamily& family, std::size_t n, const Point& w, std::size_t branch,
                     const Point& y);

struct FalsifierResult {
    bool falsified = false;
    std::optional<std::pair<Point, Point>> counterexample;
    std::size_t pairs_tested = 0;
};

/// Looks for x != y whose orbits stay eps0-close up to `horizon`. Finding
/// one refutes eps0 as an expansiveness constant; finding none certifies
/// nothing.
FalsifierResult expansiveness_falsifier(const MapFamily& family, double eps0, std::size_t horizon,
                                        std::size_t samples);

/// Deterministic low-discrepancy sample in [0,1): frac((i+1) * golden).
double golden_sample(std::size_t i) noexcept;

namespace builtin {

/// f_n(x) = 2x mod 1, lambda = 1/2, delta_0 = 1/4.
MapFamily doubling();
/// f_n(x) = 3x mod 1.
MapFamily tripling();
/// 2x and 3x mod 1 alternating, starting with 2x at n = 0.
MapFamily alternating_2_3();
/// Degree-2 two-slope maps with lambda_n = (n+1)/(n+2): the product of the
/// rates over the first k maps is 1/(k+1) -> 0 while sup lambda_n = 1.
MapFamily slow_expanding();
/// Degree-2 two-slope maps with lambda_n = 1 - 2^-(n+1): the product of the
/// rates converges to a positive limit.
MapFamily positive_product_control();
/// Identity on the circle.
MapFamily identity_circle();
/// Identity on [0,1].
MapFamily identity_interval();
/// Tent map on [0,1].
MapFamily tent();
/// Rotations by the given angles, repeated cyclically.
MapFamily rotations(std::vector<double> angles);
/// A constant table on a finite space.
MapFamily finite_constant(const StateSpace& space, std::vector<std::size_t> table,
                          std::string name);
/// i -> i+1 mod n on points placed at i*spacing on a line.
MapFamily finite_cycle(std::size_t n, double spacing = 1.0);
/// Identity on n points spaced `spacing` apart.
MapFamily finite_identity(std::size_t n, double spacing = 1.0);
/// 4-state permutation 0->2->1->3->0 on points 0, s, 2s, 3s.
MapFamily finite_shift4(double spacing = 1.0);
/// Eight states under the discrete metric: {0,1,2} is a 3-cycle, states 3,4,5
/// map onto 0,1,2 and states 6,7 onto 3,4. Every state enters the cycle within
/// two steps. Not onto.
MapFamily funnel8();

}  // namespace builtin

/// Builds a family from its JSON descriptor. Throws ConfigInvalid.
MapFamily family_from_json(const nlohmann::json& descriptor);

}  // namespace nashadow
