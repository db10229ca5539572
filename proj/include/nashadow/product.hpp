#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "nashadow/family.hpp"
#include "nashadow/pseudo_orbit.hpp"

namespace nashadow {

/// (F x G)_n(x, y) = (F_n x, G_n y) on X_n x Y_n with the max metric.
/// Throws ScheduleMismatch when the factors' schedules cannot be aligned.
MapFamily product(const MapFamily& F, const MapFamily& G);

enum class ShadowingVariant { Plain, H, SLimit, Limit, Average, AsymptoticAverage, Periodic, Lipschitz };

std::string_view variant_name(ShadowingVariant v) noexcept;
/// Throws ConfigInvalid for unknown names.
ShadowingVariant variant_from_name(std::string_view name);
/// True for the variants only covered by the closing remark of the product
/// section; those are checked empirically.
bool is_remark_level(ShadowingVariant v) noexcept;

struct VariantBudget {
    double eps = 0.25;
    double delta = 0.3;
    std::size_t max_length = 6;       // finite systems: pseudo-orbits of up to this many steps
    std::size_t max_nodes = 2000000;  // search nodes before BudgetExceeded
    std::size_t max_states = 4096;
    std::size_t trials = 16;          // continuous and empirical checks
    std::size_t horizon = 256;
    std::size_t levels = 8;           // limit checks
    double lipschitz_constant = 2.0;
    std::uint64_t seed = 1;
};

struct CheckResult {
    bool verdict = false;
    std::string semantics;              // "exhaustive", "solver", "transport", "empirical"
    bool remark_level = false;
    std::size_t cases = 0;
    std::optional<PseudoOrbit> witness; // failing pseudo-orbit
    std::string detail;
};

/// Checks one variant on one family. Finite families are enumerated
/// exhaustively; expanding circle families use the pullback solver and the
/// splice construction; isometric ones use backward transport.
/// Throws BudgetExceeded or OracleUnavailable.
CheckResult shadowing_check(const MapFamily& family, ShadowingVariant variant,
                            const VariantBudget& budget);

/// h-shadowing: d(F_i y, x_i) < eps for i < n and F_n(y) = x_n.
CheckResult h_shadow_check(const MapFamily& family, double eps, double delta,
                           std::size_t trials = 16);

/// s-limit shadowing: every delta-pseudo-orbit is eps-shadowed, and when it
/// is also a limit pseudo-orbit the same point limit-shadows it.
CheckResult s_limit_check(const MapFamily& family, double eps, double delta,
                          std::size_t horizon = 256);

struct EquivalenceRecord {
    ShadowingVariant variant = ShadowingVariant::Plain;
    CheckResult factor_F;
    CheckResult factor_G;
    CheckResult product;
    bool consistent = false;
};

EquivalenceRecord product_equivalence_check(const MapFamily& F, const MapFamily& G,
                                            ShadowingVariant variant, const VariantBudget& budget);

nlohmann::json to_json(const CheckResult& r);
nlohmann::json to_json(const EquivalenceRecord& r);

}  // namespace nashadow
