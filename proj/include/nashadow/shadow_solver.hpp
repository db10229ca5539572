#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nashadow/family.hpp"
#include "nashadow/pseudo_orbit.hpp"

namespace nashadow {

/// Ball over-approximation of the pullback set at time j.
struct PullbackCell {
    std::size_t j = 0;
    Point center;
    double radius = 0.0;
};

struct ShadowReport {
    Point shadow_point;
    std::size_t horizon = 0;
    std::vector<double> per_step_errors;  // d(F_n(x), x_n), n = 0..horizon
    double max_error = 0.0;
    double diameter_bound = 0.0;          // 2 eps prod_{i<k} lambda_i
    double cell_diameter = 0.0;           // measured diameter of the final cell
    double epsilon = 0.0;
    std::vector<double> delta_schedule;   // (1 - lambda_n) eps, the admissible supremum
    double chain_residual = 0.0;          // max d(f_n(z_n), z_{n+1}) of the reported orbit
    bool verdict = false;
};

struct PullbackChain {
    std::vector<PullbackCell> cells;  // cells[j] for j = 0..k
    std::vector<Point> orbit;         // z_j: orbit of the shadow point, built backward
};

struct ShadowResult {
    ShadowReport report;
    PullbackChain chain;
};

enum class ShadowPointRule {
    /// z_k = x_k, z_j = g_j(z_{j+1}). The orbit ends exactly on x_k and is
    /// computed without forward error growth.
    Terminal,
    /// Center of the final cell, orbit computed forward.
    CellCenter,
};

struct ShadowOptions {
    ShadowPointRule rule = ShadowPointRule::Terminal;
    /// Reject pseudo-orbits whose defects exceed (1 - lambda_n) eps.
    bool enforce_budget = true;
};

/// delta_n = margin (1 - lambda_n) eps. Throws EpsilonTooLarge when
/// eps >= delta0 / 2 and InvalidArgument for rates outside (0,1) or margin
/// outside (0,1].
std::vector<double> delta_budget(std::span<const double> rates, double eps, double margin,
                                 double delta0);
/// The schedule for f_0..f_{horizon-1} of an expanding family.
std::vector<double> delta_budget(const MapFamily& family, std::size_t horizon, double eps,
                                 double margin);

/// 2 eps prod_{i<k} lambda_i.
double diameter_bound(const MapFamily& family, std::size_t k, double eps);

ShadowResult pullback_shadow(const MapFamily& family, const PseudoOrbit& po, double eps,
                             ShadowOptions options = {});

/// Diameter of the final cell for the first k steps of po.
double uniqueness_certificate(const MapFamily& family, const PseudoOrbit& po, double eps,
                              std::size_t k);

struct PeriodicShadowResult {
    Point point;
    std::size_t period = 0;
    double fixed_point_residual = 0.0;  // d(F_period(x), x)
    std::size_t iterations = 0;
    std::vector<double> per_step_errors;
    double max_error = 0.0;
    bool verdict = false;
};

/// Fixed point of the period return map g_0 o ... o g_{p-1} near x_0.
/// Throws NonPeriodicInput unless x_{i+p} = x_i throughout.
PeriodicShadowResult periodic_shadow(const MapFamily& family, const PseudoOrbit& po,
                                     std::size_t period, double eps);

struct LipschitzTrial {
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::size_t horizon = 64;
    Point x0;
};

struct LipschitzReport {
    double sup_rate = 0.0;
    double certificate = 0.0;  // 1 / (1 - sup lambda)
    std::vector<double> deltas;
    std::vector<double> epsilons;
    std::vector<double> ratios;  // max error / delta
    double estimate = 0.0;       // max ratio
    bool verdict = false;
};

/// Runs each trial at eps = delta / (margin (1 - sup lambda)). Throws
/// SupRateNotBounded unless the family's sup rate is known and below 1.
LipschitzReport lipschitz_report(const MapFamily& family, std::span<const LipschitzTrial> trials,
                                 double margin = 0.98);

}  // namespace nashadow
