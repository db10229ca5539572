#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nashadow/family.hpp"
#include "nashadow/pseudo_orbit.hpp"

namespace nashadow {

/// Empirical modulus: an estimate, never a certificate.
struct EquicontinuityEstimate {
    double epsilon = 0.0;
    double delta = 0.0;        // largest passing rung eps * 2^-r
    std::size_t rung = 0;
    std::size_t horizon = 0;
    std::size_t pairs_tested = 0;
};

/// Tests the ladder eps * 2^-r, r = 0..horizon-1, on sampled pairs (all
/// pairs on finite spaces) from every start time m < horizon, following
/// f_m^n up to n = horizon. Throws NotEquicontinuousAtHorizon if no rung
/// passes.
EquicontinuityEstimate equicontinuity_modulus(const MapFamily& family, double eps,
                                              std::size_t horizon = 20, std::size_t samples = 32);

struct SplicedOrbit {
    std::size_t level = 0;
    std::size_t cut = 0;
    std::vector<Point> head;   // exact orbit x_{n0}..x_{n(cut-1)} landing on x_cut
    PseudoOrbit orbit;         // head followed by the original tail
};

/// Replaces x_0..x_{cut-1} with a backward preimage chain ending on x_cut,
/// choosing at each step the preimage closest to the original point (ties
/// by branch order). Throws PreimageSearchFailed when a point has no
/// preimage.
SplicedOrbit splice(const MapFamily& family, const PseudoOrbit& po, std::size_t cut);

enum class ShadowOracle { Auto, Exhaustive, Transport, Solver };

struct LimitOptions {
    ShadowOracle oracle = ShadowOracle::Auto;
    /// Gate on equicontinuity_modulus at eps = 1/levels. Expanding
    /// families never pass it; turn it off to run the splice construction
    /// with the solver as the shadowing oracle.
    bool check_equicontinuity = true;
    double cauchy_tolerance = 1e-9;
    double margin = 0.98;  // solver route: cut where e_i < margin (1 - lambda_i) eps_n
};

struct ConvergenceRow {
    std::size_t level = 0;
    std::size_t cut = 0;
    double delta = 0.0;         // defect threshold for the cut (solver: at the cut)
    double level_error = 0.0;   // sup_{i >= cut} d(F_i(y_n), x_i)
    double window_error = 0.0;  // max_{i in [cut, 2 cut]} d(F_i(y), x_i) for the final y
    double step = 0.0;          // d(y_n, y_{n-1})
};

struct LimitShadowResult {
    Point y;
    ShadowOracle oracle = ShadowOracle::Auto;
    std::vector<Point> level_points;  // y_1..y_levels
    std::vector<ConvergenceRow> table;
    std::vector<double> errors;       // d(F_i(y), x_i), i = 0..horizon
    bool monotone = false;            // window errors nonincreasing
    bool verdict = false;
};

/// For n = 1..levels: cut the pseudo-orbit where its tail defects drop
/// below delta_n, splice, and shadow the spliced orbit within 1/n. Throws
/// NoConvergence when consecutive y_n fail to agree within the Cauchy
/// tolerance and OracleFailed when the oracle misses 1/n.
LimitShadowResult limit_shadow_point(const MapFamily& family, const PseudoOrbit& po,
                                     std::size_t levels, LimitOptions options = {});

}  // namespace nashadow
