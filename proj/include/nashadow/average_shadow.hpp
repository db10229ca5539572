#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nashadow/density.hpp"
#include "nashadow/family.hpp"
#include "nashadow/pseudo_orbit.hpp"

namespace nashadow {

/// A closed set A with f_n(A) in A for every n. A is either a finite point
/// list or, on the interval, a closed subinterval.
class InvariantSubsystem {
public:
    /// Checks invariance for n < check_horizon (exact on finite A). Throws
    /// EmptyA or HypothesisViolated.
    static InvariantSubsystem finite(const MapFamily& ambient, std::vector<Point> points,
                                     std::size_t check_horizon = 64);
    /// A = [lo, hi] in an interval space; invariance is sampled.
    static InvariantSubsystem interval(const MapFamily& ambient, double lo, double hi,
                                       std::size_t check_horizon = 64);

    const MapFamily& ambient() const noexcept { return ambient_; }
    bool is_finite() const noexcept { return !arc_; }
    const std::vector<Point>& points() const noexcept { return points_; }
    double distance_to(const Point& x) const;
    /// Nearest point of A; ties go to the earliest listed point.
    Point nearest(const Point& x) const;
    Point first_point() const;

private:
    InvariantSubsystem(MapFamily ambient) : ambient_(std::move(ambient)) {}
    MapFamily ambient_;
    std::vector<Point> points_;
    std::optional<std::pair<double, double>> arc_;
};

struct VisitResult {
    double epsilon = 0.0;
    std::size_t window = 0;
    std::vector<double> fractions;
    double worst_fraction = 1.0;
    bool verdict = false;
};

/// fraction(x) = (1/n) #{0 <= i < n : d(F_i(x), A) < eps}; verdict iff every
/// sample exceeds 1 - eps.
VisitResult visit_condition(const InvariantSubsystem& sub, double eps, std::size_t n,
                            const std::vector<Point>& samples);

struct BlockDecomposition {
    std::size_t horizon = 0;
    IndexSet J_prime;
    std::vector<std::size_t> boundaries;  // m_i
    std::vector<std::size_t> selectors;   // l_i, the dyadic scale used on [m_{i-1}, m_i)
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // maximal runs [a_i, b_i] of the complement
    IndexSet B;                           // block ends b_i
    DensityRatio density_B;
    DensityRatio density_J_prime_B;
};

/// Dyadic covers J_n (blocks of length 2^n meeting J) patched along menus
/// R_i = {l 2^{i+1} - 1} (plus horizon - 1 to close the last block). Throws
/// DensityTooHigh when J has density above 0.1 at the horizon.
BlockDecomposition block_decompose(const IndexSet& J, std::size_t horizon);

struct LiftResult {
    std::vector<Point> y;
    std::vector<double> defects;  // d(f_i(y_i), y_{i+1})
    IndexSet support;             // indices with nonzero defect
    bool support_in_J_prime_B = false;
    double cesaro_defect = 0.0;
};

/// y_i = p on J'; y_{a_i} = nearest point of A to x_{a_i}; exact orbit inside
/// each block.
LiftResult lift_to_A(const InvariantSubsystem& sub, const PseudoOrbit& po,
                     const BlockDecomposition& blocks, const Point& p);

struct AverageOptions {
    std::size_t ladder_levels = 8;   // eps = 2^-1..2^-levels
    std::size_t max_window = 1024;   // n searched per eps
    double tolerance = 0.05;         // final Cesaro error bound
    std::optional<Point> fill_point; // defaults to the first point of A
};

struct AverageShadowResult {
    Point y;
    std::vector<std::size_t> visit_windows;  // n found per ladder rung
    IndexSet J;                              // Q1 union Q2
    BlockDecomposition blocks;
    LiftResult lift;
    std::vector<double> cesaro_errors;       // mean of d(F_i(y), x_i) over i < n, n = 1..K+1
    double cesaro_error = 0.0;
    // term-by-term certificate: error <= shadow_term + lift_term + exceptional_term
    double shadow_term = 0.0;       // mean d(F_i(y), y_i)
    double lift_term = 0.0;         // mean d(y_i, x_i) off J' u B
    double exceptional_term = 0.0;  // diam(X) * density(J' u B)
    double certificate = 0.0;
    bool verdict = false;
};

/// Throws HypothesisViolated when the visit condition fails on the ladder
/// and OracleUnavailable for a continuous A.
AverageShadowResult average_shadow_point(const InvariantSubsystem& sub, const PseudoOrbit& po,
                                         AverageOptions options = {});

}  // namespace nashadow
