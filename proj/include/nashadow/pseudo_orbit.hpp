#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "nashadow/family.hpp"

namespace nashadow {

/// x_0..x_K with cached defects e_i = d(f_i(x_i), x_{i+1}).
struct PseudoOrbit {
    std::size_t start_index = 0;
    std::vector<Point> points;
    std::vector<double> defects;

    std::size_t horizon() const noexcept { return points.empty() ? 0 : points.size() - 1; }
    double max_defect() const noexcept;
};

/// Wraps points and computes their defects.
PseudoOrbit make_pseudo_orbit(const MapFamily& family, std::vector<Point> points);

/// Recomputes every defect; true iff all cached values agree within `tol`
/// and every point lies in its scheduled space.
bool defects_consistent(const MapFamily& family, const PseudoOrbit& po, double tol = 1e-12);

struct DefectProfile {
    double max_defect = 0.0;
    std::vector<double> cesaro_means;  // [n-1] = (1/n) sum_{i<n} e_i, n = 1..K
    std::vector<double> tail_sup;      // [n] = max_{i>=n} e_i, n = 0..K-1
};

DefectProfile defect_profile(std::span<const double> defects);

/// Noise source shared by every sampler. mt19937_64 output is fixed by the
/// standard, and reals are derived from it by bit manipulation, so results
/// do not depend on the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    double uniform();                      // [0,1)
    std::size_t below(std::size_t n);      // [0,n)
    bool coin();

private:
    std::uint64_t next();
    std::uint64_t state_[4];
};

/// x_0 = x0 and x_{i+1} = f_i(x_i) moved by a random offset of size < noise.
PseudoOrbit perturb_orbit(const MapFamily& family, const Point& x0, std::size_t horizon,
                          double noise, std::uint64_t seed);

enum class SignSchedule { Alternating, Positive, Random };

/// x_{i+1} = f_i(x_i) moved by exactly defects[i]. Continuous coordinates are
/// shifted with the sign schedule; finite coordinates jump to a state at
/// exactly that distance, preferring one whose next image agrees with that
/// of f_i(x_i), then the lowest index.
PseudoOrbit inject_defects(const MapFamily& family, const Point& x0, std::span<const double> defects,
                           SignSchedule signs = SignSchedule::Alternating,
                           std::uint64_t seed = 0);

struct Classification {
    bool is_delta_pseudo = false;
    bool is_limit_pseudo = false;
    bool is_asymptotic_average = false;
    double max_defect = 0.0;
    double tail_statistic = 0.0;  // sup of defects over the last quarter
    double final_cesaro = 0.0;
    std::size_t horizon = 0;
    // Finite-horizon surrogates for limit statements.
    static constexpr const char* note =
        "limit and average verdicts are finite-horizon approximations";
};

/// `horizon` defaults to the full length.
Classification classify(const PseudoOrbit& po, double delta, double tol,
                        std::optional<std::size_t> horizon = std::nullopt);

/// Repeats x_0..x_{period-1} up to `horizon` (default: the input's horizon).
PseudoOrbit periodicize(const MapFamily& family, const PseudoOrbit& po, std::size_t period,
                        std::optional<std::size_t> horizon = std::nullopt);

/// index, coordinates..., defect (empty on the last row).
void write_csv(std::ostream& out, const PseudoOrbit& po);

}  // namespace nashadow
