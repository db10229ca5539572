#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace nashadow {

/// A subset of {0, ..., horizon-1}, stored sorted and without duplicates.
struct IndexSet {
    std::size_t horizon = 0;
    std::vector<std::size_t> members;

    IndexSet() = default;
    /// Sorts and deduplicates; throws InvalidArgument for members >= horizon.
    IndexSet(std::size_t horizon, std::vector<std::size_t> members);

    static IndexSet empty(std::size_t horizon) { return IndexSet(horizon, {}); }
    static IndexSet all(std::size_t horizon);
    static IndexSet where(std::size_t horizon, const std::function<bool(std::size_t)>& pred);

    bool contains(std::size_t n) const;
    /// #(J cap [0, at)).
    std::size_t count_below(std::size_t at) const;
    std::size_t size() const noexcept { return members.size(); }
    bool operator==(const IndexSet&) const = default;
};

IndexSet set_union(const IndexSet& a, const IndexSet& b);

void to_json(nlohmann::json& j, const IndexSet& s);

/// #(J cap [0, at)) / at as an exact ratio.
struct DensityRatio {
    std::size_t count = 0;
    std::size_t at = 1;
    double value() const noexcept { return static_cast<double>(count) / static_cast<double>(at); }
};

/// Throws ZeroHorizon when at == 0, InvalidArgument when at > horizon.
DensityRatio upper_density(const IndexSet& J, std::size_t at);

/// 2^-1, 2^-2, ..., 2^-count.
std::vector<double> dyadic_levels(std::size_t count);

struct CesaroSplit {
    IndexSet J;
    std::vector<double> levels;
    /// cuts[k] = N_k; cuts[0] = 0. Levels whose cut does not fit below the
    /// horizon are dropped, so cuts.size() <= levels.size().
    std::vector<std::size_t> cuts;
    DensityRatio density;
    /// sum_k level_k * N_{k+1} / horizon, an upper bound for density.
    double density_bound = 0.0;
    /// max a_n over n not in J; at most levels[0].
    double complement_sup = 0.0;
};

/// Splits off a set J so that a_n <= level_k for n not in J with n >= N_k.
/// E_k = {n : a_n > level_k}; N_k is the least N >= N_{k-1} for which
/// #(E_k cap [0,m)) <= level_k * m for every m in [N, horizon], and
/// J = union of E_k cap [N_k, N_{k+1}).
/// Throws NotCesaroNull if the Cesaro mean at the horizon exceeds levels[0].
CesaroSplit cesaro_to_density_zero(std::span<const double> a, std::size_t horizon,
                                   std::vector<double> levels = dyadic_levels(30));

struct CesaroCertificate {
    double bound = 0.0;            // M * dens(J) + s(N) + M * N / horizon
    double actual = 0.0;           // (1/horizon) sum a_n
    double density_term = 0.0;
    double tail_term = 0.0;        // s(N) = sup a_n over n >= N, n not in J
    double head_term = 0.0;
    std::vector<double> actual_means;     // c_n for n = 1..horizon
    std::vector<double> bound_by_n;       // certificate at each n
};

/// Certificate on Cesaro means from a density-zero exceptional set.
/// Throws BoundViolated if some a_n > M.
CesaroCertificate density_zero_to_cesaro(std::span<const double> a, const IndexSet& J, double M,
                                         std::size_t N = 0);

struct PatchOptions {
    /// Treat every J_i as density zero and select l_i = i.
    bool assume_density_zero = false;
};

struct PatchResult {
    IndexSet J;
    std::vector<std::size_t> boundaries;  // m_0 = 0 < m_1 < ... ; the last block ends at horizon
    std::vector<std::size_t> selectors;   // l_i for block [m_{i-1}, m_i), i >= 1
    DensityRatio density;
};

/// Glues J_{l_i} on [m_{i-1}, m_i). m_i is the least element of R_i with
/// m_i >= m_{i-1} + 2^i and m_i >= 2^i * #(J cap [0, m_{i-1})); the process
/// stops once that lower bound reaches the horizon. Throws MenuExhausted if a
/// menu has no admissible element below the horizon or the menus run out.
PatchResult patch_sets(const std::vector<IndexSet>& J_seq, const std::vector<IndexSet>& R_seq,
                       std::size_t horizon, PatchOptions options = {});

}  // namespace nashadow
