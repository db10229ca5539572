#include "nashadow/density.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "nashadow/errors.hpp"

namespace nashadow {

IndexSet::IndexSet(std::size_t h, std::vector<std::size_t> m) : horizon(h), members(std::move(m)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() && members.back() >= horizon)
        fail(ErrorCode::InvalidArgument, "index " + std::to_string(members.back()) +
                                             " outside horizon " + std::to_string(horizon));
}

IndexSet IndexSet::all(std::size_t h) {
    IndexSet s;
    s.horizon = h;
    s.members.resize(h);
    for (std::size_t i = 0; i < h; ++i) s.members[i] = i;
    return s;
}

IndexSet IndexSet::where(std::size_t h, const std::function<bool(std::size_t)>& pred) {
    IndexSet s;
    s.horizon = h;
    for (std::size_t i = 0; i < h; ++i)
        if (pred(i)) s.members.push_back(i);
    return s;
}

bool IndexSet::contains(std::size_t n) const {
    return std::binary_search(members.begin(), members.end(), n);
}

std::size_t IndexSet::count_below(std::size_t at) const {
    return static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), at) -
                                    members.begin());
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    IndexSet s;
    s.horizon = std::max(a.horizon, b.horizon);
    std::set_union(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                   std::back_inserter(s.members));
    return s;
}

void to_json(nlohmann::json& j, const IndexSet& s) {
    j = nlohmann::json{{"horizon", s.horizon}, {"members", s.members}};
}

DensityRatio upper_density(const IndexSet& J, std::size_t at) {
    if (at == 0) fail(ErrorCode::ZeroHorizon, "density at 0 is undefined");
    if (at > J.horizon)
        fail(ErrorCode::InvalidArgument, "density requested beyond the set's horizon");
    return {J.count_below(at), at};
}

std::vector<double> dyadic_levels(std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) v[k] = std::ldexp(1.0, -static_cast<int>(k + 1));
    return v;
}

CesaroSplit cesaro_to_density_zero(std::span<const double> a, std::size_t horizon,
                                   std::vector<double> levels) {
    if (horizon == 0) fail(ErrorCode::ZeroHorizon, "empty sequence");
    if (a.size() < horizon) fail(ErrorCode::InvalidArgument, "sequence shorter than horizon");
    if (levels.empty()) fail(ErrorCode::InvalidArgument, "no levels");
    for (std::size_t k = 1; k < levels.size(); ++k)
        if (!(levels[k] < levels[k - 1]) || !(levels[k] > 0.0))
            fail(ErrorCode::InvalidArgument, "levels must be positive and decreasing");

    double sum = 0.0;
    for (std::size_t n = 0; n < horizon; ++n) {
        if (!(a[n] >= 0.0)) fail(ErrorCode::InvalidArgument, "sequence must be nonnegative");
        sum += a[n];
    }
    const double mean = sum / static_cast<double>(horizon);
    if (mean > levels[0])
        fail(ErrorCode::NotCesaroNull, "Cesaro mean " + std::to_string(mean) +
                                           " at horizon exceeds first level " +
                                           std::to_string(levels[0]));

    CesaroSplit out;
    out.levels = levels;
    out.cuts.push_back(0);
    // greedy cuts for k >= 1
    std::vector<std::size_t> prefix(horizon + 1);
    for (std::size_t k = 1; k < levels.size(); ++k) {
        const double level = levels[k];
        prefix[0] = 0;
        for (std::size_t n = 0; n < horizon; ++n) prefix[n + 1] = prefix[n] + (a[n] > level ? 1 : 0);
        // least N such that every m in [N, horizon] (m >= 1) is good
        auto good = [&](std::size_t m) {
            return static_cast<double>(prefix[m]) <= level * static_cast<double>(m);
        };
        if (!good(horizon)) break;
        std::size_t N = horizon;
        while (N > 1 && good(N - 1)) --N;
        if (N == 1 && good(1)) N = 0;  // m = 0 imposes nothing
        N = std::max(N, out.cuts.back());
        out.cuts.push_back(N);
    }
    out.levels.resize(out.cuts.size());

    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < out.cuts.size(); ++k) {
        const std::size_t lo = out.cuts[k];
        const std::size_t hi = k + 1 < out.cuts.size() ? out.cuts[k + 1] : horizon;
        for (std::size_t n = lo; n < hi; ++n)
            if (a[n] > out.levels[k]) members.push_back(n);
        out.density_bound += out.levels[k] * static_cast<double>(hi) / static_cast<double>(horizon);
    }
    out.J = IndexSet(horizon, std::move(members));
    out.density = upper_density(out.J, horizon);
    for (std::size_t n = 0; n < horizon; ++n)
        if (!out.J.contains(n)) out.complement_sup = std::max(out.complement_sup, a[n]);
    return out;
}

CesaroCertificate density_zero_to_cesaro(std::span<const double> a, const IndexSet& J, double M,
                                         std::size_t N) {
    const std::size_t horizon = J.horizon;
    if (horizon == 0) fail(ErrorCode::ZeroHorizon, "empty index set horizon");
    if (a.size() < horizon) fail(ErrorCode::InvalidArgument, "sequence shorter than horizon");
    CesaroCertificate c;
    for (std::size_t n = 0; n < horizon; ++n) {
        if (a[n] > M)
            fail(ErrorCode::BoundViolated,
                 "a_" + std::to_string(n) + " = " + std::to_string(a[n]) + " exceeds M");
        if (n >= N && !J.contains(n)) c.tail_term = std::max(c.tail_term, a[n]);
    }
    c.actual_means.resize(horizon);
    c.bound_by_n.resize(horizon);
    double sum = 0.0;
    std::size_t in_J = 0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        sum += a[n - 1];
        if (J.contains(n - 1)) ++in_J;
        const double dn = static_cast<double>(n);
        c.actual_means[n - 1] = sum / dn;
        c.bound_by_n[n - 1] =
            M * static_cast<double>(in_J) / dn + c.tail_term + M * static_cast<double>(std::min(N, n)) / dn;
        if (c.actual_means[n - 1] > c.bound_by_n[n - 1] + 1e-12)
            fail(ErrorCode::BoundViolated, "Cesaro mean exceeds its certificate at n = " +
                                               std::to_string(n));
    }
    c.actual = c.actual_means.back();
    c.bound = c.bound_by_n.back();
    c.density_term = M * upper_density(J, horizon).value();
    c.head_term = M * static_cast<double>(std::min(N, horizon)) / static_cast<double>(horizon);
    return c;
}

PatchResult patch_sets(const std::vector<IndexSet>& J_seq, const std::vector<IndexSet>& R_seq,
                       std::size_t horizon, PatchOptions options) {
    if (horizon == 0) fail(ErrorCode::ZeroHorizon, "empty horizon");
    if (J_seq.empty()) fail(ErrorCode::InvalidArgument, "no sets to patch");
    for (const auto& J : J_seq)
        if (J.horizon < horizon) fail(ErrorCode::InvalidArgument, "set shorter than horizon");

    std::vector<double> dens(J_seq.size());
    for (std::size_t j = 0; j < J_seq.size(); ++j) dens[j] = upper_density(J_seq[j], horizon).value();

    PatchResult out;
    out.boundaries.push_back(0);
    std::vector<std::size_t> members;
    std::size_t prev_sel = 0;
    for (std::size_t i = 1;; ++i) {
        std::size_t sel = prev_sel;
        const std::size_t top = std::min(i, J_seq.size() - 1);
        if (options.assume_density_zero) {
            sel = top;
        } else {
            const double target = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(i, 60)));
            for (std::size_t j = top + 1; j-- > prev_sel;)
                if (dens[j] <= target) {
                    sel = j;
                    break;
                }
        }
        const std::size_t m_prev = out.boundaries.back();
        const std::size_t step = i < 63 ? (std::size_t{1} << i) : horizon;
        const std::size_t lower = std::max(m_prev + step, step * members.size());
        std::size_t m_next = horizon;
        const bool last = lower >= horizon || step >= horizon;
        if (!last) {
            if (i > R_seq.size())
                fail(ErrorCode::MenuExhausted, "menus ran out at block " + std::to_string(i));
            const auto& R = R_seq[i - 1].members;
            auto it = std::lower_bound(R.begin(), R.end(), std::max(lower, m_prev + 1));
            if (it == R.end() || *it >= horizon)
                fail(ErrorCode::MenuExhausted, "no admissible m_" + std::to_string(i) +
                                                   " at or above " + std::to_string(lower));
            m_next = *it;
        }
        const auto& src = J_seq[sel].members;
        for (auto it = std::lower_bound(src.begin(), src.end(), m_prev);
             it != src.end() && *it < m_next; ++it)
            members.push_back(*it);
        out.selectors.push_back(sel);
        prev_sel = sel;
        if (last) break;
        out.boundaries.push_back(m_next);
    }
    out.J = IndexSet(horizon, std::move(members));
    out.density = upper_density(out.J, horizon);
    return out;
}

}  // namespace nashadow
