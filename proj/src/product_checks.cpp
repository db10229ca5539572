#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "nashadow/errors.hpp"
#include "nashadow/limit_shadow.hpp"
#include "nashadow/product.hpp"
#include "nashadow/shadow_solver.hpp"

namespace nashadow {

std::string_view variant_name(ShadowingVariant v) noexcept {
    switch (v) {
        case ShadowingVariant::Plain: return "plain";
        case ShadowingVariant::H: return "h";
        case ShadowingVariant::SLimit: return "s_limit";
        case ShadowingVariant::Limit: return "limit";
        case ShadowingVariant::Average: return "average";
        case ShadowingVariant::AsymptoticAverage: return "asymptotic_average";
        case ShadowingVariant::Periodic: return "periodic";
        case ShadowingVariant::Lipschitz: return "lipschitz";
    }
    return "unknown";
}

ShadowingVariant variant_from_name(std::string_view name) {
    for (auto v : {ShadowingVariant::Plain, ShadowingVariant::H, ShadowingVariant::SLimit,
                   ShadowingVariant::Limit, ShadowingVariant::Average,
                   ShadowingVariant::AsymptoticAverage, ShadowingVariant::Periodic,
                   ShadowingVariant::Lipschitz})
        if (variant_name(v) == name) return v;
    fail(ErrorCode::ConfigInvalid, "unknown shadowing variant '" + std::string(name) + "'");
}

bool is_remark_level(ShadowingVariant v) noexcept {
    return v != ShadowingVariant::H && v != ShadowingVariant::SLimit;
}

namespace {

// ---------------------------------------------------------------- finite systems

class FiniteModel {
public:
    FiniteModel(const MapFamily& family, std::size_t steps, std::size_t max_states) : family_(family) {
        const StateSpace& X0 = family.space(0);
        n_ = X0.cardinality();
        if (n_ > max_states)
            fail(ErrorCode::BudgetExceeded, family.name() + " has " + std::to_string(n_) + " states");
        grow(steps);
    }

    std::size_t states() const noexcept { return n_; }

    std::size_t next(std::size_t i, std::size_t s) {
        grow(i + 1);
        return next_[i][s];
    }

    double dist(std::size_t i, std::size_t a, std::size_t b) {
        grow(i);
        return (*dist_[i])[a * n_ + b];
    }

    Point point(std::size_t i, std::size_t s) const { return family_.space(i).point_at(s); }

    PseudoOrbit witness(const std::vector<std::size_t>& path) const {
        std::vector<Point> pts;
        for (std::size_t i = 0; i < path.size(); ++i) pts.push_back(point(i, path[i]));
        return make_pseudo_orbit(family_, std::move(pts));
    }

private:
    void grow(std::size_t steps) {
        while (dist_.size() <= steps) {
            const std::size_t i = dist_.size();
            const StateSpace& X = family_.space(i);
            if (!X.is_finite() || X.cardinality() != n_)
                fail(ErrorCode::OracleUnavailable, "finite enumeration needs equal-size finite spaces");
            auto it = cache_.find(&X);
            if (it == cache_.end()) {
                std::vector<double> m(n_ * n_);
                for (std::size_t a = 0; a < n_; ++a)
                    for (std::size_t b = 0; b < n_; ++b) m[a * n_ + b] = X.distance(X.point_at(a), X.point_at(b));
                it = cache_.emplace(&X, std::move(m)).first;
            }
            dist_.push_back(&it->second);
        }
        while (next_.size() < steps) {
            const std::size_t i = next_.size();
            const StepMapPtr f = family_.map(i);
            std::vector<std::size_t> row(n_);
            for (std::size_t s = 0; s < n_; ++s)
                row[s] = family_.space(i + 1).index_of(f->apply(family_.space(i).point_at(s)));
            next_.push_back(std::move(row));
        }
    }

    const MapFamily& family_;
    std::size_t n_ = 0;
    std::vector<std::vector<std::size_t>> next_;
    std::vector<const std::vector<double>*> dist_;
    std::unordered_map<const StateSpace*, std::vector<double>> cache_;
};

using Pair = std::pair<std::size_t, std::size_t>;  // (origin y, current F_i y)

struct Enumerator {
    FiniteModel& model;
    ShadowingVariant variant;
    double eps;
    double delta;
    std::size_t max_length;
    std::size_t max_nodes;
    std::size_t tail_steps;
    std::size_t nodes = 0;
    std::unordered_set<std::string> seen;
    std::vector<std::size_t> path;
    std::string failure;

    // The orbit of c stays eps-close to the orbit of x from time i and
    // eventually coincides with it.
    bool merges(std::size_t i, std::size_t c, std::size_t x, bool need_eps) {
        for (std::size_t t = 0; t <= tail_steps; ++t) {
            if (c == x) return true;
            if (need_eps && !(model.dist(i + t, c, x) < eps)) return false;
            c = model.next(i + t, c);
            x = model.next(i + t, x);
        }
        return false;
    }

    bool prefix_ok(std::size_t i, const std::vector<Pair>& prev, const std::vector<Pair>& cur) {
        const std::size_t xi = path[i];
        switch (variant) {
            case ShadowingVariant::Plain:
            case ShadowingVariant::Lipschitz:
                if (cur.empty()) return failure = "no eps-shadowing point", false;
                return true;
            case ShadowingVariant::H:
                if (i == 0) return true;
                for (const auto& [o, c] : prev)
                    if (model.next(i - 1, c) == xi) return true;
                failure = "no point lands exactly on x_n";
                return false;
            case ShadowingVariant::Periodic:
                if (i == 0 || xi != path[0]) return true;
                for (const auto& [o, c] : cur)
                    if (o == c) return true;
                failure = "no periodic shadowing point";
                return false;
            case ShadowingVariant::SLimit:
                for (const auto& [o, c] : cur)
                    if (merges(i, c, xi, true)) return true;
                failure = "no point both eps-shadows and limit-shadows";
                return false;
            default:
                return true;
        }
    }

    bool dfs(std::size_t i, const std::vector<Pair>& prev, std::vector<Pair> cur) {
        if (++nodes > max_nodes)
            fail(ErrorCode::BudgetExceeded, "enumeration exceeded " + std::to_string(max_nodes) + " nodes");
        if (!prefix_ok(i, prev, cur)) return false;
        if (i == max_length) return true;
        std::string key;
        for (std::size_t v : {i, path[0], path[i]}) key += std::to_string(v) + ",";
        key += "|";
        for (const auto& [o, c] : cur) key += std::to_string(o) + ":" + std::to_string(c) + ",";
        if (!seen.insert(key).second) return true;

        const std::size_t image = model.next(i, path[i]);
        for (std::size_t x = 0; x < model.states(); ++x) {
            if (!(model.dist(i + 1, image, x) < delta)) continue;
            std::vector<Pair> nxt;
            for (const auto& [o, c] : cur) {
                const std::size_t c2 = model.next(i, c);
                if (model.dist(i + 1, c2, x) < eps) nxt.emplace_back(o, c2);
            }
            std::sort(nxt.begin(), nxt.end());
            nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
            path.push_back(x);
            if (!dfs(i + 1, cur, std::move(nxt))) return false;
            path.pop_back();
        }
        return true;
    }

    bool run() {
        for (std::size_t x0 = 0; x0 < model.states(); ++x0) {
            path.assign(1, x0);
            std::vector<Pair> start;
            for (std::size_t y = 0; y < model.states(); ++y)
                if (model.dist(0, y, x0) < eps) start.emplace_back(y, y);
            if (!dfs(0, {}, std::move(start))) return false;
        }
        return true;
    }
};

std::size_t tail_length(std::size_t n) { return 2 * n * n + 64; }

CheckResult finite_limit_check(FiniteModel& model, std::size_t max_length) {
    CheckResult r;
    r.semantics = "exhaustive";
    r.verdict = true;
    const std::size_t n = model.states();
    std::vector<std::size_t> reach(n);
    for (std::size_t y = 0; y < n; ++y) reach[y] = y;
    for (std::size_t c = 0; c <= max_length; ++c) {
        std::vector<std::size_t> images = reach;
        std::sort(images.begin(), images.end());
        images.erase(std::unique(images.begin(), images.end()), images.end());
        for (std::size_t s = 0; s < n; ++s) {
            ++r.cases;
            bool ok = false;
            for (std::size_t cur : images) {
                std::size_t a = cur, b = s;
                for (std::size_t t = 0; t <= tail_length(n) && !ok; ++t) {
                    if (a == b) ok = true;
                    a = model.next(c + t, a);
                    b = model.next(c + t, b);
                }
                if (ok) break;
            }
            if (!ok) {
                r.verdict = false;
                r.detail = "orbit of state " + std::to_string(s) + " from time " + std::to_string(c) +
                           " is never joined by a true orbit";
                return r;
            }
        }
        for (auto& y : reach) y = model.next(c, y);
    }
    return r;
}

// Random jumps at the given times; exact steps elsewhere.
std::vector<std::size_t> jump_orbit(FiniteModel& model, std::size_t x0, std::size_t horizon,
                                    const std::function<bool(std::size_t)>& jump_at, Rng& rng) {
    std::vector<std::size_t> p(horizon + 1);
    p[0] = x0;
    for (std::size_t i = 0; i < horizon; ++i)
        p[i + 1] = jump_at(i) ? rng.below(model.states()) : model.next(i, p[i]);
    return p;
}

CheckResult finite_average_check(FiniteModel& model, const VariantBudget& b, bool asymptotic) {
    CheckResult r;
    r.semantics = "empirical";
    r.verdict = true;
    const std::size_t n = model.states();
    const std::size_t H = b.horizon;
    double diam = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c) diam = std::max(diam, model.dist(0, a, c));
    const std::size_t window = static_cast<std::size_t>(std::ceil(diam / b.delta)) + 1;
    auto jump_at = [&](std::size_t i) {
        if (asymptotic) {
            const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(i))));
            return s * s == i;
        }
        return (i + 1) % window == 0;
    };
    std::vector<std::vector<std::size_t>> orbits(n);
    for (std::size_t y = 0; y < n; ++y) {
        orbits[y].resize(H + 1);
        orbits[y][0] = y;
        for (std::size_t i = 0; i < H; ++i) orbits[y][i + 1] = model.next(i, orbits[y][i]);
    }
    Rng rng(b.seed);
    for (std::size_t t = 0; t < b.trials; ++t) {
        const auto p = jump_orbit(model, rng.below(n), H, jump_at, rng);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t y = 0; y < n; ++y) {
            double sum = 0.0;
            for (std::size_t i = 0; i <= H; ++i) sum += model.dist(i, orbits[y][i], p[i]);
            best = std::min(best, sum / static_cast<double>(H + 1));
        }
        ++r.cases;
        if (!(best < b.eps)) {
            r.verdict = false;
            r.witness = model.witness(p);
            r.detail = "best Cesaro error " + std::to_string(best);
            return r;
        }
    }
    return r;
}

CheckResult finite_check(const MapFamily& family, ShadowingVariant variant, const VariantBudget& b) {
    const std::size_t len = std::min<std::size_t>(b.max_length, 6);
    FiniteModel model(family, len, b.max_states);
    if (variant == ShadowingVariant::Limit) return finite_limit_check(model, len);
    if (variant == ShadowingVariant::Average || variant == ShadowingVariant::AsymptoticAverage)
        return finite_average_check(model, b, variant == ShadowingVariant::AsymptoticAverage);
    if (variant == ShadowingVariant::Periodic && !family.constant_spaces())
        fail(ErrorCode::NonConstantSpaces, "periodic shadowing needs a constant space");
    const double eps = variant == ShadowingVariant::Lipschitz ? b.lipschitz_constant * b.delta : b.eps;
    Enumerator e{model, variant, eps, b.delta, len, b.max_nodes, tail_length(model.states()), 0, {}, {}, {}};
    CheckResult r;
    r.semantics = "exhaustive";
    r.verdict = e.run();
    r.cases = e.nodes;
    if (!r.verdict) {
        r.witness = model.witness(e.path);
        r.detail = e.failure;
    }
    return r;
}

// ---------------------------------------------------------------- continuous systems

Point sample_point(const MapFamily& family, std::size_t t) {
    const StateSpace& X = family.space(0);
    Point x(X.dimension());
    for (std::size_t c = 0; c < x.size(); ++c) x[c] = golden_sample(t * x.size() + c);
    return X.canonical(x);
}

struct Shadowed {
    std::vector<Point> orbit;
    double max_error = 0.0;
    double residual = 0.0;
};

// Backward transport through the closest preimages (isometric families).
Shadowed transport(const MapFamily& family, const PseudoOrbit& po) {
    Shadowed s;
    const std::size_t K = po.horizon();
    s.orbit.resize(K + 1);
    s.orbit[K] = po.points[K];
    for (std::size_t i = K; i-- > 0;) {
        const auto pre = preimages(family, i, s.orbit[i + 1]);
        if (pre.empty()) fail(ErrorCode::PreimageSearchFailed, "no preimage");
        const StateSpace& X = family.space(i);
        s.orbit[i] = X.canonical(*std::min_element(pre.begin(), pre.end(), [&](const Point& a, const Point& c) {
            return X.distance(a, po.points[i]) < X.distance(c, po.points[i]);
        }));
    }
    for (std::size_t i = 0; i <= K; ++i)
        s.max_error = std::max(s.max_error, family.space(i).distance(s.orbit[i], po.points[i]));
    return s;
}

CheckResult continuous_plain(const MapFamily& family, const VariantBudget& b, bool exact_end) {
    CheckResult r;
    r.semantics = family.expanding() ? "solver" : "transport";
    r.verdict = true;
    for (std::size_t t = 0; t < b.trials; ++t) {
        const PseudoOrbit po = perturb_orbit(family, sample_point(family, t), b.horizon, b.delta, b.seed + t);
        ++r.cases;
        bool ok = false;
        try {
            if (family.expanding()) {
                ShadowOptions opt;
                opt.enforce_budget = false;
                const ShadowResult sr = pullback_shadow(family, po, b.eps, opt);
                ok = sr.report.verdict && (!exact_end || sr.report.chain_residual <= 1e-10);
                if (!ok) r.detail = "max error " + std::to_string(sr.report.max_error);
            } else {
                const Shadowed s = transport(family, po);
                ok = s.max_error < b.eps;
                if (!ok) r.detail = "max error " + std::to_string(s.max_error);
            }
        } catch (const ShadowError& e) {
            if (e.code() == ErrorCode::EpsilonTooLarge) throw;
            r.detail = e.what();
        }
        if (!ok) {
            r.verdict = false;
            r.witness = po;
            return r;
        }
    }
    return r;
}

CheckResult continuous_limit(const MapFamily& family, const VariantBudget& b, bool with_eps) {
    CheckResult r;
    r.semantics = family.expanding() ? "solver" : "transport";
    r.verdict = true;
    std::vector<double> defects(b.horizon);
    for (std::size_t i = 0; i < b.horizon; ++i) defects[i] = 0.99 * b.delta / static_cast<double>(i + 1);
    for (std::size_t t = 0; t < std::max<std::size_t>(1, b.trials / 4); ++t) {
        const PseudoOrbit po = inject_defects(family, sample_point(family, t), defects);
        ++r.cases;
        bool ok = false;
        try {
            LimitOptions opt;
            opt.check_equicontinuity = !family.expanding();
            const LimitShadowResult lr = limit_shadow_point(family, po, b.levels, opt);
            const double sup = *std::max_element(lr.errors.begin(), lr.errors.end());
            ok = lr.verdict && (!with_eps || sup < b.eps);
            if (!ok) r.detail = "limit verdict " + std::string(lr.verdict ? "true" : "false") +
                                ", sup error " + std::to_string(sup);
        } catch (const ShadowError& e) {
            if (e.code() == ErrorCode::EpsilonTooLarge) throw;
            r.detail = e.what();
        }
        if (!ok) {
            r.verdict = false;
            r.witness = po;
            return r;
        }
    }
    return r;
}

CheckResult continuous_check(const MapFamily& family, ShadowingVariant variant, const VariantBudget& b) {
    if (!family.expanding() && !family.isometric())
        fail(ErrorCode::OracleUnavailable, family.name() + " is neither expanding nor isometric");
    switch (variant) {
        case ShadowingVariant::Plain: return continuous_plain(family, b, false);
        case ShadowingVariant::H: return continuous_plain(family, b, true);
        case ShadowingVariant::Limit: return continuous_limit(family, b, false);
        case ShadowingVariant::SLimit: {
            CheckResult r = continuous_plain(family, b, false);
            if (!r.verdict) {
                r.detail = "clause (i): " + r.detail;
                return r;
            }
            CheckResult l = continuous_limit(family, b, true);
            l.cases += r.cases;
            if (!l.verdict) l.detail = "clause (ii): " + l.detail;
            return l;
        }
        case ShadowingVariant::Lipschitz: {
            if (!family.expanding())
                fail(ErrorCode::OracleUnavailable, "Lipschitz check needs an expanding family");
            CheckResult r;
            r.semantics = "solver";
            std::vector<LipschitzTrial> trials;
            for (std::size_t t = 0; t < 4; ++t)
                trials.push_back({std::ldexp(b.delta, -static_cast<int>(t)), b.seed + t, b.horizon,
                                  sample_point(family, t)});
            try {
                const LipschitzReport rep = lipschitz_report(family, trials);
                r.verdict = rep.verdict;
                r.cases = trials.size();
                r.detail = "estimate " + std::to_string(rep.estimate) + " <= " + std::to_string(rep.certificate);
            } catch (const ShadowError& e) {
                if (e.code() != ErrorCode::SupRateNotBounded) throw;
                r.verdict = false;
                r.detail = e.what();
            }
            return r;
        }
        default:
            fail(ErrorCode::OracleUnavailable,
                 std::string(variant_name(variant)) + " has no decidable semantics on continuous families");
    }
}

}  // namespace

CheckResult shadowing_check(const MapFamily& family, ShadowingVariant variant, const VariantBudget& budget) {
    CheckResult r;
    const StateSpace& X = family.space(0);
    if (X.is_finite())
        r = finite_check(family, variant, budget);
    else if (X.is_continuous())
        r = continuous_check(family, variant, budget);
    else
        fail(ErrorCode::OracleUnavailable, "mixed finite/continuous systems are not checkable");
    r.remark_level = is_remark_level(variant);
    return r;
}

CheckResult h_shadow_check(const MapFamily& family, double eps, double delta, std::size_t trials) {
    VariantBudget b;
    b.eps = eps;
    b.delta = delta;
    b.trials = trials;
    return shadowing_check(family, ShadowingVariant::H, b);
}

CheckResult s_limit_check(const MapFamily& family, double eps, double delta, std::size_t horizon) {
    VariantBudget b;
    b.eps = eps;
    b.delta = delta;
    b.horizon = horizon;
    return shadowing_check(family, ShadowingVariant::SLimit, b);
}

EquivalenceRecord product_equivalence_check(const MapFamily& F, const MapFamily& G,
                                            ShadowingVariant variant, const VariantBudget& budget) {
    EquivalenceRecord rec;
    rec.variant = variant;
    const MapFamily P = product(F, G);
    rec.factor_F = shadowing_check(F, variant, budget);
    rec.factor_G = shadowing_check(G, variant, budget);
    rec.product = shadowing_check(P, variant, budget);
    rec.consistent = (rec.factor_F.verdict && rec.factor_G.verdict) == rec.product.verdict;
    return rec;
}

nlohmann::json to_json(const CheckResult& r) {
    nlohmann::json j = {{"verdict", r.verdict},
                        {"semantics", r.semantics},
                        {"remark_level", r.remark_level},
                        {"cases", r.cases},
                        {"detail", r.detail}};
    if (r.witness) j["witness"] = {{"points", r.witness->points}, {"defects", r.witness->defects}};
    return j;
}

nlohmann::json to_json(const EquivalenceRecord& r) {
    return {{"variant", variant_name(r.variant)},
            {"factor_F", to_json(r.factor_F)},
            {"factor_G", to_json(r.factor_G)},
            {"product", to_json(r.product)},
            {"consistent", r.consistent}};
}

}  // namespace nashadow
