#include "nashadow/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nashadow/average_shadow.hpp"
#include "nashadow/density.hpp"
#include "nashadow/errors.hpp"
#include "nashadow/family.hpp"
#include "nashadow/limit_shadow.hpp"
#include "nashadow/product.hpp"
#include "nashadow/pseudo_orbit.hpp"
#include "nashadow/shadow_solver.hpp"

namespace nashadow {

namespace {

using json = nlohmann::json;

// Typed access to a params object with field paths in errors.
class Params {
public:
    Params(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(ErrorCode::ConfigInvalid, path_ + ": expected an object");
    }

    bool has(const std::string& k) const { return j_.contains(k); }

    double num(const std::string& k) const {
        const json& v = at(k);
        if (!v.is_number()) bad(k, "a number");
        return v.get<double>();
    }
    double num(const std::string& k, double def) const { return has(k) ? num(k) : def; }

    std::size_t count(const std::string& k) const {
        const json& v = at(k);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            bad(k, "a nonnegative integer");
        return v.get<std::size_t>();
    }
    std::size_t count(const std::string& k, std::size_t def) const { return has(k) ? count(k) : def; }

    std::string str(const std::string& k, const std::string& def) const {
        if (!has(k)) return def;
        const json& v = at(k);
        if (!v.is_string()) bad(k, "a string");
        return v.get<std::string>();
    }

    bool flag(const std::string& k, bool def) const {
        if (!has(k)) return def;
        const json& v = at(k);
        if (!v.is_boolean()) bad(k, "a boolean");
        return v.get<bool>();
    }

    std::vector<double> nums(const std::string& k) const {
        const json& v = at(k);
        if (!v.is_array()) bad(k, "an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) bad(k, "an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    Point point(const std::string& k) const {
        const json& v = at(k);
        if (v.is_number()) return {v.get<double>()};
        return nums(k);
    }

    Params sub(const std::string& k) const { return Params(at(k), path_ + "." + k); }
    const json& raw(const std::string& k) const { return at(k); }
    const std::string& path() const { return path_; }

    [[noreturn]] void bad(const std::string& k, const std::string& what) const {
        fail(ErrorCode::ConfigInvalid, path_ + "." + k + ": expected " + what);
    }

private:
    const json& at(const std::string& k) const {
        if (!j_.contains(k)) fail(ErrorCode::ConfigInvalid, path_ + "." + k + ": missing");
        return j_.at(k);
    }
    const json& j_;
    std::string path_;
};

struct Ctx {
    const Scenario& s;
    const Overrides& o;
    Params p;
    ScenarioOutcome& out;

    std::size_t horizon(std::size_t def) const { return o.horizon.value_or(p.count("horizon", def)); }
    std::uint64_t seed() const { return o.seed.value_or(p.count("seed", 0)); }
};

Point default_x0(const MapFamily& F, std::size_t t) {
    const StateSpace& X = F.space(0);
    if (X.is_finite()) return X.point_at(0);
    Point x(X.dimension());
    for (std::size_t c = 0; c < x.size(); ++c) x[c] = golden_sample(t * x.size() + c);
    return X.canonical(x);
}

Point x0_param(const Ctx& c, const MapFamily& F, std::size_t t) {
    if (!c.p.has("x0")) return default_x0(F, t);
    if (F.space(0).is_finite()) return F.space(0).point_at(c.p.count("x0"));
    return c.p.point("x0");
}

SignSchedule sign_param(const Params& p) {
    const std::string s = p.str("signs", "alternating");
    if (s == "alternating") return SignSchedule::Alternating;
    if (s == "positive") return SignSchedule::Positive;
    if (s == "random") return SignSchedule::Random;
    p.bad("signs", "alternating, positive or random");
}

bool is_square(std::size_t i) {
    const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(i))));
    return r * r == i;
}

// Defect or test sequence from a {"kind": ...} object.
std::vector<double> sequence_param(const Params& p, std::size_t horizon) {
    const std::string kind = p.str("kind", "");
    std::vector<double> a(horizon, 0.0);
    if (kind == "zero") return a;
    if (kind == "harmonic") {
        const double scale = p.num("scale", 1.0);
        for (std::size_t i = 0; i < horizon; ++i) a[i] = scale / static_cast<double>(i + 1);
        return a;
    }
    if (kind == "squares") {
        const double v = p.num("value", 1.0);
        for (std::size_t i = 0; i < horizon; ++i) a[i] = is_square(i) ? v : 0.0;
        return a;
    }
    if (kind == "evens") {
        const double v = p.num("value", 1.0);
        for (std::size_t i = 0; i < horizon; ++i) a[i] = i % 2 == 0 ? v : 0.0;
        return a;
    }
    if (kind == "list") {
        const auto v = p.nums("values");
        for (std::size_t i = 0; i < horizon && i < v.size(); ++i) a[i] = v[i];
        return a;
    }
    fail(ErrorCode::ConfigInvalid, p.path() + ".kind: expected zero, harmonic, squares, evens or list");
}

// Defects are clipped to the diameter of the space they land in.
std::vector<double> defect_param(const Params& p, const MapFamily& F, std::size_t horizon) {
    std::vector<double> e = sequence_param(p, horizon);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::min(e[i], F.space(i + 1).diameter());
    return e;
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

// ---------------------------------------------------------------- experiments

bool run_shadow(Ctx& c) {
    const MapFamily F = family_from_json(c.s.family);
    const double eps = c.p.num("epsilon");
    const double margin = c.p.num("margin", 0.98);
    const std::size_t horizon = c.horizon(64);
    const std::size_t trials = c.p.count("trials", 1);
    const auto schedule = delta_budget(F, horizon, eps, margin);
    const double noise = c.p.num(
        "noise", schedule.empty() ? margin * eps : *std::min_element(schedule.begin(), schedule.end()));
    json runs = json::array();
    bool verdict = true;
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const PseudoOrbit po = perturb_orbit(F, x0_param(c, F, t), horizon, noise, c.seed() + t);
        const ShadowResult r = pullback_shadow(F, po, eps);
        verdict = verdict && r.report.verdict;
        worst = std::max(worst, r.report.max_error);
        runs.push_back({{"seed", c.seed() + t},
                        {"max_error", r.report.max_error},
                        {"cell_diameter", r.report.cell_diameter},
                        {"shadow_point", r.report.shadow_point},
                        {"verdict", r.report.verdict}});
        if (t == 0) {
            CsvSeries s{"errors", {"n", "error", "pseudo_orbit", "shadow_orbit"}, {}};
            for (std::size_t n = 0; n <= horizon; ++n)
                s.rows.push_back({static_cast<double>(n), r.report.per_step_errors[n], po.points[n][0],
                                  r.chain.orbit[n][0]});
            c.out.series.push_back(std::move(s));
            CsvSeries pts{"pseudo_orbit", {"index"}, {}};
            for (std::size_t k = 0; k < po.points[0].size(); ++k) pts.columns.push_back("x" + std::to_string(k));
            pts.columns.push_back("defect");
            for (std::size_t n = 0; n <= horizon; ++n) {
                std::vector<double> row{static_cast<double>(po.start_index + n)};
                row.insert(row.end(), po.points[n].begin(), po.points[n].end());
                row.push_back(n < po.defects.size() ? po.defects[n] : 0.0);
                pts.rows.push_back(std::move(row));
            }
            c.out.series.push_back(std::move(pts));
        }
    }
    c.out.report["results"] = {{"epsilon", eps},
                               {"delta", noise},
                               {"margin", margin},
                               {"horizon", horizon},
                               {"diameter_bound", diameter_bound(F, horizon, eps)},
                               {"max_error", worst},
                               {"runs", runs}};
    c.out.key_certificate = "max_error=" + fmt(worst);
    return verdict;
}

bool run_periodic(Ctx& c) {
    const MapFamily F = family_from_json(c.s.family);
    const double eps = c.p.num("epsilon");
    const double delta = c.p.num("delta");
    const json& cyc = c.p.raw("cycle");
    if (!cyc.is_array() || cyc.empty()) c.p.bad("cycle", "a nonempty array of points");
    const std::size_t period = cyc.size();
    const std::size_t horizon = c.horizon(4 * period);
    double lam = 1.0;
    for (std::size_t j = 0; j < period; ++j) {
        const auto r = F.rate(j);
        if (!r) fail(ErrorCode::NotExpanding, F.name() + " is not expanding");
        lam = std::min(lam, *r);
    }
    Rng rng(c.seed());
    const double amp = delta / (1.0 + 1.0 / lam);
    std::vector<Point> pts;
    for (const auto& e : cyc) {
        Point q = e.is_number() ? Point{e.get<double>()} : e.get<Point>();
        for (std::size_t k = 0; k < q.size(); ++k)
            q = F.space(0).shift(q, k, (2.0 * rng.uniform() - 1.0) * amp);
        pts.push_back(q);
    }
    pts.push_back(pts.front());
    const PseudoOrbit po = periodicize(F, make_pseudo_orbit(F, pts), period, horizon);
    const PeriodicShadowResult r = periodic_shadow(F, po, period, eps);
    const Point anchor = cyc[0].is_number() ? Point{cyc[0].get<double>()} : cyc[0].get<Point>();
    const double to_anchor = F.space(0).distance(r.point, anchor);
    c.out.report["results"] = {{"epsilon", eps},
                               {"delta", delta},
                               {"max_defect", po.max_defect()},
                               {"period", period},
                               {"point", r.point},
                               {"fixed_point_residual", r.fixed_point_residual},
                               {"iterations", r.iterations},
                               {"distance_to_cycle_point", to_anchor},
                               {"max_error", r.max_error}};
    c.out.key_certificate = "residual=" + fmt(r.fixed_point_residual);
    return r.verdict && to_anchor < eps && po.max_defect() < delta;
}

bool run_limit(Ctx& c) {
    const MapFamily F = family_from_json(c.s.family);
    const std::size_t horizon = c.horizon(1000);
    const std::size_t levels = c.p.count("levels", 8);
    const auto defects = defect_param(c.p.sub("defects"), F, horizon);
    const PseudoOrbit po = inject_defects(F, x0_param(c, F, 0), defects, sign_param(c.p), c.seed());
    LimitOptions opt;
    opt.check_equicontinuity = c.p.flag("check_equicontinuity", true);
    const std::string oracle = c.p.str("oracle", "auto");
    if (oracle == "exhaustive") opt.oracle = ShadowOracle::Exhaustive;
    else if (oracle == "transport") opt.oracle = ShadowOracle::Transport;
    else if (oracle == "solver") opt.oracle = ShadowOracle::Solver;
    else if (oracle != "auto") c.p.bad("oracle", "auto, exhaustive, transport or solver");
    const LimitShadowResult r = limit_shadow_point(F, po, levels, opt);
    json table = json::array();
    CsvSeries s{"convergence", {"level", "cut", "delta", "level_error", "window_error", "step"}, {}};
    for (const auto& row : r.table) {
        table.push_back({{"level", row.level},
                         {"cut", row.cut},
                         {"delta", row.delta},
                         {"level_error", row.level_error},
                         {"window_error", row.window_error},
                         {"step", row.step}});
        s.rows.push_back({static_cast<double>(row.level), static_cast<double>(row.cut), row.delta,
                          row.level_error, row.window_error, row.step});
    }
    c.out.series.push_back(std::move(s));
    c.out.report["results"] = {{"horizon", horizon},
                               {"levels", levels},
                               {"y", r.y},
                               {"monotone", r.monotone},
                               {"final_window_error", r.table.back().window_error},
                               {"table", table}};
    c.out.key_certificate = "final_window=" + fmt(r.table.back().window_error);
    return r.verdict;
}

bool run_average(Ctx& c) {
    const MapFamily F = family_from_json(c.s.family);
    const std::size_t horizon = c.horizon(10000);
    const json& A = c.p.raw("A");
    if (!A.is_array()) c.p.bad("A", "an array of states or points");
    std::vector<Point> pts;
    for (const auto& a : A)
        pts.push_back(F.space(0).is_finite() ? F.space(0).point_at(a.get<std::size_t>())
                                             : (a.is_number() ? Point{a.get<double>()} : a.get<Point>()));
    const InvariantSubsystem sub = InvariantSubsystem::finite(F, pts);
    const auto defects = defect_param(c.p.sub("defects"), F, horizon);
    const PseudoOrbit po = inject_defects(F, x0_param(c, F, 0), defects, sign_param(c.p), c.seed());
    AverageOptions opt;
    opt.tolerance = c.p.num("tolerance", 0.05);
    const AverageShadowResult r = average_shadow_point(sub, po, opt);
    CsvSeries s{"cesaro", {"n", "cesaro_error"}, {}};
    for (std::size_t n = 0; n < r.cesaro_errors.size(); ++n)
        s.rows.push_back({static_cast<double>(n + 1), r.cesaro_errors[n]});
    c.out.series.push_back(std::move(s));
    c.out.report["results"] = {{"horizon", horizon},
                               {"y", r.y},
                               {"cesaro_error", r.cesaro_error},
                               {"shadow_term", r.shadow_term},
                               {"lift_term", r.lift_term},
                               {"exceptional_term", r.exceptional_term},
                               {"certificate", r.certificate},
                               {"exceptional_density", r.J.size() / static_cast<double>(po.points.size())},
                               {"density_J_prime_B", r.blocks.density_J_prime_B.value()},
                               {"blocks", r.blocks.blocks.size()},
                               {"support_in_J_prime_B", r.lift.support_in_J_prime_B},
                               {"visit_windows", r.visit_windows}};
    c.out.key_certificate = "cesaro=" + fmt(r.cesaro_error);
    return r.verdict && r.lift.support_in_J_prime_B;
}

bool run_density(Ctx& c) {
    const std::size_t horizon = c.horizon(10000);
    const Params seq = c.p.sub("sequence");
    const auto a = sequence_param(seq, horizon);
    const CesaroSplit split = cesaro_to_density_zero(a, horizon);
    const double M = std::max(max_of(a), 1e-300);
    const CesaroCertificate cert = density_zero_to_cesaro(a, split.J, M, c.p.count("N", 0));
    const auto a2 = sequence_param(seq, 2 * horizon);
    const CesaroSplit split2 = cesaro_to_density_zero(a2, 2 * horizon);
    const double d1 = split.density.value(), d2 = split2.density.value();
    c.out.report["results"] = {{"horizon", horizon},
                               {"J_size", split.J.size()},
                               {"J_density", d1},
                               {"J_density_doubled", d2},
                               {"doubling_ratio", d1 > 0 ? d2 / d1 : 0.0},
                               {"density_bound", split.density_bound},
                               {"cuts", split.cuts},
                               {"complement_sup", split.complement_sup},
                               {"cesaro_actual", cert.actual},
                               {"cesaro_certificate", cert.bound}};
    c.out.key_certificate = "density=" + fmt(d1);
    return cert.actual <= cert.bound + 1e-12 && d1 <= split.density_bound + 1e-12;
}

bool run_product(Ctx& c) {
    const json& fam = c.s.family;
    if (!fam.is_object() || !fam.contains("first") || !fam.contains("second"))
        fail(ErrorCode::ConfigInvalid, "family: product experiments need first and second");
    const MapFamily F = family_from_json(fam.at("first"));
    const MapFamily G = family_from_json(fam.at("second"));
    const ShadowingVariant v = variant_from_name(c.p.str("variant", "h"));
    VariantBudget b;
    b.eps = c.p.num("epsilon", b.eps);
    b.delta = c.p.num("delta", b.delta);
    b.max_length = c.p.count("max_length", b.max_length);
    b.trials = c.p.count("trials", b.trials);
    b.horizon = c.horizon(b.horizon);
    b.levels = c.p.count("levels", b.levels);
    b.seed = c.seed();
    const EquivalenceRecord rec = product_equivalence_check(F, G, v, b);
    c.out.report["results"] = to_json(rec);
    c.out.key_certificate = std::string("F=") + (rec.factor_F.verdict ? "1" : "0") +
                            " G=" + (rec.factor_G.verdict ? "1" : "0") +
                            " FxG=" + (rec.product.verdict ? "1" : "0");
    return rec.consistent;
}

bool run_uniqueness(Ctx& c) {
    const MapFamily F = family_from_json(c.s.family);
    const double eps = c.p.num("epsilon");
    const std::size_t kmax = c.horizon(30);
    const double tol = c.p.num("tolerance", 1e-12);
    const PseudoOrbit po = perturb_orbit(F, x0_param(c, F, 0), kmax, 0.0, 0);
    json rows = json::array();
    bool ok = true;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double cert = uniqueness_certificate(F, po, eps, k);
        const double bound = diameter_bound(F, k, eps);
        ok = ok && std::fabs(cert - bound) <= tol;
        smallest = std::min(smallest, cert);
        rows.push_back({{"k", k}, {"certificate", cert}, {"bound", bound}});
    }
    c.out.report["results"] = {{"epsilon", eps}, {"rows", rows}, {"smallest", smallest}};
    c.out.key_certificate = "cert_kmax=" + fmt(rows.back()["certificate"].get<double>());
    return ok;
}

bool run_lipschitz(Ctx& c) {
    const MapFamily F = family_from_json(c.s.family);
    std::vector<LipschitzTrial> trials;
    const std::size_t horizon = c.horizon(64);
    const auto deltas = c.p.nums("deltas");
    for (std::size_t t = 0; t < deltas.size(); ++t)
        trials.push_back({deltas[t], c.seed() + t, horizon, default_x0(F, t)});
    const LipschitzReport r = lipschitz_report(F, trials);
    c.out.report["results"] = {{"sup_rate", r.sup_rate},
                               {"certificate", r.certificate},
                               {"deltas", r.deltas},
                               {"ratios", r.ratios},
                               {"estimate", r.estimate}};
    c.out.key_certificate = "L_est=" + fmt(r.estimate);
    return r.verdict;
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_atomic(const std::filesystem::path& file, const std::string& content) {
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) fail(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
        os << content;
    }
    std::filesystem::rename(tmp, file);
}

}  // namespace

// ---------------------------------------------------------------- public

Scenario parse_scenario(const json& j) {
    if (!j.is_object()) fail(ErrorCode::ConfigInvalid, "scenario: expected an object");
    Scenario s;
    s.raw = j;
    auto need_string = [&](const char* k) {
        if (!j.contains(k) || !j.at(k).is_string())
            fail(ErrorCode::ConfigInvalid, std::string("scenario.") + k + ": expected a string");
        return j.at(k).get<std::string>();
    };
    s.name = need_string("name");
    s.experiment = need_string("experiment");
    static const std::vector<std::string> kinds = {"shadow", "periodic", "limit", "average",
                                                   "density", "product", "uniqueness", "lipschitz"};
    if (std::find(kinds.begin(), kinds.end(), s.experiment) == kinds.end())
        fail(ErrorCode::ConfigInvalid, "scenario.experiment: unknown kind '" + s.experiment + "'");
    if (s.experiment != "density") {
        if (!j.contains("family")) fail(ErrorCode::ConfigInvalid, "scenario.family: missing");
        s.family = j.at("family");
    }
    s.params = j.value("params", json::object());
    if (!s.params.is_object()) fail(ErrorCode::ConfigInvalid, "scenario.params: expected an object");
    if (j.contains("expect_fail")) {
        if (!j.at("expect_fail").is_boolean())
            fail(ErrorCode::ConfigInvalid, "scenario.expect_fail: expected a boolean");
        s.expect_fail = j.at("expect_fail").get<bool>();
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) fail(ErrorCode::ConfigInvalid, "cannot open " + file.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ConfigInvalid, file.string() + ": " + e.what());
    }
    return parse_scenario(j);
}

ScenarioOutcome run_scenario(const Scenario& s, const Overrides& o) {
    ScenarioOutcome out;
    out.name = s.name;
    out.report = {{"scenario", s.name}, {"experiment", s.experiment}, {"expect_fail", s.expect_fail},
                  {"family", s.family}, {"params", s.params}};
    if (o.seed) out.report["seed_override"] = *o.seed;
    if (o.horizon) out.report["horizon_override"] = *o.horizon;
    const auto t0 = std::chrono::steady_clock::now();
    bool config_error = false;
    try {
        Ctx c{s, o, Params(s.params, "params"), out};
        if (s.experiment == "shadow") out.verdict = run_shadow(c);
        else if (s.experiment == "periodic") out.verdict = run_periodic(c);
        else if (s.experiment == "limit") out.verdict = run_limit(c);
        else if (s.experiment == "average") out.verdict = run_average(c);
        else if (s.experiment == "density") out.verdict = run_density(c);
        else if (s.experiment == "product") out.verdict = run_product(c);
        else if (s.experiment == "uniqueness") out.verdict = run_uniqueness(c);
        else if (s.experiment == "lipschitz") out.verdict = run_lipschitz(c);
    } catch (const ShadowError& e) {
        out.verdict = false;
        out.report["error"] = {{"name", e.name()}, {"message", e.what()}};
        out.key_certificate = std::string(e.name());
        config_error = e.code() == ErrorCode::ConfigInvalid;
    } catch (const nlohmann::json::exception& e) {
        out.verdict = false;
        out.report["error"] = {{"name", "ConfigInvalid"}, {"message", e.what()}};
        out.key_certificate = "ConfigInvalid";
        config_error = true;
    }
    out.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.passed = !config_error && out.verdict != s.expect_fail;
    out.exit_code = config_error ? 2 : (out.passed ? 0 : 1);
    out.report["verdict"] = out.verdict;
    out.report["passed"] = out.passed;
    out.metadata = {{"timestamp", utc_timestamp()}, {"runtime_ms", out.runtime_ms}};
    return out;
}

ScenarioOutcome run_scenario_file(const std::filesystem::path& file, const Overrides& o) {
    try {
        return run_scenario(load_scenario(file), o);
    } catch (const ShadowError& e) {
        ScenarioOutcome out;
        out.name = file.stem().string();
        out.report = {{"scenario", out.name},
                      {"error", {{"name", e.name()}, {"message", e.what()}}},
                      {"verdict", false},
                      {"passed", false}};
        out.metadata = {{"timestamp", utc_timestamp()}, {"runtime_ms", 0.0}};
        out.key_certificate = std::string(e.name());
        out.exit_code = e.code() == ErrorCode::ConfigInvalid ? 2 : 1;
        return out;
    }
}

json full_report(const ScenarioOutcome& out) {
    json j = out.report;
    j["metadata"] = out.metadata;
    return j;
}

void write_outputs(const ScenarioOutcome& out, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_atomic(dir / (out.name + ".json"), full_report(out).dump(2) + "\n");
    for (const auto& s : out.series) {
        std::ostringstream os;
        os << std::setprecision(17);
        for (std::size_t i = 0; i < s.columns.size(); ++i) os << (i ? "," : "") << s.columns[i];
        os << '\n';
        for (const auto& row : s.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << '\n';
        }
        write_atomic(dir / (out.name + "-" + s.name + ".csv"), os.str());
    }
}

SuiteResult run_suite(const std::filesystem::path& dir, const Overrides& o) {
    if (!std::filesystem::is_directory(dir))
        fail(ErrorCode::ConfigInvalid, dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    SuiteResult r;
    for (const auto& f : files) {
        r.outcomes.push_back(run_scenario_file(f, o));
        r.exit_code = std::max(r.exit_code, r.outcomes.back().exit_code);
    }
    return r;
}

std::string summary_table(const SuiteResult& r) {
    std::size_t w = 8;
    for (const auto& o : r.outcomes) w = std::max(w, o.name.size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(w)) << "scenario" << "  " << std::setw(6) << "result"
       << "  " << std::setw(32) << "certificate" << "  runtime_ms\n";
    for (const auto& o : r.outcomes)
        os << std::setw(static_cast<int>(w)) << o.name << "  " << std::setw(6) << (o.passed ? "PASS" : "FAIL")
           << "  " << std::setw(32) << o.key_certificate << "  " << std::fixed << std::setprecision(1)
           << o.runtime_ms << std::defaultfloat << "\n";
    return os.str();
}

}  // namespace nashadow
