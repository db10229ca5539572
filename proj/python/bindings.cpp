#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nashadow/average_shadow.hpp"
#include "nashadow/density.hpp"
#include "nashadow/errors.hpp"
#include "nashadow/family.hpp"
#include "nashadow/limit_shadow.hpp"
#include "nashadow/product.hpp"
#include "nashadow/pseudo_orbit.hpp"
#include "nashadow/scenario.hpp"
#include "nashadow/shadow_solver.hpp"

namespace py = pybind11;
using namespace nashadow;
using json = nlohmann::json;

// JSON crosses the boundary as text; the Python package decodes it.
namespace {

MapFamily family_of(const std::string& descriptor) { return family_from_json(json::parse(descriptor)); }

json report_json(const ShadowReport& r) {
    return {{"shadow_point", r.shadow_point},     {"horizon", r.horizon},
            {"per_step_errors", r.per_step_errors}, {"max_error", r.max_error},
            {"diameter_bound", r.diameter_bound}, {"cell_diameter", r.cell_diameter},
            {"epsilon", r.epsilon},               {"delta_schedule", r.delta_schedule},
            {"chain_residual", r.chain_residual}, {"verdict", r.verdict}};
}

SignSchedule signs_of(const std::string& s) {
    if (s == "alternating") return SignSchedule::Alternating;
    if (s == "positive") return SignSchedule::Positive;
    if (s == "random") return SignSchedule::Random;
    fail(ErrorCode::InvalidArgument, "signs must be alternating, positive or random");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Constructive shadowing for nonautonomous map families";

    static py::exception<ShadowError> shadow_error(m, "ShadowError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ShadowError& e) {
            py::object err = shadow_error;
            py::object inst = err(e.what());
            inst.attr("code") = std::string(e.name());
            PyErr_SetObject(shadow_error.ptr(), inst.ptr());
        }
    });

    py::class_<MapFamily>(m, "MapFamily")
        .def_property_readonly("name", &MapFamily::name)
        .def_property_readonly("expanding", &MapFamily::expanding)
        .def_property_readonly("isometric", &MapFamily::isometric)
        .def_property_readonly("branch_radius", &MapFamily::branch_radius)
        .def("rate", &MapFamily::rate, py::arg("n"))
        .def("descriptor", [](const MapFamily& f) { return f.descriptor().dump(); })
        .def("__repr__", [](const MapFamily& f) { return "<MapFamily " + f.name() + ">"; });

    m.def("family", &family_of, py::arg("descriptor_json"));
    m.def("product", &product, py::arg("F"), py::arg("G"));
    m.def("evaluate", &evaluate, py::arg("family"), py::arg("n"), py::arg("x"));
    m.def("compose", [](const MapFamily& f, const Point& x, std::size_t n) { return compose(f, x, n).points; },
          py::arg("family"), py::arg("x"), py::arg("n"));
    m.def("preimages", &preimages, py::arg("family"), py::arg("n"), py::arg("w"));

    py::class_<PseudoOrbit>(m, "PseudoOrbit")
        .def(py::init([](const MapFamily& f, std::vector<Point> pts) { return make_pseudo_orbit(f, std::move(pts)); }),
             py::arg("family"), py::arg("points"))
        .def_readonly("start_index", &PseudoOrbit::start_index)
        .def_readonly("points", &PseudoOrbit::points)
        .def_readonly("defects", &PseudoOrbit::defects)
        .def_property_readonly("horizon", &PseudoOrbit::horizon)
        .def_property_readonly("max_defect", &PseudoOrbit::max_defect);

    m.def("perturb_orbit", &perturb_orbit, py::arg("family"), py::arg("x0"), py::arg("horizon"),
          py::arg("noise"), py::arg("seed"));
    m.def("inject_defects",
          [](const MapFamily& f, const Point& x0, const std::vector<double>& e, const std::string& signs,
             std::uint64_t seed) { return inject_defects(f, x0, e, signs_of(signs), seed); },
          py::arg("family"), py::arg("x0"), py::arg("defects"), py::arg("signs") = "alternating",
          py::arg("seed") = 0);
    m.def("periodicize", &periodicize, py::arg("family"), py::arg("po"), py::arg("period"),
          py::arg("horizon") = py::none());

    m.def("delta_budget",
          [](const MapFamily& f, std::size_t h, double eps, double margin) { return delta_budget(f, h, eps, margin); },
          py::arg("family"), py::arg("horizon"), py::arg("eps"), py::arg("margin") = 0.98);
    m.def("diameter_bound", &diameter_bound, py::arg("family"), py::arg("k"), py::arg("eps"));
    m.def("uniqueness_certificate", &uniqueness_certificate, py::arg("family"), py::arg("po"),
          py::arg("eps"), py::arg("k"));
    m.def("pullback_shadow",
          [](const MapFamily& f, const PseudoOrbit& po, double eps) {
              return report_json(pullback_shadow(f, po, eps).report).dump();
          },
          py::arg("family"), py::arg("po"), py::arg("eps"));
    m.def("periodic_shadow",
          [](const MapFamily& f, const PseudoOrbit& po, std::size_t period, double eps) {
              const auto r = periodic_shadow(f, po, period, eps);
              return json{{"point", r.point},
                          {"period", r.period},
                          {"fixed_point_residual", r.fixed_point_residual},
                          {"iterations", r.iterations},
                          {"max_error", r.max_error},
                          {"verdict", r.verdict}}
                  .dump();
          },
          py::arg("family"), py::arg("po"), py::arg("period"), py::arg("eps"));

    m.def("upper_density",
          [](std::size_t horizon, std::vector<std::size_t> members, std::size_t at) {
              return upper_density(IndexSet(horizon, std::move(members)), at).value();
          },
          py::arg("horizon"), py::arg("members"), py::arg("at"));
    m.def("cesaro_to_density_zero",
          [](const std::vector<double>& a) {
              const auto s = cesaro_to_density_zero(a, a.size());
              return json{{"J", s.J.members},
                          {"density", s.density.value()},
                          {"density_bound", s.density_bound},
                          {"cuts", s.cuts},
                          {"complement_sup", s.complement_sup}}
                  .dump();
          },
          py::arg("a"));
    m.def("density_zero_to_cesaro",
          [](const std::vector<double>& a, std::vector<std::size_t> J, double M) {
              const auto c = density_zero_to_cesaro(a, IndexSet(a.size(), std::move(J)), M);
              return json{{"bound", c.bound}, {"actual", c.actual}}.dump();
          },
          py::arg("a"), py::arg("J"), py::arg("M"));

    m.def("limit_shadow_point",
          [](const MapFamily& f, const PseudoOrbit& po, std::size_t levels, bool check_equicontinuity) {
              LimitOptions opt;
              opt.check_equicontinuity = check_equicontinuity;
              const auto r = limit_shadow_point(f, po, levels, opt);
              json table = json::array();
              for (const auto& row : r.table)
                  table.push_back({{"level", row.level},
                                   {"cut", row.cut},
                                   {"delta", row.delta},
                                   {"level_error", row.level_error},
                                   {"window_error", row.window_error}});
              return json{{"y", r.y}, {"table", table}, {"monotone", r.monotone}, {"verdict", r.verdict}}.dump();
          },
          py::arg("family"), py::arg("po"), py::arg("levels"), py::arg("check_equicontinuity") = true);
    m.def("average_shadow_point",
          [](const MapFamily& f, const std::vector<std::size_t>& A, const PseudoOrbit& po, double tolerance) {
              std::vector<Point> pts;
              for (auto a : A) pts.push_back(f.space(0).point_at(a));
              AverageOptions opt;
              opt.tolerance = tolerance;
              const auto r = average_shadow_point(InvariantSubsystem::finite(f, pts), po, opt);
              return json{{"y", r.y},
                          {"cesaro_error", r.cesaro_error},
                          {"certificate", r.certificate},
                          {"support_in_J_prime_B", r.lift.support_in_J_prime_B},
                          {"verdict", r.verdict}}
                  .dump();
          },
          py::arg("family"), py::arg("A"), py::arg("po"), py::arg("tolerance") = 0.05);

    m.def("product_equivalence_check",
          [](const MapFamily& F, const MapFamily& G, const std::string& variant, double eps, double delta,
             std::size_t max_length) {
              VariantBudget b;
              b.eps = eps;
              b.delta = delta;
              b.max_length = max_length;
              return to_json(product_equivalence_check(F, G, variant_from_name(variant), b)).dump();
          },
          py::arg("F"), py::arg("G"), py::arg("variant") = "h", py::arg("eps") = 0.25, py::arg("delta") = 0.3,
          py::arg("max_length") = 6);

    m.def("run_scenario",
          [](const std::string& scenario, std::optional<std::uint64_t> seed, std::optional<std::size_t> horizon) {
              const auto out = run_scenario(parse_scenario(json::parse(scenario)), {seed, horizon});
              return full_report(out).dump();
          },
          py::arg("scenario_json"), py::arg("seed") = py::none(), py::arg("horizon") = py::none());
}
