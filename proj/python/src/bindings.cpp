// Thin Python surface: fields travel as lists of samples on x_j = j/n,
// reports as JSON text decoded on the Python side.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "novikov/harness.hpp"

namespace py = pybind11;
using namespace novikov;

namespace {

PeriodicField field(const std::vector<double>& samples) {
  return PeriodicField(PeriodicGrid(static_cast<int>(samples.size())), samples);
}

using Op = PeriodicField (*)(const PeriodicField&);

template <Op op>
std::vector<double> lift(const std::vector<double>& u) {
  return op(field(u)).values();
}

std::string solve_json(const std::string& config_text) {
  const SolveResult r = solve(parse_config(config_text));
  nlohmann::json times = nlohmann::json::array(), fields = nlohmann::json::array();
  for (const auto& s : r.trajectory) {
    times.push_back(s.t);
    fields.push_back(s.u.values());
  }
  return nlohmann::json{{"outcome", to_string(r.outcome)},
                        {"final_time", r.final_time},
                        {"times", times},
                        {"u", fields}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Novikov equation solvers and diagnostics";

  // translators run newest first, so the derived ConfigError goes last
  py::register_exception<Error>(m, "NovikovError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("version", [] { return std::string(tool_version()); });
  m.def("preset_names", &preset_names);
  m.def("preset_field", [](const std::string& name, int n) {
    return preset_field(name, PeriodicGrid(n)).values();
  });
  m.def("preset_config", [](const std::string& name) { return to_text(preset_config(name)); },
        "canonical config text of a preset");
  m.def("normalize_config", [](const std::string& text) { return to_text(parse_config(text)); },
        "parse, validate and re-emit a config");

  m.def("helmholtz", &lift<helmholtz>);
  m.def("helmholtz_inverse", &lift<helmholtz_inverse>);
  m.def("from_momentum", &lift<from_momentum>);
  m.def("rhs_nonlocal", &lift<rhs_nonlocal>);
  m.def("rhs_momentum", &lift<rhs_momentum>);
  m.def("derivative", [](const std::vector<double>& u, int order) {
    return derivative(field(u), order).values();
  }, py::arg("u"), py::arg("order") = 1);

  m.def("h2_functional", [](const std::vector<double>& u) { return h2_functional(field(u)); });
  m.def("h1_energy", [](const std::vector<double>& u) { return h1_energy(field(u)); });
  m.def("es_norm", [](const std::vector<double>& u, double s, int k_max) {
    return es_norm(field(u), EsNormConfig{s, k_max, false});
  }, py::arg("u"), py::arg("s") = 0.1, py::arg("k_max") = 30);
  m.def("fit_radius", [](const std::vector<double>& u) {
    return to_json(fit_radius(field(u))).dump();
  }, "JSON text of the radius estimate");
  m.def("bihamiltonian_check", [](const std::vector<double>& u) {
    const BiHamiltonianReport r = bihamiltonian_check(field(u));
    return py::dict(py::arg("residual_b2") = r.residual_b2, py::arg("residual_b1") = r.residual_b1,
                    py::arg("gateaux_error_h1") = r.gateaux_error_h1,
                    py::arg("gateaux_error_h2") = r.gateaux_error_h2,
                    py::arg("translation_residual_b2") = r.translation_residual_b2);
  });

  m.def("solve", &solve_json, py::arg("config_text"),
        "JSON text with the outcome, probe times and probed u fields");
  m.def("run", [](const std::string& config_text, const std::string& out) {
    return to_json(run(parse_config(config_text), out)).dump();
  }, py::arg("config_text"), py::arg("out"), "JSON text of the run summary");
}
