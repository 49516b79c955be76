#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magblock/config.hpp"
#include "magblock/emit.hpp"
#include "magblock/errors.hpp"
#include "magblock/lindblad.hpp"
#include "magblock/pt_spectrum.hpp"
#include "magblock/sweep.hpp"
#include "magblock/weak_drive.hpp"

namespace py = pybind11;
using namespace magblock;

namespace {

py::dict amplitudes_dict(const AmplitudeVector& c) {
  py::dict d;
  d["c00"] = c.c00;
  d["c10"] = c.c10;
  d["c01"] = c.c01;
  d["c20"] = c.c20;
  d["c11"] = c.c11;
  d["c02"] = c.c02;
  return d;
}

py::dict table_dict(const ResultTable& t) {
  py::array_t<double> rows({t.rows.size(), t.columns.size()});
  auto view = rows.mutable_unchecked<2>();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) view(r, c) = t.rows[r][c];
  }
  py::dict d;
  d["name"] = t.name;
  d["columns"] = t.columns;
  d["rows"] = rows;
  d["metadata"] = t.metadata.dump();
  return d;
}

MasterEquationOptions me_options(const std::string& gain_mode, int cutoff_a, int cutoff_m, int cutoff_b,
                                 bool reduced) {
  MasterEquationOptions o;
  o.gain_mode = gain_mode_from_string(gain_mode);
  o.cutoff_a = cutoff_a;
  o.cutoff_m = cutoff_m;
  o.cutoff_b = cutoff_b;
  o.reduced = reduced;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weak-drive magnon blockade: eigenvalues, steady states and sweeps";
  m.attr("__version__") = MAGBLOCK_VERSION;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("omega_b", &SystemParams::omega_b)
      .def_readwrite("delta_a", &SystemParams::delta_a)
      .def_readwrite("delta_m", &SystemParams::delta_m)
      .def_readwrite("g_ma", &SystemParams::g_ma)
      .def_readwrite("g_mb", &SystemParams::g_mb)
      .def_readwrite("kerr_k", &SystemParams::kerr_k)
      .def_readwrite("drive_omega", &SystemParams::drive_omega)
      .def_readwrite("kappa_a", &SystemParams::kappa_a)
      .def_readwrite("kappa_m", &SystemParams::kappa_m)
      .def_readwrite("gamma_b", &SystemParams::gamma_b)
      .def_readwrite("n_th", &SystemParams::n_th)
      .def("__repr__", [](const SystemParams& p) {
        return "SystemParams(delta_m=" + std::to_string(p.delta_m) + ", g_ma=" + std::to_string(p.g_ma) +
               ", kerr_k=" + std::to_string(p.kerr_k) + ", ...)";
      });

  m.def("reference_parameters", &reference_parameters);
  m.def("validate", &validate, py::arg("params"), "Raises on invalid input; returns warnings.");
  m.def("effective_nonlinearity", [](const SystemParams& p) { return effective_nonlinearity(p).n_eff; });

  m.def("eigenvalues_closed_form", [](const SystemParams& p) {
    const EigenPair e = eigenvalues_closed_form(p);
    return py::make_tuple(e.xi_plus, e.xi_minus);
  });
  m.def("eigenvalues_numeric", [](const SystemParams& p) {
    const EigenPair e = eigenvalues_numeric(p);
    return py::make_tuple(e.xi_plus, e.xi_minus);
  });
  m.def("pt_region", [](const SystemParams& p) { return to_string(classify(eigenvalues_closed_form(p).discriminant)); });
  m.def("exceptional_point_coupling", &exceptional_point_coupling, py::arg("kappa_a"), py::arg("kappa_m"));

  m.def("steady_state_amplitudes", [](const SystemParams& p) { return amplitudes_dict(steady_state_amplitudes(p)); });
  m.def(
      "steady_state_linear_solve",
      [](const SystemParams& p, bool full) {
        return amplitudes_dict(steady_state_linear_solve(p, full ? Coupling::full : Coupling::perturbative));
      },
      py::arg("params"), py::arg("full") = false);
  m.def("g2_analytic", [](const SystemParams& p) { return g2_analytic(steady_state_amplitudes(p)).g2; });
  m.def("optimal_detuning", &optimal_detuning);

  m.def(
      "g2_numeric",
      [](const SystemParams& p, const std::string& gain_mode, int cutoff_a, int cutoff_m, int cutoff_b, bool reduced) {
        const auto opt = me_options(gain_mode, cutoff_a, cutoff_m, cutoff_b, reduced);
        py::gil_scoped_release release;
        return magnon_correlation(p, opt).g2;
      },
      py::arg("params"), py::arg("gain_mode") = "paper_literal", py::arg("cutoff_a") = 3, py::arg("cutoff_m") = 3,
      py::arg("cutoff_b") = 3, py::arg("reduced") = false);
  m.def(
      "steady_state_density",
      [](const SystemParams& p, const std::string& gain_mode, int cutoff_a, int cutoff_m, int cutoff_b, bool reduced) {
        const auto opt = me_options(gain_mode, cutoff_a, cutoff_m, cutoff_b, reduced);
        DensityMatrix rho;
        {
          py::gil_scoped_release release;
          rho = magnon_steady_state(p, opt);
        }
        return Eigen::MatrixXcd(rho.data);
      },
      py::arg("params"), py::arg("gain_mode") = "paper_literal", py::arg("cutoff_a") = 3, py::arg("cutoff_m") = 3,
      py::arg("cutoff_b") = 3, py::arg("reduced") = false);

  m.def("preset_names", &preset_names);
  m.def(
      "run_json",
      [](const std::string& config_json) {
        nlohmann::json doc;
        try {
          doc = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::parse_error& e) {
          throw ValidationError(std::string("config is not valid JSON: ") + e.what());
        }
        const RunConfig cfg = parse_config(doc);
        std::vector<ResultTable> tables;
        {
          py::gil_scoped_release release;
          tables = run(cfg);
        }
        py::list out;
        for (const auto& t : tables) out.append(table_dict(t));
        return out;
      },
      py::arg("config_json"));
}
