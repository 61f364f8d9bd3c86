#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "porolod/experiments.hpp"

namespace py = pybind11;
using namespace porolod;

PYBIND11_MODULE(_porolod, m) {
  m.doc() = "Poroelasticity LOD multiscale solver";

  py::class_<Mesh>(m, "Mesh")
      .def_readonly("dim", &Mesh::dim)
      .def_readonly("cells_per_side", &Mesh::cells_per_side)
      .def_readonly("mesh_size", &Mesh::mesh_size)
      .def_property_readonly("n_vertices", &Mesh::n_vertices)
      .def_property_readonly("n_elements", &Mesh::n_elements)
      .def("element_volume", &Mesh::element_volume)
      .def_readonly("vertices", &Mesh::vertices)
      .def_readonly("elements", &Mesh::elements);

  m.def("build_structured_mesh", &build_structured_mesh, py::arg("dim"),
        py::arg("cells_per_side"));
  m.def("coarse_element_of", &coarse_element_of, py::arg("fine"),
        py::arg("fine_element"), py::arg("coarse"));

  py::class_<CoefficientField>(m, "CoefficientField")
      .def_readonly("kappa", &CoefficientField::kappa)
      .def_readonly("mu", &CoefficientField::mu)
      .def_readonly("lam", &CoefficientField::lambda)
      .def_readonly("alpha", &CoefficientField::alpha)
      .def_readonly("seed", &CoefficientField::seed);

  m.def(
      "sample_field",
      [](const Mesh& eps_mesh, double M, double nu, std::uint64_t seed) {
        return sample_field(eps_mesh, CoefficientBounds{}, M, nu, seed);
      },
      py::arg("eps_mesh"), py::arg("M") = 1.0, py::arg("nu") = 1.0,
      py::arg("seed") = 1234);

  py::class_<SourceTerm>(m, "SourceTerm")
      .def_readonly("value", &SourceTerm::value)
      .def_readonly("seed", &SourceTerm::seed);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readwrite("name", &ExperimentConfig::name)
      .def_readwrite("dim", &ExperimentConfig::dim)
      .def_readwrite("fine_cells", &ExperimentConfig::fine_cells)
      .def_readwrite("eps_cells", &ExperimentConfig::eps_cells)
      .def_readwrite("coarse_cells", &ExperimentConfig::coarse_cells)
      .def_readwrite("tau", &ExperimentConfig::tau)
      .def_readwrite("T", &ExperimentConfig::T)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("ell", &ExperimentConfig::ell)
      .def_readwrite("p0", &ExperimentConfig::p0)
      .def("steps", &ExperimentConfig::steps)
      .def("validate", &ExperimentConfig::validate);

  m.def("preset", &preset, py::arg("name"));
  m.def("config_to_json", &config_to_json_string);
  m.def("config_from_json", &config_from_json_string);

  py::class_<ErrorRecord>(m, "ErrorRecord")
      .def_readonly("H", &ErrorRecord::H)
      .def_readonly("n_coarse_dofs", &ErrorRecord::n_coarse_dofs)
      .def_readonly("rel_error", &ErrorRecord::rel_error)
      .def_readonly("wall_time_s", &ErrorRecord::wall_time_s)
      .def_readonly("diagnostic", &ErrorRecord::diagnostic);

  py::class_<ErrorReport>(m, "ErrorReport")
      .def_readonly("records", &ErrorReport::records)
      .def_readonly("slope", &ErrorReport::slope);

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("version", &RunRecord::version)
      .def_readonly("report", &RunRecord::report);

  m.def("run_convergence", &run_convergence, py::arg("config"),
        py::arg("import_basis_prefix") = "", py::arg("export_basis_prefix") = "",
        py::call_guard<py::gil_scoped_release>());
  m.def("write_run_outputs", &write_run_outputs, py::arg("record"),
        py::arg("csv_path"));
}
