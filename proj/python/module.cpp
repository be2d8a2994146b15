#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vemns/mesh.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "divergence-free VEM for steady Navier-Stokes";

  py::class_<vemns::QuadTreeMesh>(m, "Mesh")
      .def_property_readonly("n_elements",
                             [](const vemns::QuadTreeMesh& M) { return M.elements.size(); })
      .def_property_readonly("n_vertices",
                             [](const vemns::QuadTreeMesh& M) { return M.vertices.size(); })
      .def_property_readonly("n_edges",
                             [](const vemns::QuadTreeMesh& M) { return M.edges.size(); })
      .def("max_level", &vemns::QuadTreeMesh::max_level)
      .def("total_area", &vemns::QuadTreeMesh::total_area)
      .def("check_invariants", &vemns::QuadTreeMesh::check_invariants);
}
