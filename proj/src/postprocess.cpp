#include "vemns/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vemns {

namespace {

Eigen::VectorXd local_dofs(const QuadTreeMesh& mesh, const DofTable& dofs,
                           const Solution& sol, int k, int ndof) {
  Eigen::VectorXd ul(ndof);
  const std::vector<int> gd = dofs.element_dofs(mesh, k);
  for (int i = 0; i < ndof; ++i) ul[i] = sol.velocity[gd[i]];
  return ul;
}

}  // namespace

double velocity_error(const QuadTreeMesh& mesh,
                      const std::vector<ElementKernel>& kernels,
                      const DofTable& dofs, const ProblemSpec& prob,
                      const Solution& sol) {
  if (!prob.has_exact) throw std::logic_error("velocity_error needs an exact solution");
  double acc = 0.0;
  for (size_t k = 0; k < kernels.size(); ++k) {
    const ElementKernel& K = kernels[k];
    const Eigen::VectorXd ul = local_dofs(mesh, dofs, sol, static_cast<int>(k), K.ndof);
    const Eigen::VectorXd pg = K.proj_grad * ul;
    const QuadratureRule rule = polygon_quadrature(K.loop, 8);
    for (size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Matrix2d gh = eval_tensor(K.frame, pg, rule.points[q]);
      const Eigen::Matrix2d ge = prob.exact_velocity_gradient(rule.points[q]);
      acc += rule.weights[q] * (ge - gh).squaredNorm();
    }
  }
  return std::sqrt(acc);
}

double pressure_error(const QuadTreeMesh&,
                      const std::vector<ElementKernel>& kernels,
                      const DofTable& dofs, const ProblemSpec& prob,
                      const Solution& sol) {
  if (!prob.has_exact) throw std::logic_error("pressure_error needs an exact solution");
  // gauge alignment: without a Neumann part only pressure differences matter
  double mean_exact = 0.0, mean_h = 0.0, area = 0.0;
  if (!dofs.has_neumann) {
    for (size_t k = 0; k < kernels.size(); ++k) {
      const QuadratureRule rule = polygon_quadrature(kernels[k].loop, 8);
      for (size_t q = 0; q < rule.size(); ++q) {
        mean_exact += rule.weights[q] * prob.exact_pressure(rule.points[q]);
        const double ph =
            kernels[k].frame.value(sol.pressure.segment(3 * k, 3), rule.points[q]);
        mean_h += rule.weights[q] * ph;
        area += rule.weights[q];
      }
    }
    mean_exact /= area;
    mean_h /= area;
  }
  double acc = 0.0;
  for (size_t k = 0; k < kernels.size(); ++k) {
    const ElementKernel& K = kernels[k];
    const QuadratureRule rule = polygon_quadrature(K.loop, 8);
    for (size_t q = 0; q < rule.size(); ++q) {
      const double ph = K.frame.value(sol.pressure.segment(3 * k, 3), rule.points[q]);
      const double diff =
          (prob.exact_pressure(rule.points[q]) - mean_exact) - (ph - mean_h);
      acc += rule.weights[q] * diff * diff;
    }
  }
  return std::sqrt(acc);
}

RecirculationResult recirculation_length(const QuadTreeMesh& mesh,
                                         const std::vector<ElementKernel>& kernels,
                                         const DofTable& dofs, const Solution& sol,
                                         const ChannelGeometry& geo) {
  const double x_rear = geo.rear_face_x();
  const double ytol = 1e-9 * geo.height;

  // samples (x, u_x) along y = 0, downstream of the rear face
  std::map<double, double> samples;

  for (size_t e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& ed = mesh.edges[e];
    const Vec2 a = mesh.vertices[ed.v0], b = mesh.vertices[ed.v1];
    if (std::abs(a.y) > ytol || std::abs(b.y) > ytol) continue;
    if (std::max(a.x, b.x) < x_rear - ytol) continue;
    samples[a.x] = sol.velocity[dofs.vertex_dof(ed.v0, 0)];
    samples[b.x] = sol.velocity[dofs.vertex_dof(ed.v1, 0)];
    samples[0.5 * (a.x + b.x)] = sol.velocity[dofs.edge_dof(static_cast<int>(e), 0)];
  }

  RecirculationResult res;
  if (samples.empty()) {
    // wake line inside elements: projected values at traversal points
    res.edge_aligned = false;
    for (size_t k = 0; k < kernels.size(); ++k) {
      const ElementKernel& K = kernels[k];
      double ylo = 1e300, yhi = -1e300, xlo = 1e300, xhi = -1e300;
      for (const Vec2& p : K.loop) {
        ylo = std::min(ylo, p.y); yhi = std::max(yhi, p.y);
        xlo = std::min(xlo, p.x); xhi = std::max(xhi, p.x);
      }
      if (ylo > ytol || yhi < -ytol || xhi < x_rear - ytol) continue;
      const Eigen::VectorXd ul = local_dofs(mesh, dofs, sol, static_cast<int>(k), K.ndof);
      const Eigen::VectorXd p0 = K.proj_l2 * ul;
      for (const double x : {xlo, 0.5 * (xlo + xhi), xhi})
        samples[x] = eval_vec2(K.frame, p0, Vec2{x, 0.0}).x;
    }
  }

  double px = 0.0, pu = 0.0;
  bool have_neg = false;
  for (const auto& [x, u] : samples) {
    if (x < x_rear - ytol) continue;
    if (have_neg && u >= 0.0) {
      const double cross = (u == pu) ? x : px + (0.0 - pu) * (x - px) / (u - pu);
      res.length = cross - x_rear;
      return res;
    }
    if (u < 0.0) {
      have_neg = true;
      res.reversed = true;
    }
    px = x;
    pu = u;
  }
  if (have_neg) res.length = px - x_rear;  // bubble reaches the last sample
  return res;
}

std::string solution_vtk(const QuadTreeMesh& mesh,
                         const std::vector<ElementKernel>& kernels,
                         const DofTable& dofs, const Solution& sol) {
  std::ostringstream out;
  out.precision(12);
  out << "# vtk DataFile Version 3.0\n"
      << "steady incompressible flow\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const Vec2& p : mesh.vertices) out << p.x << " " << p.y << " 0\n";
  size_t list_size = 0;
  for (const MeshElement& el : mesh.elements) list_size += el.vertices.size() + 1;
  out << "POLYGONS " << mesh.n_elements() << " " << list_size << "\n";
  for (const MeshElement& el : mesh.elements) {
    out << el.vertices.size();
    for (int v : el.vertices) out << " " << v;
    out << "\n";
  }
  out << "POINT_DATA " << mesh.n_vertices() << "\nVECTORS velocity double\n";
  for (size_t v = 0; v < mesh.n_vertices(); ++v)
    out << sol.velocity[dofs.vertex_dof(static_cast<int>(v), 0)] << " "
        << sol.velocity[dofs.vertex_dof(static_cast<int>(v), 1)] << " 0\n";
  out << "CELL_DATA " << mesh.n_elements()
      << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (size_t k = 0; k < kernels.size(); ++k) out << sol.pressure[3 * k] << "\n";
  return out.str();
}

std::string solution_csv(const QuadTreeMesh& mesh,
                         const std::vector<ElementKernel>& kernels,
                         const DofTable& dofs, const Solution& sol) {
  std::ostringstream out;
  out.precision(17);
  out << "element,cx,cy,h,ux,uy,p\n";
  for (size_t k = 0; k < kernels.size(); ++k) {
    const ElementKernel& K = kernels[k];
    const Eigen::VectorXd ul = local_dofs(mesh, dofs, sol, static_cast<int>(k), K.ndof);
    const Vec2 u = eval_vec2(K.frame, K.proj_l2 * ul, K.centroid());
    out << k << "," << K.centroid().x << "," << K.centroid().y << "," << K.h()
        << "," << u.x << "," << u.y << "," << sol.pressure[3 * k] << "\n";
  }
  return out.str();
}

}  // namespace vemns
