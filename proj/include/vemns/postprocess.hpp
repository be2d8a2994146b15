#pragma once

#include "vemns/solver.hpp"

namespace vemns {

// Broken H1-type velocity error against the analytic solution: L2 norm of
// (exact gradient - projected discrete gradient), accumulated elementwise.
double velocity_error(const QuadTreeMesh& mesh,
                      const std::vector<ElementKernel>& kernels,
                      const DofTable& dofs, const ProblemSpec& prob,
                      const Solution& sol);

// L2 pressure error. Fully Dirichlet problems determine the pressure only up
// to a constant, so both fields are shifted to zero mean before comparing.
double pressure_error(const QuadTreeMesh& mesh,
                      const std::vector<ElementKernel>& kernels,
                      const DofTable& dofs, const ProblemSpec& prob,
                      const Solution& sol);

struct RecirculationResult {
  double length = 0.0;       // 0 when the flow never reverses past the obstacle
  bool reversed = false;     // a negative u_x sample exists downstream
  bool edge_aligned = true;  // false when y=0 is not resolved by mesh edges
};

// Length of the recirculation bubble behind the obstacle: sample u_x along
// y = 0 downstream of the rear face, locate the sign change from negative
// back to positive, and linearly interpolate the zero crossing. Lengths are
// measured from the rear face. When the wake line is resolved by mesh edges
// the samples are exact dof values (vertices and side midpoints); otherwise
// projected values at element traversal points are used and flagged.
RecirculationResult recirculation_length(const QuadTreeMesh& mesh,
                                         const std::vector<ElementKernel>& kernels,
                                         const DofTable& dofs, const Solution& sol,
                                         const ChannelGeometry& geo);

// Legacy-format VTK: mesh polygons, vertex velocities (exact dof values),
// cellwise pressure evaluated at centroids.
std::string solution_vtk(const QuadTreeMesh& mesh,
                         const std::vector<ElementKernel>& kernels,
                         const DofTable& dofs, const Solution& sol);

// Per-element CSV: centroid, size, projected velocity at the centroid,
// centroid pressure.
std::string solution_csv(const QuadTreeMesh& mesh,
                         const std::vector<ElementKernel>& kernels,
                         const DofTable& dofs, const Solution& sol);

}  // namespace vemns
