#pragma once

#include <Eigen/Sparse>

#include "vemns/element.hpp"
#include "vemns/mesh.hpp"
#include "vemns/problem.hpp"

namespace vemns {

// Global velocity dof order: vertex pairs, then edge-midpoint pairs, then
// element divergence-moment pairs. Pressures are discontinuous P1, three
// scaled-monomial coefficients per element, appended after the free
// velocities in the solved system.
struct DofTable {
  int nv_total = 0;  // all velocity dofs
  int np_total = 0;  // 3 * n_elements
  int n_free = 0;    // velocity dofs not fixed by Dirichlet data
  bool has_neumann = false;

  std::vector<int> reduced;  // velocity dof -> free index, -1 when fixed
  std::vector<double> bc;    // Dirichlet value per velocity dof (0 when free)

  int vertex_dof(int v, int c) const { return 2 * v + c; }
  int edge_dof_base;  // first edge dof
  int elem_dof_base;  // first element-moment dof
  int edge_dof(int e, int c) const { return edge_dof_base + 2 * e + c; }
  int elem_dof(int k, int c) const { return elem_dof_base + 2 * k + c; }

  // solved unknowns: free velocities, pressures, optional gauge multiplier
  int system_size() const {
    return n_free + np_total + (has_neumann ? 0 : 1);
  }
  int pressure_index(int k, int alpha) const { return n_free + 3 * k + alpha; }

  // reported problem size: free velocity dofs plus pressure dofs
  int n_dof() const { return n_free + np_total; }

  // global velocity dofs of element k in local kernel order (size 4n+2)
  std::vector<int> element_dofs(const QuadTreeMesh& mesh, int k) const;

  // expand a solved vector to the full velocity dof vector with bc values
  Eigen::VectorXd full_velocity(const Eigen::VectorXd& solution) const;
};

DofTable build_dof_table(const QuadTreeMesh& mesh, const ProblemSpec& prob);

// element kernels for every mesh element, in element order
std::vector<ElementKernel> build_kernels(const QuadTreeMesh& mesh);

struct AssembledSystem {
  Eigen::SparseMatrix<double> mat;
  Eigen::VectorXd rhs;
};

// Assemble the linearized saddle system at velocity state `w_full` (full dof
// vector including boundary values). `stokes_only` drops the convective
// terms; `skew` selects the skew-symmetrized linearization otherwise.
AssembledSystem assemble_system(const QuadTreeMesh& mesh,
                                const std::vector<ElementKernel>& kernels,
                                const DofTable& dofs, const ProblemSpec& prob,
                                const Eigen::VectorXd& w_full, bool stokes_only,
                                bool skew);

// L2 norm of div(u_h) over the mesh (exactly zero up to roundoff by
// construction of the scheme)
double divergence_l2_norm(const std::vector<ElementKernel>& kernels,
                          const DofTable& dofs, const QuadTreeMesh& mesh,
                          const Eigen::VectorXd& velocity);

}  // namespace vemns
