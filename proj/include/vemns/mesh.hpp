#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vemns/geometry.hpp"

namespace vemns {

enum class BoundaryTag : uint8_t { interior = 0, dirichlet = 1, neumann = 2 };

// A refinable square cell on the dyadic lattice. Anchor is the lower-left
// corner in ticks; a cell at `level` spans (root_ticks >> level) ticks.
struct Cell {
  int64_t ax, ay;
  int level;
};

struct MeshEdge {
  int v0, v1;
  int elem_left = -1;   // element traversing v0 -> v1 in its CCW loop
  int elem_right = -1;  // element traversing v1 -> v0
  BoundaryTag tag = BoundaryTag::interior;
};

struct MeshElement {
  std::vector<int> vertices;      // CCW loop, 4..8 entries
  std::vector<int> edges;         // edges[j] joins vertices[j], vertices[j+1]
  std::vector<uint8_t> edge_fwd;  // 1 if this element is elem_left of edges[j]
  int level = 0;
  double h = 0.0, area = 0.0;
  Vec2 centroid;
};

using GeometrySpec = std::variant<RectangleGeometry, ChannelGeometry>;

class QuadTreeMesh {
 public:
  GeometrySpec geometry;
  Vec2 origin;        // lattice origin (lower-left of bounding box)
  double tick = 0.0;  // physical size of one tick = edge / 2^kRootBits
  std::vector<Cell> cells;  // one per element, same index

  std::vector<Vec2> vertices;
  std::vector<std::pair<int64_t, int64_t>> vertex_ticks;
  std::vector<MeshElement> elements;
  std::vector<MeshEdge> edges;

  static constexpr int kRootBits = 40;  // ticks per root edge = 2^40

  size_t n_vertices() const { return vertices.size(); }
  size_t n_elements() const { return elements.size(); }
  size_t n_edges() const { return edges.size(); }
  int max_level() const;
  double total_area() const;

  Vec2 edge_midpoint(int e) const {
    return (vertices[edges[e].v0] + vertices[edges[e].v1]) * 0.5;
  }
  double edge_length(int e) const {
    return (vertices[edges[e].v1] - vertices[edges[e].v0]).norm();
  }
  std::vector<Vec2> element_loop(int k) const;
  // outward unit normal of element k on its side j
  Vec2 outward_normal(int k, int j) const;

  // consistency checks (throws on violation): CCW loops, shared-edge
  // orientation, <=1 hanging node per element side, level jumps <= 1
  void check_invariants() const;
};

QuadTreeMesh build_initial_mesh(const GeometrySpec& geometry);

// Refine the marked elements (quad split). Closure refinements keeping level
// jumps <= 1 across edges are applied automatically.
QuadTreeMesh refine(const QuadTreeMesh& mesh, const std::vector<int>& marked);

QuadTreeMesh refine_uniform(const QuadTreeMesh& mesh);

// Greedy Dörfler marking: minimal set (ties broken by lower id) with
// sum of marked indicators >= theta * total.
std::vector<int> dorfler_mark(const std::vector<double>& eta_sq, double theta);

std::string mesh_to_json(const QuadTreeMesh& mesh);
QuadTreeMesh mesh_from_json(const std::string& text);
void save_mesh(const QuadTreeMesh& mesh, const std::string& path);
QuadTreeMesh load_mesh(const std::string& path);

std::string geometry_to_json(const GeometrySpec& g);
GeometrySpec geometry_from_json(const std::string& text);

}  // namespace vemns
