#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <set>

#include "vemns/mesh.hpp"

using namespace vemns;

namespace {
RectangleGeometry unit_square(double edge = 0.5) {
  RectangleGeometry g;
  g.x0 = 0.0;
  g.y0 = 0.0;
  g.x1 = 1.0;
  g.y1 = 1.0;
  g.edge = edge;
  return g;
}
}  // namespace

TEST_CASE("initial rectangle mesh has the expected layout") {
  const QuadTreeMesh m = build_initial_mesh(unit_square());
  m.check_invariants();
  CHECK(m.n_elements() == 4);
  CHECK(m.n_vertices() == 9);
  CHECK(m.n_edges() == 12);
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.max_level() == 0);
  for (const auto& el : m.elements) {
    CHECK(el.vertices.size() == 4);
    CHECK(el.area == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(el.h == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-14));
  }
  int n_boundary = 0, n_interior = 0;
  for (const auto& e : m.edges) {
    if (e.tag == BoundaryTag::interior) {
      ++n_interior;
      CHECK(e.elem_left >= 0);
      CHECK(e.elem_right >= 0);
    } else {
      ++n_boundary;
      CHECK(e.tag == BoundaryTag::dirichlet);
      CHECK(e.elem_right == -1);
    }
  }
  CHECK(n_boundary == 8);
  CHECK(n_interior == 4);
}

TEST_CASE("single refinement produces hanging nodes but keeps invariants") {
  QuadTreeMesh m = build_initial_mesh(unit_square());
  m = refine(m, {0});
  m.check_invariants();
  CHECK(m.n_elements() == 7);
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m.max_level() == 1);
  // neighbours of the split cell gain one hanging node each
  int n5 = 0, n4 = 0;
  for (const auto& el : m.elements) {
    if (el.vertices.size() == 5) ++n5;
    if (el.vertices.size() == 4) ++n4;
  }
  CHECK(n5 == 2);  // right and top neighbour of the refined corner cell
  CHECK(n4 == 5);
}

TEST_CASE("closure keeps level jumps at one") {
  QuadTreeMesh m = build_initial_mesh(unit_square(1.0));  // single root cell
  for (int step = 0; step < 4; ++step) {
    // keep refining whichever element owns the lower-left corner
    int target = -1;
    for (size_t k = 0; k < m.n_elements(); ++k) {
      const auto loop = m.element_loop(static_cast<int>(k));
      for (const auto& p : loop)
        if (p.x == 0.0 && p.y == 0.0) target = static_cast<int>(k);
    }
    REQUIRE(target >= 0);
    m = refine(m, {target});
    m.check_invariants();
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(m.max_level() == 4);
  // 2:1 balance means levels 1..4 are all populated
  std::set<int> levels;
  for (const auto& c : m.cells) levels.insert(c.level);
  CHECK(levels == std::set<int>{1, 2, 3, 4});
}

TEST_CASE("uniform refinement quadruples the element count") {
  QuadTreeMesh m = build_initial_mesh(unit_square());
  const QuadTreeMesh f = refine_uniform(m);
  f.check_invariants();
  CHECK(f.n_elements() == 16);
  CHECK(f.total_area() == doctest::Approx(1.0).epsilon(1e-13));
  for (const auto& el : f.elements) CHECK(el.vertices.size() == 4);
}

TEST_CASE("channel mesh respects the obstacle and boundary tags") {
  ChannelGeometry g;  // defaults: height 8, square side 1 at (0.5, 0)
  const QuadTreeMesh m = build_initial_mesh(g);
  m.check_invariants();
  // bounding box 40 x 8 at edge 0.5 minus the unit obstacle
  CHECK(m.n_elements() == 80 * 16 - 4);
  CHECK(m.total_area() == doctest::Approx(319.0).epsilon(1e-12));
  bool saw_neumann = false, saw_dirichlet = false;
  for (const auto& e : m.edges) {
    if (e.tag == BoundaryTag::neumann) {
      saw_neumann = true;
      CHECK(m.vertices[e.v0].x == doctest::Approx(28.5).epsilon(1e-13));
      CHECK(m.vertices[e.v1].x == doctest::Approx(28.5).epsilon(1e-13));
    }
    if (e.tag == BoundaryTag::dirichlet) saw_dirichlet = true;
  }
  CHECK(saw_neumann);
  CHECK(saw_dirichlet);
  // obstacle walls are dirichlet: find an edge on x in [0,1], y = 0.5
  bool found_wall = false;
  for (const auto& e : m.edges) {
    const Vec2 mid = m.edge_midpoint(static_cast<int>(&e - m.edges.data()));
    if (std::abs(mid.y - 0.5) < 1e-12 && mid.x > 0.0 && mid.x < 1.0)
      if (e.tag == BoundaryTag::dirichlet) found_wall = true;
  }
  CHECK(found_wall);
}

TEST_CASE("greedy bulk marking picks the documented minimal set") {
  // indicators (squared): total 100
  const std::vector<double> eta{36.0, 1.0, 25.0, 16.0, 4.0, 9.0, 9.0};
  // theta=0.5 -> need 50: pick 36, then 25 -> 61
  CHECK(dorfler_mark(eta, 0.5) == std::vector<int>{0, 2});
  // theta=0.62 -> 36+25=61 < 62, add 16 -> 77
  CHECK(dorfler_mark(eta, 0.62) == std::vector<int>{0, 2, 3});
  // ties broken by lower id: theta just above (36+25+16+9)/100
  CHECK(dorfler_mark(eta, 0.87) == std::vector<int>{0, 2, 3, 5, 6});
  // theta=1 marks everything
  CHECK(dorfler_mark(eta, 1.0).size() == eta.size());
  CHECK_THROWS(dorfler_mark(eta, 0.0));
  CHECK_THROWS(dorfler_mark(eta, 1.5));
}

TEST_CASE("mesh json round-trip preserves the refinement state") {
  QuadTreeMesh m = build_initial_mesh(unit_square());
  m = refine(m, {0, 3});
  m = refine(m, {2});
  m.check_invariants();

  const std::string text = mesh_to_json(m);
  const QuadTreeMesh r = mesh_from_json(text);
  r.check_invariants();
  REQUIRE(r.n_elements() == m.n_elements());
  REQUIRE(r.n_vertices() == m.n_vertices());
  REQUIRE(r.n_edges() == m.n_edges());
  for (size_t k = 0; k < m.cells.size(); ++k) {
    CHECK(r.cells[k].ax == m.cells[k].ax);
    CHECK(r.cells[k].ay == m.cells[k].ay);
    CHECK(r.cells[k].level == m.cells[k].level);
  }
  for (size_t v = 0; v < m.n_vertices(); ++v) {
    CHECK(r.vertices[v].x == m.vertices[v].x);
    CHECK(r.vertices[v].y == m.vertices[v].y);
  }

  const std::string path = "roundtrip_mesh_test.json";
  save_mesh(m, path);
  const QuadTreeMesh s = load_mesh(path);
  CHECK(s.n_elements() == m.n_elements());
  std::remove(path.c_str());
}

TEST_CASE("geometry json round-trip") {
  const GeometrySpec a = unit_square(0.25);
  const GeometrySpec b = ChannelGeometry{};
  for (const auto& g : {a, b}) {
    const GeometrySpec r = geometry_from_json(geometry_to_json(g));
    CHECK(g.index() == r.index());
  }
}

TEST_CASE("outward normals point away from the element") {
  QuadTreeMesh m = build_initial_mesh(unit_square());
  m = refine(m, {1});
  m.check_invariants();
  for (size_t k = 0; k < m.n_elements(); ++k) {
    const auto loop = m.element_loop(static_cast<int>(k));
    const int n = static_cast<int>(loop.size());
    const Vec2 c = m.elements[k].centroid;
    for (int j = 0; j < n; ++j) {
      const Vec2 nrm = m.outward_normal(static_cast<int>(k), j);
      const Vec2 mid = (loop[j] + loop[(j + 1) % n]) * 0.5;
      CHECK(nrm.norm() == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(nrm.dot(mid - c) > 0.0);
    }
  }
}
