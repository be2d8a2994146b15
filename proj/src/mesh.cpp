#include "vemns/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace vemns {

namespace {

constexpr int64_t kRoot = int64_t{1} << QuadTreeMesh::kRootBits;
constexpr int kMaxLevel = 36;

struct CellKey {
  int64_t ax, ay;
  int level;
  bool operator==(const CellKey& o) const {
    return ax == o.ax && ay == o.ay && level == o.level;
  }
};

struct CellKeyHash {
  size_t operator()(const CellKey& k) const {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (uint64_t v : {static_cast<uint64_t>(k.ax), static_cast<uint64_t>(k.ay),
                       static_cast<uint64_t>(k.level)}) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
  }
};

using CellSet = std::unordered_map<CellKey, int, CellKeyHash>;  // -> any payload

// Integer description of the domain used for exact boundary classification.
struct LatticeDomain {
  int64_t nx_ticks = 0, ny_ticks = 0;  // outer box in ticks
  bool has_hole = false;
  int64_t hx0 = 0, hx1 = 0, hy0 = 0, hy1 = 0;  // obstacle box in ticks
};

LatticeDomain lattice_domain(const GeometrySpec& geo) {
  LatticeDomain d;
  if (std::holds_alternative<RectangleGeometry>(geo)) {
    const auto& r = std::get<RectangleGeometry>(geo);
    d.nx_ticks = llround((r.x1 - r.x0) / r.edge) * kRoot;
    d.ny_ticks = llround((r.y1 - r.y0) / r.edge) * kRoot;
  } else {
    const auto& c = std::get<ChannelGeometry>(geo);
    const double e = c.edge();
    d.nx_ticks = llround((c.upstream + c.downstream) / e) * kRoot;
    d.ny_ticks = llround(c.height / e) * kRoot;
    d.has_hole = true;
    d.hx0 = llround((c.cx - c.side / 2 - c.xmin()) / e) * kRoot;
    d.hx1 = llround((c.cx + c.side / 2 - c.xmin()) / e) * kRoot;
    d.hy0 = llround((c.cy - c.side / 2 + c.height / 2) / e) * kRoot;
    d.hy1 = llround((c.cy + c.side / 2 + c.height / 2) / e) * kRoot;
  }
  return d;
}

Vec2 lattice_origin(const GeometrySpec& geo) {
  if (std::holds_alternative<RectangleGeometry>(geo)) {
    const auto& r = std::get<RectangleGeometry>(geo);
    return {r.x0, r.y0};
  }
  const auto& c = std::get<ChannelGeometry>(geo);
  return {c.xmin(), -c.height / 2};
}

double lattice_tick(const GeometrySpec& geo) {
  if (std::holds_alternative<RectangleGeometry>(geo))
    return std::get<RectangleGeometry>(geo).edge / static_cast<double>(kRoot);
  return std::get<ChannelGeometry>(geo).edge() / static_cast<double>(kRoot);
}

// Assemble vertices/elements/edges for a closed (2:1 balanced) cell set.
QuadTreeMesh expand_cells(const GeometrySpec& geo, std::vector<Cell> cells) {
  QuadTreeMesh m;
  m.geometry = geo;
  m.origin = lattice_origin(geo);
  m.tick = lattice_tick(geo);
  m.cells = std::move(cells);

  const LatticeDomain dom = lattice_domain(geo);

  CellSet set;
  set.reserve(m.cells.size() * 2);
  for (size_t i = 0; i < m.cells.size(); ++i)
    set.emplace(CellKey{m.cells[i].ax, m.cells[i].ay, m.cells[i].level},
                static_cast<int>(i));

  struct TickHash {
    size_t operator()(const std::pair<int64_t, int64_t>& p) const {
      uint64_t h = static_cast<uint64_t>(p.first) * 0x9e3779b97f4a7c15ull;
      h ^= static_cast<uint64_t>(p.second) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return static_cast<size_t>(h);
    }
  };
  std::unordered_map<std::pair<int64_t, int64_t>, int, TickHash> vertex_of;
  vertex_of.reserve(m.cells.size() * 4);
  auto vertex_id = [&](int64_t tx, int64_t ty) {
    auto it = vertex_of.find({tx, ty});
    if (it != vertex_of.end()) return it->second;
    const int id = static_cast<int>(m.vertices.size());
    vertex_of.emplace(std::make_pair(tx, ty), id);
    m.vertices.push_back(
        {m.origin.x + tx * m.tick, m.origin.y + ty * m.tick});
    m.vertex_ticks.emplace_back(tx, ty);
    return id;
  };

  auto has_cell = [&](int64_t ax, int64_t ay, int level) {
    return set.find(CellKey{ax, ay, level}) != set.end();
  };

  // is the side of cell (ax,ay,level) in direction d split by finer neighbors?
  // d: 0=+x, 1=+y, 2=-x, 3=-y
  auto side_split = [&](const Cell& c, int d) {
    const int64_t s = kRoot >> c.level;
    const int64_t s2 = s / 2;
    int64_t bx, by;  // anchor of the first finer neighbor candidate
    int64_t ox, oy;  // offset to the second candidate
    switch (d) {
      case 0: bx = c.ax + s; by = c.ay; ox = 0; oy = s2; break;
      case 1: bx = c.ax; by = c.ay + s; ox = s2; oy = 0; break;
      case 2: bx = c.ax - s2; by = c.ay; ox = 0; oy = s2; break;
      default: bx = c.ax; by = c.ay - s2; ox = s2; oy = 0; break;
    }
    return has_cell(bx, by, c.level + 1) || has_cell(bx + ox, by + oy, c.level + 1);
  };

  std::unordered_map<uint64_t, int> edge_of;  // packed vertex pair -> id
  auto edge_id = [&](int va, int vb, int elem, int& fwd) {
    const int lo = std::min(va, vb), hi = std::max(va, vb);
    const uint64_t key = (static_cast<uint64_t>(lo) << 32) | static_cast<uint64_t>(hi);
    auto it = edge_of.find(key);
    if (it == edge_of.end()) {
      const int id = static_cast<int>(m.edges.size());
      MeshEdge e;
      e.v0 = va;
      e.v1 = vb;
      e.elem_left = elem;
      m.edges.push_back(e);
      edge_of.emplace(key, id);
      fwd = 1;
      return id;
    }
    MeshEdge& e = m.edges[it->second];
    if (e.v0 == va && e.v1 == vb) {
      if (e.elem_left != -1) throw std::logic_error("edge traversed twice forward");
      e.elem_left = elem;
      fwd = 1;
    } else {
      if (e.elem_right != -1) throw std::logic_error("edge traversed twice backward");
      e.elem_right = elem;
      fwd = 0;
    }
    return it->second;
  };

  m.elements.resize(m.cells.size());
  for (size_t k = 0; k < m.cells.size(); ++k) {
    const Cell& c = m.cells[k];
    const int64_t s = kRoot >> c.level;
    const int64_t cx[4] = {c.ax, c.ax + s, c.ax + s, c.ax};
    const int64_t cy[4] = {c.ay, c.ay, c.ay + s, c.ay + s};
    MeshElement& el = m.elements[k];
    el.level = c.level;

    std::vector<int> loop;
    for (int d = 0; d < 4; ++d) {
      // side d runs from corner d to corner (d+1)%4; direction index matches
      // side_split: corner0->corner1 is -y side? map: side between corners
      // 0-1 is the bottom (-y), 1-2 right (+x), 2-3 top (+y), 3-0 left (-x).
      static const int dir_of_side[4] = {3, 0, 1, 2};
      loop.push_back(vertex_id(cx[d], cy[d]));
      if (side_split(c, dir_of_side[d])) {
        const int64_t mx = (cx[d] + cx[(d + 1) % 4]) / 2;
        const int64_t my = (cy[d] + cy[(d + 1) % 4]) / 2;
        loop.push_back(vertex_id(mx, my));
      }
    }
    el.vertices = loop;

    const int n = static_cast<int>(loop.size());
    el.edges.resize(n);
    el.edge_fwd.resize(n);
    for (int j = 0; j < n; ++j) {
      int fwd = 0;
      el.edges[j] = edge_id(loop[j], loop[(j + 1) % n], static_cast<int>(k), fwd);
      el.edge_fwd[j] = static_cast<uint8_t>(fwd);
    }

    std::vector<Vec2> pts = m.element_loop(static_cast<int>(k));
    el.area = polygon_area(pts);
    el.centroid = polygon_centroid(pts);
    el.h = polygon_diameter(pts);
  }

  // boundary tags
  const bool is_channel = std::holds_alternative<ChannelGeometry>(geo);
  for (MeshEdge& e : m.edges) {
    if (e.elem_right != -1 && e.elem_left != -1) continue;
    const auto [x0, y0] = m.vertex_ticks[e.v0];
    const auto [x1, y1] = m.vertex_ticks[e.v1];
    if (is_channel && x0 == dom.nx_ticks && x1 == dom.nx_ticks)
      e.tag = BoundaryTag::neumann;  // outflow
    else
      e.tag = BoundaryTag::dirichlet;
  }
  return m;
}

}  // namespace

std::vector<Vec2> QuadTreeMesh::element_loop(int k) const {
  std::vector<Vec2> pts;
  pts.reserve(elements[k].vertices.size());
  for (int v : elements[k].vertices) pts.push_back(vertices[v]);
  return pts;
}

Vec2 QuadTreeMesh::outward_normal(int k, int j) const {
  const MeshElement& el = elements[k];
  const int n = static_cast<int>(el.vertices.size());
  const Vec2 a = vertices[el.vertices[j]];
  const Vec2 b = vertices[el.vertices[(j + 1) % n]];
  Vec2 t = b - a;
  return t.perp() / t.norm();
}

int QuadTreeMesh::max_level() const {
  int l = 0;
  for (const auto& e : elements) l = std::max(l, e.level);
  return l;
}

double QuadTreeMesh::total_area() const {
  double a = 0.0;
  for (const auto& e : elements) a += e.area;
  return a;
}

void QuadTreeMesh::check_invariants() const {
  for (size_t k = 0; k < elements.size(); ++k) {
    const MeshElement& el = elements[k];
    const size_t n = el.vertices.size();
    if (n < 4 || n > 8) throw std::logic_error("element vertex count out of range");
    if (el.area <= 0.0) throw std::logic_error("element not CCW / degenerate");
    // each geometric side carries at most one hanging node: corners are the
    // vertices whose ticks match the cell corners
    const Cell& c = cells[k];
    const int64_t s = kRoot >> c.level;
    int corners = 0;
    for (int v : el.vertices) {
      const auto [tx, ty] = vertex_ticks[v];
      const bool cx = (tx == c.ax || tx == c.ax + s);
      const bool cy = (ty == c.ay || ty == c.ay + s);
      if (cx && cy) ++corners;
    }
    if (corners != 4) throw std::logic_error("cell corners missing from loop");
    // loop size <= 8 and corners == 4 means <= 1 hanging node per side as long
    // as consecutive corners are never separated by 2+ hanging vertices
    for (size_t j = 0; j < n; ++j) {
      const auto [ax, ay] = vertex_ticks[el.vertices[j]];
      const auto [bx, by] = vertex_ticks[el.vertices[(j + 1) % n]];
      const auto [ex, ey] = vertex_ticks[el.vertices[(j + 2) % n]];
      const bool mid_a = !((ax == c.ax || ax == c.ax + s) && (ay == c.ay || ay == c.ay + s));
      const bool mid_b = !((bx == c.ax || bx == c.ax + s) && (by == c.ay || by == c.ay + s));
      (void)ex; (void)ey;
      if (mid_a && mid_b) throw std::logic_error("side with more than one hanging node");
    }
  }
  for (size_t i = 0; i < edges.size(); ++i) {
    const MeshEdge& e = edges[i];
    if (e.elem_left == -1) throw std::logic_error("edge without forward element");
    const bool interior = e.elem_right != -1;
    if (interior) {
      const int dl = elements[e.elem_left].level;
      const int dr = elements[e.elem_right].level;
      if (std::abs(dl - dr) > 1) throw std::logic_error("level jump > 1 across edge");
      if (e.tag != BoundaryTag::interior) throw std::logic_error("interior edge tagged as boundary");
    } else if (e.tag == BoundaryTag::interior) {
      throw std::logic_error("boundary edge tagged interior");
    }
  }
  // element-side traversal direction must be consistent with stored flags
  for (size_t k = 0; k < elements.size(); ++k) {
    const MeshElement& el = elements[k];
    const int n = static_cast<int>(el.vertices.size());
    for (int j = 0; j < n; ++j) {
      const MeshEdge& e = edges[el.edges[j]];
      const int va = el.vertices[j], vb = el.vertices[(j + 1) % n];
      if (el.edge_fwd[j]) {
        if (!(e.v0 == va && e.v1 == vb && e.elem_left == static_cast<int>(k)))
          throw std::logic_error("edge orientation bookkeeping corrupt");
      } else {
        if (!(e.v0 == vb && e.v1 == va && e.elem_right == static_cast<int>(k)))
          throw std::logic_error("edge orientation bookkeeping corrupt");
      }
    }
  }
}

QuadTreeMesh build_initial_mesh(const GeometrySpec& geometry) {
  std::visit([](const auto& g) { validate(g); }, geometry);
  const LatticeDomain dom = lattice_domain(geometry);
  const int64_t nx = dom.nx_ticks / kRoot;
  const int64_t ny = dom.ny_ticks / kRoot;
  std::vector<Cell> cells;
  cells.reserve(static_cast<size_t>(nx * ny));
  for (int64_t j = 0; j < ny; ++j) {
    for (int64_t i = 0; i < nx; ++i) {
      const int64_t ax = i * kRoot, ay = j * kRoot;
      if (dom.has_hole && ax >= dom.hx0 && ax + kRoot <= dom.hx1 && ay >= dom.hy0 &&
          ay + kRoot <= dom.hy1)
        continue;
      cells.push_back({ax, ay, 0});
    }
  }
  return expand_cells(geometry, std::move(cells));
}

QuadTreeMesh refine(const QuadTreeMesh& mesh, const std::vector<int>& marked) {
  CellSet set;
  set.reserve(mesh.cells.size() * 2);
  for (const Cell& c : mesh.cells) set.emplace(CellKey{c.ax, c.ay, c.level}, 1);

  // split with recursive closure: before splitting, any strictly coarser
  // side-neighbor must be split first so level jumps stay <= 1
  std::function<void(CellKey)> split = [&](CellKey c) {
    auto it = set.find(c);
    if (it == set.end()) return;  // already split by an earlier cascade
    if (c.level >= kMaxLevel) throw std::runtime_error("refinement level cap exceeded");
    if (c.level >= 1) {
      const int64_t s = kRoot >> c.level;
      const int64_t S = 2 * s;
      const int64_t ax_al = c.ax & ~(S - 1);
      const int64_t ay_al = c.ay & ~(S - 1);
      // a strictly coarser side-neighbor exists only when its face lines up
      // with a level-(l-1) anchor; check each of the four sides
      if ((c.ax + s) % S == 0 && set.count(CellKey{c.ax + s, ay_al, c.level - 1}))
        split(CellKey{c.ax + s, ay_al, c.level - 1});
      if (c.ax % S == 0 && set.count(CellKey{c.ax - S, ay_al, c.level - 1}))
        split(CellKey{c.ax - S, ay_al, c.level - 1});
      if ((c.ay + s) % S == 0 && set.count(CellKey{ax_al, c.ay + s, c.level - 1}))
        split(CellKey{ax_al, c.ay + s, c.level - 1});
      if (c.ay % S == 0 && set.count(CellKey{ax_al, c.ay - S, c.level - 1}))
        split(CellKey{ax_al, c.ay - S, c.level - 1});
    }
    set.erase(c);
    const int64_t h = (kRoot >> c.level) / 2;
    set.emplace(CellKey{c.ax, c.ay, c.level + 1}, 1);
    set.emplace(CellKey{c.ax + h, c.ay, c.level + 1}, 1);
    set.emplace(CellKey{c.ax, c.ay + h, c.level + 1}, 1);
    set.emplace(CellKey{c.ax + h, c.ay + h, c.level + 1}, 1);
  };

  for (int idx : marked) {
    if (idx < 0 || idx >= static_cast<int>(mesh.cells.size()))
      throw std::out_of_range("marked element index out of range");
    const Cell& c = mesh.cells[idx];
    split(CellKey{c.ax, c.ay, c.level});
  }

  // rebuild deterministic cell order: old order, split cells replaced by
  // their surviving descendants depth-first
  std::vector<Cell> out;
  out.reserve(set.size());
  std::function<void(CellKey)> emit = [&](CellKey c) {
    if (set.count(c)) {
      out.push_back({c.ax, c.ay, c.level});
      return;
    }
    const int64_t h = (kRoot >> c.level) / 2;
    emit(CellKey{c.ax, c.ay, c.level + 1});
    emit(CellKey{c.ax + h, c.ay, c.level + 1});
    emit(CellKey{c.ax, c.ay + h, c.level + 1});
    emit(CellKey{c.ax + h, c.ay + h, c.level + 1});
  };
  for (const Cell& c : mesh.cells) emit(CellKey{c.ax, c.ay, c.level});
  if (out.size() != set.size()) throw std::logic_error("cell bookkeeping mismatch");
  return expand_cells(mesh.geometry, std::move(out));
}

QuadTreeMesh refine_uniform(const QuadTreeMesh& mesh) {
  std::vector<int> all(mesh.n_elements());
  std::iota(all.begin(), all.end(), 0);
  return refine(mesh, all);
}

std::vector<int> dorfler_mark(const std::vector<double>& eta_sq, double theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("dorfler_mark: theta must be in (0, 1]");
  std::vector<int> order(eta_sq.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (eta_sq[a] != eta_sq[b]) return eta_sq[a] > eta_sq[b];
    return a < b;
  });
  const double total = std::accumulate(eta_sq.begin(), eta_sq.end(), 0.0);
  std::vector<int> marked;
  double acc = 0.0;
  for (int idx : order) {
    if (acc >= theta * total) break;
    marked.push_back(idx);
    acc += eta_sq[idx];
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

std::string geometry_to_json(const GeometrySpec& g) {
  nlohmann::json j;
  if (std::holds_alternative<RectangleGeometry>(g)) {
    const auto& r = std::get<RectangleGeometry>(g);
    j = {{"kind", "rectangle"}, {"x0", r.x0}, {"y0", r.y0},
         {"x1", r.x1}, {"y1", r.y1}, {"edge", r.edge}};
  } else {
    const auto& c = std::get<ChannelGeometry>(g);
    j = {{"kind", "channel"},   {"height", c.height},
         {"side", c.side},      {"cx", c.cx},
         {"cy", c.cy},          {"upstream", c.upstream},
         {"downstream", c.downstream}};
  }
  return j.dump();
}

GeometrySpec geometry_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "rectangle") {
    RectangleGeometry r;
    r.x0 = j.at("x0").get<double>();
    r.y0 = j.at("y0").get<double>();
    r.x1 = j.at("x1").get<double>();
    r.y1 = j.at("y1").get<double>();
    r.edge = j.at("edge").get<double>();
    validate(r);
    return r;
  }
  if (kind == "channel") {
    ChannelGeometry c;
    c.height = j.at("height").get<double>();
    c.side = j.at("side").get<double>();
    c.cx = j.at("cx").get<double>();
    c.cy = j.at("cy").get<double>();
    c.upstream = j.at("upstream").get<double>();
    c.downstream = j.at("downstream").get<double>();
    validate(c);
    return c;
  }
  throw std::invalid_argument("geometry: unknown kind '" + kind + "'");
}

std::string mesh_to_json(const QuadTreeMesh& mesh) {
  nlohmann::json j;
  j["format"] = "vemns-mesh";
  j["version"] = 1;
  j["geometry"] = nlohmann::json::parse(geometry_to_json(mesh.geometry));
  nlohmann::json cells = nlohmann::json::array();
  for (const Cell& c : mesh.cells)
    cells.push_back(nlohmann::json::array({c.ax, c.ay, c.level}));
  j["cells"] = std::move(cells);
  j["counts"] = {{"vertices", mesh.n_vertices()},
                 {"elements", mesh.n_elements()},
                 {"edges", mesh.n_edges()}};
  return j.dump();
}

QuadTreeMesh mesh_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("format").get<std::string>() != "vemns-mesh")
    throw std::invalid_argument("mesh: unexpected format tag");
  if (j.at("version").get<int>() != 1)
    throw std::invalid_argument("mesh: unsupported version");
  GeometrySpec geo = geometry_from_json(j.at("geometry").dump());
  std::vector<Cell> cells;
  for (const auto& c : j.at("cells"))
    cells.push_back({c.at(0).get<int64_t>(), c.at(1).get<int64_t>(), c.at(2).get<int>()});
  QuadTreeMesh m = expand_cells(geo, std::move(cells));
  if (j.contains("counts")) {
    const auto& cnt = j.at("counts");
    if (cnt.at("vertices").get<size_t>() != m.n_vertices() ||
        cnt.at("elements").get<size_t>() != m.n_elements() ||
        cnt.at("edges").get<size_t>() != m.n_edges())
      throw std::invalid_argument("mesh: stored counts disagree with cell expansion");
  }
  m.check_invariants();
  return m;
}

void save_mesh(const QuadTreeMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << mesh_to_json(mesh) << "\n";
}

QuadTreeMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return mesh_from_json(ss.str());
}

}  // namespace vemns
