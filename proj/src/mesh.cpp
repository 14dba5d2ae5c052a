#include "dpg/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "dpg/error.hpp"

namespace dpg {

namespace {

std::uint64_t next_generation() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

// One side of an active cell lying on a grid line.
struct LineSegment {
  double s0;
  double s1;
  int cell;
  int side;
};

struct Line {
  // [0]: cells below/left of the line, [1]: cells above/right.
  std::array<std::vector<LineSegment>, 2> segments;
};

}  // namespace

BoundaryRule all_dirichlet() {
  return [](Point) { return BoundaryKind::Dirichlet; };
}

Point side_normal(int side) {
  switch (side) {
    case kBottom: return {0.0, -1.0};
    case kRight: return {1.0, 0.0};
    case kTop: return {0.0, 1.0};
    default: return {-1.0, 0.0};
  }
}

int QuadMesh::max_level() const {
  int level = 0;
  for (int c : active_) level = std::max(level, cells_[c].level);
  return level;
}

int QuadMesh::vertex_at(Point p) {
  auto [it, inserted] = vertex_index_.try_emplace({p.x, p.y}, static_cast<int>(vertices_.size()));
  if (inserted) vertices_.push_back(p);
  return it->second;
}

int QuadMesh::locate(Point p) const {
  const double hx = domain_.width() / nx_;
  const double hy = domain_.height() / ny_;
  int i = static_cast<int>(std::floor((p.x - domain_.lo.x) / hx));
  int j = static_cast<int>(std::floor((p.y - domain_.lo.y) / hy));
  i = std::clamp(i, 0, nx_ - 1);
  j = std::clamp(j, 0, ny_ - 1);
  int c = j * nx_ + i;
  while (!cells_[c].active) {
    const Point m = cells_[c].box.center();
    const bool east = p.x >= m.x;
    const bool north = p.y >= m.y;
    // children: SW, SE, NE, NW
    const int k = north ? (east ? 2 : 3) : (east ? 1 : 0);
    c = cells_[c].children[k];
  }
  return c;
}

void QuadMesh::split(int id) {
  const Rect box = cells_[id].box;
  const Point m = box.center();
  const int level = cells_[id].level + 1;
  const std::array<Rect, 4> boxes = {
      Rect{{box.lo.x, box.lo.y}, {m.x, m.y}},
      Rect{{m.x, box.lo.y}, {box.hi.x, m.y}},
      Rect{{m.x, m.y}, {box.hi.x, box.hi.y}},
      Rect{{box.lo.x, m.y}, {m.x, box.hi.y}},
  };
  for (int k = 0; k < 4; ++k) {
    Cell child;
    child.box = boxes[k];
    child.level = level;
    child.parent = id;
    child.vertices = {vertex_at(boxes[k].lo), vertex_at({boxes[k].hi.x, boxes[k].lo.y}),
                      vertex_at(boxes[k].hi), vertex_at({boxes[k].lo.x, boxes[k].hi.y})};
    cells_[id].children[k] = static_cast<int>(cells_.size());
    cells_.push_back(child);
  }
  cells_[id].active = false;
}

void QuadMesh::refine_with_closure(int id) {
  if (!cells_[id].active) return;
  for (int side = 0; side < 4; ++side) {
    const Rect box = cells_[id].box;
    const Point n = side_normal(side);
    const Point mid = {0.5 * (box.lo.x + box.hi.x) + 0.5 * n.x * box.width(),
                       0.5 * (box.lo.y + box.hi.y) + 0.5 * n.y * box.height()};
    const double off = 1e-6 * std::min(box.width(), box.height());
    const Point probe = {mid.x + n.x * off, mid.y + n.y * off};
    if (!domain_.contains(probe)) continue;
    const int neighbour = locate(probe);
    if (cells_[neighbour].level < cells_[id].level) refine_with_closure(neighbour);
  }
  split(id);
}

void QuadMesh::finalize() {
  active_.clear();
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c)
    if (cells_[c].active) active_.push_back(c);

  // Sweep every grid line carrying active-cell sides and cut it at all
  // breakpoints; each elementary piece covered by a cell becomes an edge.
  std::map<std::pair<int, double>, Line> lines;  // key: (0 = horizontal, 1 = vertical; coordinate)
  for (int c : active_) {
    const Rect& b = cells_[c].box;
    lines[{0, b.lo.y}].segments[1].push_back({b.lo.x, b.hi.x, c, kBottom});
    lines[{0, b.hi.y}].segments[0].push_back({b.lo.x, b.hi.x, c, kTop});
    lines[{1, b.lo.x}].segments[1].push_back({b.lo.y, b.hi.y, c, kLeft});
    lines[{1, b.hi.x}].segments[0].push_back({b.lo.y, b.hi.y, c, kRight});
  }

  skeleton_ = Skeleton{};
  skeleton_.cell_sides.assign(cells_.size(), {});
  for (auto& [key, line] : lines) {
    const bool horizontal = key.first == 0;
    const double coord = key.second;
    std::vector<double> cuts;
    for (const auto& side : line.segments)
      for (const auto& s : side) {
        cuts.push_back(s.s0);
        cuts.push_back(s.s1);
      }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (auto& side : line.segments)
      std::sort(side.begin(), side.end(), [](const auto& a, const auto& b) { return a.s0 < b.s0; });

    std::array<std::size_t, 2> cursor{0, 0};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k];
      const double b = cuts[k + 1];
      std::array<const LineSegment*, 2> cover{nullptr, nullptr};
      for (int s = 0; s < 2; ++s) {
        auto& segs = line.segments[s];
        while (cursor[s] < segs.size() && segs[cursor[s]].s1 <= a) ++cursor[s];
        if (cursor[s] < segs.size() && segs[cursor[s]].s0 <= a && segs[cursor[s]].s1 >= b)
          cover[s] = &segs[cursor[s]];
      }
      if (!cover[0] && !cover[1]) continue;

      SkeletonEdge e;
      e.horizontal = horizontal;
      const Point pa = horizontal ? Point{a, coord} : Point{coord, a};
      const Point pb = horizontal ? Point{b, coord} : Point{coord, b};
      e.v0 = vertex_index_.at({pa.x, pa.y});
      e.v1 = vertex_index_.at({pb.x, pb.y});
      if (cover[0] && cover[1]) {
        const int m = cover[0]->cell < cover[1]->cell ? 0 : 1;
        e.cells = {cover[m]->cell, cover[1 - m]->cell};
        e.sides = {cover[m]->side, cover[1 - m]->side};
        e.boundary = BoundaryKind::Interior;
      } else {
        const LineSegment* only = cover[0] ? cover[0] : cover[1];
        e.cells = {only->cell, -1};
        e.sides = {only->side, -1};
        const Point mid = {0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
        e.boundary = boundary_rule_(mid);
        if (e.boundary == BoundaryKind::Interior)
          throw InputError("boundary rule returned Interior for a boundary edge");
      }
      e.orientation = {e.cells[0], side_normal(e.sides[0])};
      const int id = static_cast<int>(skeleton_.edges.size());
      skeleton_.edges.push_back(e);
      for (int s = 0; s < 2; ++s) {
        if (e.cells[s] < 0) continue;
        CellSide& cs = skeleton_.cell_sides[e.cells[s]][e.sides[s]];
        if (cs.n_edges >= 2) throw Error("mesh is not 1-irregular: side split more than once");
        cs.edges[cs.n_edges++] = id;
      }
    }
  }

  for (int c : active_) {
    for (int side = 0; side < 4; ++side) {
      CellSide& cs = skeleton_.cell_sides[c][side];
      if (cs.n_edges != 2) continue;
      HangingSide h;
      h.cell = c;
      h.side = side;
      h.halves = cs.edges;
      h.v0 = skeleton_.edges[cs.edges[0]].v0;
      h.mid = skeleton_.edges[cs.edges[0]].v1;
      h.v1 = skeleton_.edges[cs.edges[1]].v1;
      cs.hanging = static_cast<int>(skeleton_.hanging.size());
      skeleton_.edges[cs.edges[0]].hanging = cs.hanging;
      skeleton_.edges[cs.edges[1]].hanging = cs.hanging;
      skeleton_.hanging.push_back(h);
    }
  }
  generation_ = next_generation();
}

QuadMesh create_rect_mesh(const Rect& corners, int nx, int ny, BoundaryRule boundary) {
  if (nx < 1 || ny < 1) throw InputError("create_rect_mesh: nx and ny must be at least 1");
  if (!(corners.width() > 0.0) || !(corners.height() > 0.0) || !std::isfinite(corners.area()))
    throw InputError("create_rect_mesh: degenerate rectangle");
  QuadMesh mesh;
  mesh.domain_ = corners;
  mesh.nx_ = nx;
  mesh.ny_ = ny;
  mesh.boundary_rule_ = boundary ? std::move(boundary) : all_dirichlet();
  const double hx = corners.width() / nx;
  const double hy = corners.height() / ny;
  auto xcoord = [&](int i) { return i == nx ? corners.hi.x : corners.lo.x + i * hx; };
  auto ycoord = [&](int j) { return j == ny ? corners.hi.y : corners.lo.y + j * hy; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Cell c;
      c.box = {{xcoord(i), ycoord(j)}, {xcoord(i + 1), ycoord(j + 1)}};
      c.vertices = {mesh.vertex_at(c.box.lo), mesh.vertex_at({c.box.hi.x, c.box.lo.y}),
                    mesh.vertex_at(c.box.hi), mesh.vertex_at({c.box.lo.x, c.box.hi.y})};
      mesh.cells_.push_back(c);
    }
  }
  mesh.finalize();
  return mesh;
}

QuadMesh refine(const QuadMesh& mesh, std::span<const int> marked) {
  for (int c : marked) {
    if (c < 0 || c >= static_cast<int>(mesh.cells_.size()) || !mesh.cells_[c].active)
      throw InputError("refine: cell " + std::to_string(c) + " is not active");
  }
  if (marked.empty()) return mesh;
  QuadMesh out = mesh;
  std::vector<int> order(marked.begin(), marked.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  for (int c : order) out.refine_with_closure(c);
  out.finalize();
  return out;
}

const Skeleton& active_skeleton(const QuadMesh& mesh) { return mesh.skeleton(); }

bool is_one_irregular(const QuadMesh& mesh) {
  for (const auto& e : mesh.skeleton().edges) {
    if (e.is_boundary()) continue;
    if (std::abs(mesh.cell(e.cells[0]).level - mesh.cell(e.cells[1]).level) > 1) return false;
  }
  return true;
}

}  // namespace dpg
