#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace dpg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y].
struct Rect {
  Point lo;
  Point hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }
  Point center() const { return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)}; }
  bool contains(Point p, double tol = 0.0) const {
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol;
  }
};

enum class BoundaryKind { Interior, Dirichlet, Neumann };

/// Classifies a boundary edge from its midpoint.
using BoundaryRule = std::function<BoundaryKind(Point midpoint)>;

BoundaryRule all_dirichlet();

// Local side numbering of a cell: 0 bottom, 1 right, 2 top, 3 left.
inline constexpr int kBottom = 0;
inline constexpr int kRight = 1;
inline constexpr int kTop = 2;
inline constexpr int kLeft = 3;

/// Outward unit normal of local side `side` of any cell.
Point side_normal(int side);

struct Cell {
  // Counterclockwise from the lower-left corner.
  std::array<int, 4> vertices{};
  int level = 0;
  int parent = -1;
  // SW, SE, NE, NW; -1 when the cell has never been refined.
  std::array<int, 4> children{-1, -1, -1, -1};
  bool active = true;
  Rect box;
};

struct EdgeOrientation {
  int master = -1;
  Point normal;  // outward normal of the master cell
};

/// One segment of the finest partition of the active-cell boundaries.
struct SkeletonEdge {
  int v0 = -1;  // endpoint with the smaller running coordinate
  int v1 = -1;
  bool horizontal = false;
  // cells[0] is the master; cells[1] is the neighbour or -1 on the boundary.
  std::array<int, 2> cells{-1, -1};
  // Local side index of the edge within cells[0] / cells[1].
  std::array<int, 2> sides{-1, -1};
  BoundaryKind boundary = BoundaryKind::Interior;
  EdgeOrientation orientation;
  // Index into Skeleton::hanging when this edge is half of a coarse side.
  int hanging = -1;

  bool is_boundary() const { return cells[1] < 0; }
  /// +1 for the master cell, -1 for the neighbour.
  int sign_for(int cell) const { return cell == cells[0] ? 1 : -1; }
};

/// A side of a coarse cell that is split by a hanging vertex.
struct HangingSide {
  int cell = -1;
  int side = -1;
  int v0 = -1;
  int v1 = -1;
  int mid = -1;
  std::array<int, 2> halves{-1, -1};  // skeleton edges, lower half first
};

/// Per active cell and side: the skeleton edges covering it (one, or two when
/// the side carries a hanging vertex) and the hanging-side index if any.
struct CellSide {
  std::array<int, 2> edges{-1, -1};
  int n_edges = 0;
  int hanging = -1;
};

struct Skeleton {
  std::vector<SkeletonEdge> edges;
  std::vector<HangingSide> hanging;
  // Indexed by cell id; only entries of active cells are meaningful.
  std::vector<std::array<CellSide, 4>> cell_sides;
};

/// Hierarchical 1-irregular quadrilateral mesh over a rectangle.
///
/// Cells are never removed: refining a cell deactivates it and appends its four
/// children. The active skeleton is rebuilt after every refinement, and each
/// distinct mesh state carries a unique generation stamp.
class QuadMesh {
 public:
  QuadMesh() = default;

  const Rect& domain() const { return domain_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(int id) const { return cells_[id]; }
  const Skeleton& skeleton() const { return skeleton_; }
  const BoundaryRule& boundary_rule() const { return boundary_rule_; }
  std::uint64_t generation() const { return generation_; }

  /// Active cell ids in ascending order.
  const std::vector<int>& active_cells() const { return active_; }
  std::size_t n_active() const { return active_.size(); }
  int max_level() const;

  /// Active cell containing `p` (ties resolved towards the upper/right cell).
  int locate(Point p) const;

  /// Number of vertices lying strictly inside a coarse active side.
  int n_hanging_vertices() const { return static_cast<int>(skeleton_.hanging.size()); }

 private:
  friend QuadMesh create_rect_mesh(const Rect&, int, int, BoundaryRule);
  friend QuadMesh refine(const QuadMesh&, std::span<const int>);

  int vertex_at(Point p);
  void split(int cell);
  void refine_with_closure(int cell);
  void finalize();

  Rect domain_;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<Point> vertices_;
  std::map<std::pair<double, double>, int> vertex_index_;
  std::vector<Cell> cells_;
  std::vector<int> active_;
  Skeleton skeleton_;
  BoundaryRule boundary_rule_;
  std::uint64_t generation_ = 0;
};

/// Uniform nx-by-ny grid over `corners`; every cell active at level 0.
QuadMesh create_rect_mesh(const Rect& corners, int nx, int ny,
                          BoundaryRule boundary = all_dirichlet());

/// Isotropic refinement of the marked cells plus the closure that keeps the
/// mesh 1-irregular. Marked ids must be active.
QuadMesh refine(const QuadMesh& mesh, std::span<const int> marked);

const Skeleton& active_skeleton(const QuadMesh& mesh);

/// Checks that face-adjacent active cells differ by at most one level.
bool is_one_irregular(const QuadMesh& mesh);

}  // namespace dpg
