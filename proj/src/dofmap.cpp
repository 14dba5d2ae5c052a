#include "dpg/dofmap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpg/basis.hpp"
#include "dpg/error.hpp"

namespace dpg {

namespace {

Point lerp(Point a, Point b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }

DofMap build_field_map(const QuadMesh& mesh, SpaceKind kind, int degree) {
  DofMap map;
  map.kind = kind;
  map.degree = degree;
  const int n1 = degree + 1;
  map.dofs_per_cell = n1 * n1;
  if (kind == SpaceKind::FieldVector) map.dofs_per_cell *= 2;
  if (kind == SpaceKind::BrokenTest) map.dofs_per_cell *= 3;
  map.cell_offset.assign(mesh.cells().size(), -1);
  int next = 0;
  for (int c : mesh.active_cells()) {
    map.cell_offset[c] = next;
    next += map.dofs_per_cell;
  }
  map.n_dofs = next;
  return map;
}

DofMap build_continuous_trace(const QuadMesh& mesh, int degree, bool boundary_constraints) {
  const Skeleton& sk = mesh.skeleton();
  const auto& verts = mesh.vertices();
  const LagrangeBasis1D line(degree);
  const auto& nodes = line.nodes();
  const int n_interior = degree - 1;

  DofMap map;
  map.kind = SpaceKind::TraceContinuous;
  map.degree = degree;
  map.vertex_dof.assign(verts.size(), -1);
  int next = 0;
  std::vector<char> used(verts.size(), 0);
  for (const auto& e : sk.edges) used[e.v0] = used[e.v1] = 1;
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (!used[v]) continue;
    map.vertex_dof[v] = next++;
    map.dof_points.push_back(verts[v]);
  }
  map.edge_offset.resize(sk.edges.size());
  for (std::size_t e = 0; e < sk.edges.size(); ++e) {
    map.edge_offset[e] = next;
    next += n_interior;
    for (int m = 1; m <= n_interior; ++m)
      map.dof_points.push_back(lerp(verts[sk.edges[e].v0], verts[sk.edges[e].v1], nodes[m]));
  }
  map.hanging_offset.resize(sk.hanging.size());
  for (std::size_t h = 0; h < sk.hanging.size(); ++h) {
    map.hanging_offset[h] = next;
    next += n_interior;
    for (int m = 1; m <= n_interior; ++m)
      map.dof_points.push_back(lerp(verts[sk.hanging[h].v0], verts[sk.hanging[h].v1], nodes[m]));
  }
  map.n_dofs = next;
  map.on_boundary.assign(next, 0);

  // Hanging sides: the halves' interior dofs and the midpoint vertex follow the
  // coarse polynomial.
  for (std::size_t h = 0; h < sk.hanging.size(); ++h) {
    const HangingSide& hs = sk.hanging[h];
    std::vector<int> masters;
    masters.push_back(map.vertex_dof[hs.v0]);
    for (int m = 0; m < n_interior; ++m) masters.push_back(map.hanging_offset[h] + m);
    masters.push_back(map.vertex_dof[hs.v1]);
    for (int half = 0; half < 2; ++half) {
      const SkeletonEdge& e = sk.edges[hs.halves[half]];
      for (int m = 1; m <= degree; ++m) {
        int slave;
        if (m < degree) {
          slave = map.edge_offset[hs.halves[half]] + (m - 1);
        } else if (half == 0) {
          slave = map.vertex_dof[e.v1];
        } else {
          continue;
        }
        const double s = 0.5 * (half + nodes[m]);
        ConstraintLine line_c;
        line_c.dof = slave;
        for (int i = 0; i <= degree; ++i) {
          const double c = line.value(i, s);
          if (std::abs(c) > 1e-14) line_c.entries.emplace_back(masters[i], c);
        }
        map.constraints.push_back(std::move(line_c));
      }
    }
  }

  if (boundary_constraints) {
    for (std::size_t e = 0; e < sk.edges.size(); ++e) {
      const SkeletonEdge& edge = sk.edges[e];
      if (edge.boundary != BoundaryKind::Dirichlet) continue;
      map.on_boundary[map.vertex_dof[edge.v0]] = 1;
      map.on_boundary[map.vertex_dof[edge.v1]] = 1;
      for (int m = 0; m < n_interior; ++m) map.on_boundary[map.edge_offset[e] + m] = 1;
    }
    for (int d = 0; d < map.n_dofs; ++d)
      if (map.on_boundary[d]) map.constraints.push_back({d, {}, 0.0});
  }
  std::sort(map.constraints.begin(), map.constraints.end(),
            [](const auto& a, const auto& b) { return a.dof < b.dof; });
  map.mesh_generation = mesh.generation();
  return map;
}

DofMap build_edgewise_trace(const QuadMesh& mesh, int degree, bool boundary_constraints) {
  const Skeleton& sk = mesh.skeleton();
  const auto& verts = mesh.vertices();
  const LagrangeBasis1D line(degree);
  DofMap map;
  map.kind = SpaceKind::TraceEdgewise;
  map.degree = degree;
  map.edge_offset.resize(sk.edges.size());
  int next = 0;
  for (std::size_t e = 0; e < sk.edges.size(); ++e) {
    map.edge_offset[e] = next;
    next += degree + 1;
    for (double t : line.nodes())
      map.dof_points.push_back(lerp(verts[sk.edges[e].v0], verts[sk.edges[e].v1], t));
  }
  map.n_dofs = next;
  map.on_boundary.assign(next, 0);
  if (boundary_constraints) {
    for (std::size_t e = 0; e < sk.edges.size(); ++e) {
      if (sk.edges[e].boundary != BoundaryKind::Neumann) continue;
      for (int m = 0; m <= degree; ++m) {
        map.on_boundary[map.edge_offset[e] + m] = 1;
        map.constraints.push_back({map.edge_offset[e] + m, {}, 0.0});
      }
    }
  }
  map.mesh_generation = mesh.generation();
  return map;
}

}  // namespace

DofMap build_dofmap(const QuadMesh& mesh, SpaceKind kind, int degree, bool boundary_constraints) {
  switch (kind) {
    case SpaceKind::FieldScalar:
    case SpaceKind::FieldVector:
    case SpaceKind::BrokenTest: {
      if (degree < 0) throw InputError("build_dofmap: field degree must be >= 0");
      DofMap map = build_field_map(mesh, kind, degree);
      map.mesh_generation = mesh.generation();
      return map;
    }
    case SpaceKind::TraceContinuous:
      if (degree < 1) throw InputError("build_dofmap: trace degree must be >= 1");
      return build_continuous_trace(mesh, degree, boundary_constraints);
    case SpaceKind::TraceEdgewise:
      if (degree < 1) throw InputError("build_dofmap: trace degree must be >= 1");
      return build_edgewise_trace(mesh, degree, boundary_constraints);
  }
  throw InputError("build_dofmap: unknown space kind");
}

std::vector<int> side_trace_dofs(const QuadMesh& mesh, const DofMap& map, int cell, int side) {
  const Skeleton& sk = mesh.skeleton();
  const CellSide& cs = sk.cell_sides[cell][side];
  const int n_interior = map.degree - 1;
  std::vector<int> dofs;
  dofs.reserve(map.degree + 1);
  int v0, v1, first;
  if (cs.hanging >= 0) {
    const HangingSide& h = sk.hanging[cs.hanging];
    v0 = h.v0;
    v1 = h.v1;
    first = map.hanging_offset[cs.hanging];
  } else {
    const SkeletonEdge& e = sk.edges[cs.edges[0]];
    v0 = e.v0;
    v1 = e.v1;
    first = map.edge_offset[cs.edges[0]];
  }
  dofs.push_back(map.vertex_dof[v0]);
  for (int m = 0; m < n_interior; ++m) dofs.push_back(first + m);
  dofs.push_back(map.vertex_dof[v1]);
  return dofs;
}

std::vector<int> edge_trace_dofs(const DofMap& map, int edge) {
  std::vector<int> dofs(map.degree + 1);
  for (int m = 0; m <= map.degree; ++m) dofs[m] = map.edge_offset[edge] + m;
  return dofs;
}

Spaces build_spaces(const QuadMesh& mesh, int p, int dp) {
  if (p < 0) throw InputError("build_spaces: p must be >= 0");
  if (dp < 1) throw InputError("build_spaces: enrichment must be >= 1");
  Spaces s;
  s.p = p;
  s.dp = dp;
  s.u = build_dofmap(mesh, SpaceKind::FieldScalar, p);
  s.sigma = build_dofmap(mesh, SpaceKind::FieldVector, p);
  s.hat_u = build_dofmap(mesh, SpaceKind::TraceContinuous, p + 1);
  s.hat_sigma = build_dofmap(mesh, SpaceKind::TraceEdgewise, p + 1);
  s.offset[0] = 0;
  s.offset[1] = s.u.n_dofs;
  s.offset[2] = s.offset[1] + s.sigma.n_dofs;
  s.offset[3] = s.offset[2] + s.hat_u.n_dofs;
  s.offset[4] = s.offset[3] + s.hat_sigma.n_dofs;
  s.mesh_generation = mesh.generation();
  return s;
}

ElementDofs element_dofs(const QuadMesh& mesh, const Spaces& spaces, int cell) {
  if (spaces.mesh_generation != mesh.generation())
    throw UsageError("element_dofs: spaces were built on a different mesh");
  ElementDofs ed;
  ed.cell = cell;
  const int nu = spaces.u.dofs_per_cell;
  ed.n_u = nu;
  ed.n_sigma = 2 * nu;
  ed.global.reserve(3 * nu + 8 * (spaces.trace_degree() + 1));
  for (int i = 0; i < nu; ++i) ed.global.push_back(spaces.offset[0] + spaces.u.cell_offset[cell] + i);
  for (int i = 0; i < 2 * nu; ++i)
    ed.global.push_back(spaces.offset[1] + spaces.sigma.cell_offset[cell] + i);

  auto local_of = [&ed](int begin, int g) {
    for (int i = begin; i < static_cast<int>(ed.global.size()); ++i)
      if (ed.global[i] == g) return i;
    ed.global.push_back(g);
    return static_cast<int>(ed.global.size()) - 1;
  };

  const int hat_u_begin = ed.size();
  for (int side = 0; side < 4; ++side) {
    for (int d : side_trace_dofs(mesh, spaces.hat_u, cell, side))
      ed.side_hat_u[side].push_back(local_of(hat_u_begin, spaces.offset[2] + d));
  }
  ed.n_hat_u = ed.size() - hat_u_begin;

  const int hat_s_begin = ed.size();
  const Skeleton& sk = mesh.skeleton();
  for (int side = 0; side < 4; ++side) {
    const CellSide& cs = sk.cell_sides[cell][side];
    if (cs.n_edges < 1) throw Error("element_dofs: cell side without skeleton edge");
    for (int k = 0; k < cs.n_edges; ++k) {
      ElementDofs::SubEdge sub;
      sub.edge = cs.edges[k];
      sub.part = cs.n_edges == 1 ? 0 : k + 1;
      for (int d : edge_trace_dofs(spaces.hat_sigma, sub.edge))
        sub.columns.push_back(local_of(hat_s_begin, spaces.offset[3] + d));
      ed.side_hat_sigma[side].push_back(std::move(sub));
    }
  }
  ed.n_hat_sigma = ed.size() - hat_s_begin;
  return ed;
}

}  // namespace dpg
