#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dpg/error.hpp"
#include "dpg/mesh.hpp"

namespace {

const dpg::Rect kUnit{{0.0, 0.0}, {1.0, 1.0}};

double active_area(const dpg::QuadMesh& mesh) {
  double a = 0.0;
  for (int c : mesh.active_cells()) a += mesh.cell(c).box.area();
  return a;
}

int count_interior(const dpg::Skeleton& sk) {
  int n = 0;
  for (const auto& e : sk.edges) n += e.is_boundary() ? 0 : 1;
  return n;
}

// Midpoint of skeleton edge e.
dpg::Point midpoint(const dpg::QuadMesh& mesh, const dpg::SkeletonEdge& e) {
  const auto& a = mesh.vertices()[e.v0];
  const auto& b = mesh.vertices()[e.v1];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

// Every skeleton edge lies on the claimed side of each adjacent cell, and the
// stored normal is the outward normal of the master.
void check_skeleton_geometry(const dpg::QuadMesh& mesh) {
  const auto& sk = mesh.skeleton();
  for (const auto& e : sk.edges) {
    const dpg::Point m = midpoint(mesh, e);
    for (int k = 0; k < 2; ++k) {
      if (e.cells[k] < 0) continue;
      const dpg::Rect& b = mesh.cell(e.cells[k]).box;
      const int s = e.sides[k];
      const double tol = 1e-12;
      switch (s) {
        case dpg::kBottom: EXPECT_NEAR(m.y, b.lo.y, tol); break;
        case dpg::kRight: EXPECT_NEAR(m.x, b.hi.x, tol); break;
        case dpg::kTop: EXPECT_NEAR(m.y, b.hi.y, tol); break;
        case dpg::kLeft: EXPECT_NEAR(m.x, b.lo.x, tol); break;
      }
      EXPECT_TRUE(b.contains(m, 1e-12));
    }
    const dpg::Point n = dpg::side_normal(e.sides[0]);
    EXPECT_EQ(e.orientation.master, e.cells[0]);
    EXPECT_DOUBLE_EQ(e.orientation.normal.x, n.x);
    EXPECT_DOUBLE_EQ(e.orientation.normal.y, n.y);
    if (!e.is_boundary()) {
      EXPECT_LT(e.cells[0], e.cells[1]);
      EXPECT_EQ(e.sides[1], (e.sides[0] + 2) % 4);
    }
  }
  for (int c : mesh.active_cells()) {
    for (int s = 0; s < 4; ++s) {
      const auto& cs = sk.cell_sides[c][s];
      ASSERT_GE(cs.n_edges, 1);
      double len = 0.0;
      for (int k = 0; k < cs.n_edges; ++k) {
        const auto& e = sk.edges[cs.edges[k]];
        const auto& a = mesh.vertices()[e.v0];
        const auto& b = mesh.vertices()[e.v1];
        len += std::hypot(b.x - a.x, b.y - a.y);
        EXPECT_TRUE(e.cells[0] == c || e.cells[1] == c);
      }
      const auto& box = mesh.cell(c).box;
      EXPECT_NEAR(len, (s % 2 == 0) ? box.width() : box.height(), 1e-12);
    }
  }
}

}  // namespace

TEST(Mesh, UnitSquareTwoByTwoCounts) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 2, 2);
  EXPECT_EQ(mesh.n_active(), 4u);
  EXPECT_EQ(mesh.vertices().size(), 9u);
  EXPECT_EQ(mesh.skeleton().edges.size(), 12u);
  EXPECT_EQ(count_interior(mesh.skeleton()), 4);
}

TEST(Mesh, SingleCellCounts) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 1, 1);
  EXPECT_EQ(mesh.n_active(), 1u);
  EXPECT_EQ(mesh.vertices().size(), 4u);
  EXPECT_EQ(mesh.skeleton().edges.size(), 4u);
  EXPECT_EQ(count_interior(mesh.skeleton()), 0);
}

TEST(Mesh, SymmetricSquareCellAreas) {
  const auto mesh = dpg::create_rect_mesh({{-1.0, -1.0}, {1.0, 1.0}}, 4, 4);
  EXPECT_EQ(mesh.n_active(), 16u);
  for (int c : mesh.active_cells()) EXPECT_DOUBLE_EQ(mesh.cell(c).box.area(), 0.25);
}

TEST(Mesh, RejectsDegenerateInput) {
  EXPECT_THROW(dpg::create_rect_mesh({{0.0, 0.0}, {0.0, 1.0}}, 2, 2), dpg::InputError);
  EXPECT_THROW(dpg::create_rect_mesh(kUnit, 0, 2), dpg::InputError);
}

TEST(Mesh, RefineAllGivesSixteen) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 2, 2);
  const std::vector<int> all(mesh.active_cells().begin(), mesh.active_cells().end());
  const auto fine = dpg::refine(mesh, all);
  EXPECT_EQ(fine.n_active(), 16u);
  EXPECT_EQ(fine.n_hanging_vertices(), 0);
  check_skeleton_geometry(fine);
}

TEST(Mesh, RefineOneCellGivesHangingVertices) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 2, 2);
  const std::vector<int> one{0};
  const auto fine = dpg::refine(mesh, one);
  EXPECT_EQ(fine.n_active(), 7u);
  EXPECT_EQ(fine.n_hanging_vertices(), 2);
  // Both interior sides of the refined cell are split into two halves.
  const auto& sk = fine.skeleton();
  int split_interior = 0;
  for (const auto& e : sk.edges) split_interior += e.hanging >= 0 ? 1 : 0;
  EXPECT_EQ(split_interior, 4);
  EXPECT_EQ(sk.hanging.size(), 2u);
  for (const auto& h : sk.hanging) {
    for (int half : h.halves) {
      const auto& e = sk.edges[half];
      EXPECT_TRUE(e.cells[0] == h.cell || e.cells[1] == h.cell);
    }
  }
  check_skeleton_geometry(fine);
}

TEST(Mesh, EmptyMarkLeavesMeshUnchanged) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 1, 1);
  const auto same = dpg::refine(mesh, {});
  EXPECT_EQ(same.n_active(), 1u);
  EXPECT_EQ(same.skeleton().edges.size(), 4u);
}

TEST(Mesh, RefineRejectsInactiveCell) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 1, 1);
  const std::vector<int> zero{0};
  const auto fine = dpg::refine(mesh, zero);
  EXPECT_THROW(dpg::refine(fine, zero), dpg::InputError);
}

TEST(Mesh, GenerationChangesOnRefine) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 2, 2);
  const std::vector<int> one{3};
  const auto fine = dpg::refine(mesh, one);
  EXPECT_NE(mesh.generation(), fine.generation());
}

TEST(Mesh, RandomRefinementKeepsInvariants) {
  std::mt19937 rng(11);
  auto mesh = dpg::create_rect_mesh({{-1.0, -1.0}, {1.0, 1.0}}, 3, 2);
  for (int step = 0; step < 8; ++step) {
    const auto& active = mesh.active_cells();
    std::vector<int> marked;
    std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
    for (int k = 0; k < 3; ++k) marked.push_back(active[pick(rng)]);
    std::sort(marked.begin(), marked.end());
    marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
    mesh = dpg::refine(mesh, marked);
    EXPECT_TRUE(dpg::is_one_irregular(mesh));
    EXPECT_NEAR(active_area(mesh), 4.0, 4e-12);
    check_skeleton_geometry(mesh);
  }
}

TEST(Mesh, SkeletonCoversBoundariesOnce) {
  auto mesh = dpg::create_rect_mesh(kUnit, 4, 4);
  const std::vector<int> marked{5, 6};
  mesh = dpg::refine(mesh, marked);
  const std::vector<int> again{mesh.active_cells().back()};
  mesh = dpg::refine(mesh, again);
  double skeleton_len = 0.0;
  for (const auto& e : mesh.skeleton().edges) {
    const auto& a = mesh.vertices()[e.v0];
    const auto& b = mesh.vertices()[e.v1];
    skeleton_len += std::hypot(b.x - a.x, b.y - a.y);
  }
  // Each interior segment is shared by two cells; boundary length is 4.
  double perimeters = 0.0;
  for (int c : mesh.active_cells())
    perimeters += 2.0 * (mesh.cell(c).box.width() + mesh.cell(c).box.height());
  EXPECT_NEAR(skeleton_len, 0.5 * (perimeters + 4.0), 1e-12);
}

TEST(Mesh, LocateFindsContainingCell) {
  auto mesh = dpg::create_rect_mesh(kUnit, 4, 4);
  const std::vector<int> marked{0};
  mesh = dpg::refine(mesh, marked);
  const dpg::Point x{0.1, 0.05};
  const int c = mesh.locate(x);
  ASSERT_GE(c, 0);
  EXPECT_TRUE(mesh.cell(c).active);
  EXPECT_TRUE(mesh.cell(c).box.contains(x));
  EXPECT_DOUBLE_EQ(mesh.cell(c).box.width(), 0.125);
}

TEST(Mesh, BoundaryMarkersFollowRule) {
  const dpg::BoundaryRule rule = [](dpg::Point m) {
    return (m.x <= 1e-12 || m.x >= 1.0 - 1e-12) ? dpg::BoundaryKind::Dirichlet
                                               : dpg::BoundaryKind::Neumann;
  };
  const auto mesh = dpg::create_rect_mesh(kUnit, 2, 2, rule);
  int d = 0, n = 0;
  for (const auto& e : mesh.skeleton().edges) {
    if (!e.is_boundary()) {
      EXPECT_EQ(e.boundary, dpg::BoundaryKind::Interior);
      continue;
    }
    (e.boundary == dpg::BoundaryKind::Dirichlet ? d : n) += 1;
  }
  EXPECT_EQ(d, 4);
  EXPECT_EQ(n, 4);
}
