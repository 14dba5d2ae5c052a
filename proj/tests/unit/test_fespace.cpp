#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dpg/basis.hpp"
#include "dpg/constraints.hpp"
#include "dpg/dofmap.hpp"
#include "dpg/error.hpp"
#include "dpg/problems.hpp"
#include "dpg/quadrature.hpp"
#include "dpg/solver.hpp"
#include "oracle/oracle.hpp"

namespace {

const dpg::Rect kUnit{{0.0, 0.0}, {1.0, 1.0}};

}  // namespace

TEST(Quadrature, GaussLegendreIntegratesMonomials) {
  for (int n = 1; n <= 8; ++n) {
    const auto rule = dpg::gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.points[i], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Quadrature, MatchesEigenvalueRule) {
  for (int n = 1; n <= 10; ++n) {
    const auto rule = dpg::gauss_legendre(n);
    const auto ref = oracle::golub_welsch(n);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(rule.points[i], ref.x[i], 1e-14);
      EXPECT_NEAR(rule.weights[i], ref.w[i], 1e-14);
    }
  }
}

TEST(Quadrature, LobattoNodesMatchOracle) {
  for (int n = 2; n <= 8; ++n) {
    const auto nodes = dpg::gauss_lobatto_nodes(n);
    const auto ref = oracle::lobatto_nodes(n);
    ASSERT_EQ(nodes.size(), ref.size());
    EXPECT_DOUBLE_EQ(nodes.front(), 0.0);
    EXPECT_DOUBLE_EQ(nodes.back(), 1.0);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(nodes[i], ref[i], 1e-14);
  }
}

TEST(Basis, ConstantScalarBasis) {
  const dpg::ReferenceBasis b(dpg::BasisKind::ScalarSquare, 0);
  const std::vector<dpg::Point> pts{{0.3, 0.8}};
  const auto t = dpg::eval_basis(b, pts);
  EXPECT_DOUBLE_EQ(t.values(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(t.dx(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(t.dy(0, 0), 0.0);
}

TEST(Basis, NodalProperty) {
  const dpg::ReferenceBasis b(dpg::BasisKind::ScalarSquare, 1);
  const auto nodes = b.nodes();
  const auto t = b.tabulate(nodes);
  for (int i = 0; i < b.size(); ++i)
    for (int j = 0; j < b.size(); ++j) EXPECT_NEAR(t.values(i, j), i == j ? 1.0 : 0.0, 1e-15);
}

TEST(Basis, PartitionOfUnity) {
  const dpg::ReferenceBasis b(dpg::BasisKind::ScalarSquare, 2);
  const std::vector<dpg::Point> pts{{0.3, 0.7}};
  const auto t = b.tabulate(pts);
  EXPECT_NEAR(t.values.row(0).sum(), 1.0, 1e-14);
  EXPECT_NEAR(t.dx.row(0).sum(), 0.0, 1e-13);
}

TEST(Basis, DimensionsOfEachKind) {
  for (int p = 0; p <= 4; ++p) {
    EXPECT_EQ(dpg::ReferenceBasis(dpg::BasisKind::ScalarSquare, p).size(), (p + 1) * (p + 1));
    EXPECT_EQ(dpg::ReferenceBasis(dpg::BasisKind::VectorSquare, p).size(), 2 * (p + 1) * (p + 1));
    EXPECT_EQ(dpg::ReferenceBasis(dpg::BasisKind::Edge, p).size(), p + 1);
  }
}

TEST(Basis, VectorLayout) {
  const dpg::ReferenceBasis b(dpg::BasisKind::VectorSquare, 1);
  const std::vector<dpg::Point> pts{{0.25, 0.6}};
  const auto t = b.tabulate(pts);
  const dpg::ReferenceBasis s(dpg::BasisKind::ScalarSquare, 1);
  const auto ts = s.tabulate(pts);
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(t.values(0, i), ts.values(0, i));
    EXPECT_DOUBLE_EQ(t.values_y(0, i), 0.0);
    EXPECT_DOUBLE_EQ(t.values(0, 4 + i), 0.0);
    EXPECT_DOUBLE_EQ(t.values_y(0, 4 + i), ts.values(0, i));
  }
}

TEST(Basis, LagrangeDerivativeMatchesOracle) {
  for (int k = 1; k <= 5; ++k) {
    const dpg::LagrangeBasis1D b(k);
    const oracle::Lagrange ref(oracle::lobatto_nodes(k + 1));
    for (double t : {0.0, 0.13, 0.5, 0.77, 1.0}) {
      for (int i = 0; i <= k; ++i) {
        EXPECT_NEAR(b.value(i, t), ref.value(i, t), 1e-13);
        EXPECT_NEAR(b.derivative(i, t), ref.derivative(i, t), 1e-11);
      }
    }
  }
}

TEST(DofMap, FieldCounts) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 2, 2);
  EXPECT_EQ(dpg::build_dofmap(mesh, dpg::SpaceKind::FieldScalar, 1).n_dofs, 16);
  EXPECT_EQ(dpg::build_dofmap(mesh, dpg::SpaceKind::FieldVector, 1).n_dofs, 32);
}

TEST(DofMap, ContinuousTraceFreeCount) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 2, 2);
  const auto map = dpg::build_dofmap(mesh, dpg::SpaceKind::TraceContinuous, 2);
  EXPECT_EQ(map.n_free(), 5);
}

TEST(DofMap, RejectsLowDegrees) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 1, 1);
  EXPECT_THROW(dpg::build_dofmap(mesh, dpg::SpaceKind::TraceContinuous, 0), dpg::InputError);
  EXPECT_THROW(dpg::build_dofmap(mesh, dpg::SpaceKind::TraceEdgewise, 0), dpg::InputError);
  EXPECT_THROW(dpg::build_dofmap(mesh, dpg::SpaceKind::FieldScalar, -1), dpg::InputError);
}

// Closed-form counts on uniform n x n meshes with Dirichlet data everywhere.
TEST(DofMap, CountTableOnUniformMeshes) {
  struct Row {
    int n, p, u, sigma, hat_u, hat_u_free, hat_sigma;
  };
  std::vector<Row> table;
  for (int n : {1, 2, 4}) {
    for (int p = 0; p <= 3; ++p) {
      const int cells = n * n;
      const int edges = 2 * n * (n + 1);
      const int interior_edges = 2 * n * (n - 1);
      table.push_back({n, p, cells * (p + 1) * (p + 1), 2 * cells * (p + 1) * (p + 1),
                       (n + 1) * (n + 1) + edges * p, (n - 1) * (n - 1) + interior_edges * p,
                       edges * (p + 2)});
    }
  }
  // Spot values written out by hand.
  EXPECT_EQ(table[0].hat_sigma, 8);    // n=1, p=0: 4 edges x 2
  EXPECT_EQ(table[5].hat_u, 21);       // n=2, p=1: 9 vertices + 12 edges x 1
  EXPECT_EQ(table[5].hat_u_free, 5);   // 1 interior vertex + 4 interior edges
  EXPECT_EQ(table[11].u, 16 * 16);     // n=4, p=3
  for (const Row& r : table) {
    const auto mesh = dpg::create_rect_mesh(kUnit, r.n, r.n);
    const auto s = dpg::build_spaces(mesh, r.p, dpg::kDefaultEnrichment);
    EXPECT_EQ(s.u.n_dofs, r.u) << "n=" << r.n << " p=" << r.p;
    EXPECT_EQ(s.sigma.n_dofs, r.sigma);
    EXPECT_EQ(s.hat_u.n_dofs, r.hat_u);
    EXPECT_EQ(s.hat_u.n_free(), r.hat_u_free);
    EXPECT_EQ(s.hat_sigma.n_dofs, r.hat_sigma);
    EXPECT_EQ(s.hat_sigma.n_free(), r.hat_sigma);
    EXPECT_EQ(s.n_dofs(), r.u + r.sigma + r.hat_u + r.hat_sigma);
  }
}

TEST(DofMap, NeumannEdgesConstrainFluxes) {
  const auto prob = dpg::example2(0.1);
  const auto mesh = dpg::create_rect_mesh(prob.domain, 2, 2, prob.boundary);
  const auto s = dpg::build_spaces(mesh, 1, dpg::kDefaultEnrichment);
  // 4 Neumann edges of 3 dofs; hat-u fixed on the 2 Dirichlet sides (5 nodes each).
  EXPECT_EQ(s.hat_sigma.n_constrained(), 12);
  EXPECT_EQ(s.hat_u.n_constrained(), 10);
}

TEST(DofMap, ContiguousNumbering) {
  auto mesh = dpg::create_rect_mesh(kUnit, 2, 2);
  const std::vector<int> one{1};
  mesh = dpg::refine(mesh, one);
  const auto s = dpg::build_spaces(mesh, 2, dpg::kDefaultEnrichment);
  std::vector<int> seen(s.n_dofs(), 0);
  for (int c : mesh.active_cells()) {
    const auto ed = dpg::element_dofs(mesh, s, c);
    for (int g : ed.global) {
      ASSERT_GE(g, 0);
      ASSERT_LT(g, s.n_dofs());
      seen[g] = 1;
    }
  }
  // Every dof except the interior nodes of the hanging halves of hat-u (which
  // only the coarse cell would see through its master dofs) is touched.
  const int untouched = s.n_dofs() - std::accumulate(seen.begin(), seen.end(), 0);
  EXPECT_GE(untouched, 0);
  EXPECT_LE(untouched, mesh.n_hanging_vertices() * 2 * s.trace_degree());
}

TEST(Constraints, HangingTraceAgreesFromBothSides) {
  for (int p : {0, 1, 2}) {
    auto mesh = dpg::create_rect_mesh(kUnit, 2, 2);
    const std::vector<int> one{0};
    mesh = dpg::refine(mesh, one);
    const std::vector<int> two{mesh.active_cells().back()};
    mesh = dpg::refine(mesh, two);
    ASSERT_GT(mesh.n_hanging_vertices(), 0);
    const auto s = dpg::build_spaces(mesh, p, dpg::kDefaultEnrichment);
    const auto cs = dpg::make_constraints(s, {});
    std::mt19937 rng(3 + p);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd y(cs.n_free());
    for (auto& v : y) v = uni(rng);
    const Eigen::VectorXd x = cs.distribute(y);
    const dpg::LagrangeBasis1D line(s.trace_degree());
    auto eval_side = [&](int cell, int side, double t) {
      const auto dofs = dpg::side_trace_dofs(mesh, s.hat_u, cell, side);
      double v = 0.0;
      for (int i = 0; i < line.size(); ++i) v += x[s.offset[2] + dofs[i]] * line.value(i, t);
      return v;
    };
    const auto& sk = mesh.skeleton();
    for (const auto& h : sk.hanging) {
      for (int half = 0; half < 2; ++half) {
        const auto& e = sk.edges[h.halves[half]];
        const int k = e.cells[0] == h.cell ? 1 : 0;
        const int fine = e.cells[k];
        const int fine_side = e.sides[k];
        for (double t : {0.0, 0.2, 0.5, 0.8, 1.0}) {
          const double coarse = eval_side(h.cell, h.side, 0.5 * (half + t));
          EXPECT_NEAR(eval_side(fine, fine_side, t), coarse, 1e-12) << "p=" << p;
        }
      }
    }
  }
}

TEST(Constraints, FieldInterpolationIsExact) {
  auto mesh = dpg::create_rect_mesh({{-1.0, 0.0}, {1.0, 2.0}}, 3, 2);
  for (int p = 0; p <= 3; ++p) {
    auto s = std::make_shared<dpg::Spaces>(dpg::build_spaces(mesh, p, dpg::kDefaultEnrichment));
    auto poly = [p](dpg::Point x) {
      double v = 0.3;
      if (p >= 1) v += 0.7 * x.x - 1.1 * x.y;
      if (p >= 2) v += 0.4 * x.x * x.y - 0.9 * x.y * x.y;
      if (p >= 3) v += 0.25 * x.x * x.x * x.x - 0.5 * x.x * x.y * x.y;
      return v;
    };
    dpg::BlockedSolution sol;
    sol.spaces = s;
    sol.mesh_generation = mesh.generation();
    sol.coefficients = Eigen::VectorXd::Zero(s->n_dofs());
    const dpg::ReferenceBasis basis(dpg::BasisKind::ScalarSquare, p);
    const auto nodes = basis.nodes();
    for (int c : mesh.active_cells()) {
      const auto& b = mesh.cell(c).box;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const dpg::Point x{b.lo.x + nodes[i].x * b.width(), b.lo.y + nodes[i].y * b.height()};
        sol.coefficients[s->u.cell_offset[c] + static_cast<int>(i)] = poly(x);
      }
    }
    for (int c : mesh.active_cells()) {
      const auto& b = mesh.cell(c).box;
      for (dpg::Point r : {dpg::Point{0.1, 0.9}, dpg::Point{0.37, 0.52}, dpg::Point{0.8, 0.05}}) {
        const dpg::Point x{b.lo.x + r.x * b.width(), b.lo.y + r.y * b.height()};
        EXPECT_NEAR(dpg::eval_u(sol, c, r), poly(x), 1e-12) << "p=" << p;
      }
    }
  }
}

TEST(Constraints, DirichletInterpolationOfInflowProfile) {
  const auto prob = dpg::example2(0.1);
  const auto mesh = dpg::create_rect_mesh(prob.domain, 1, 1, prob.boundary);
  const auto s = dpg::build_spaces(mesh, 1, dpg::kDefaultEnrichment);
  const auto cs = dpg::make_constraints(s, prob.dirichlet);
  int found = 0;
  for (int d = 0; d < s.hat_u.n_dofs; ++d) {
    const auto& x = s.hat_u.dof_points[d];
    if (std::abs(x.x) < 1e-14 && std::abs(x.y - 0.5) < 1e-14) {
      ++found;
      ASSERT_TRUE(cs.is_constrained(s.offset[2] + d));
      EXPECT_DOUBLE_EQ(cs.constant(s.offset[2] + d), 0.25);
    }
  }
  EXPECT_EQ(found, 1);
}

TEST(Constraints, HomogeneousDirichletFixesZero) {
  const auto mesh = dpg::create_rect_mesh(kUnit, 2, 2);
  const auto s = dpg::build_spaces(mesh, 1, dpg::kDefaultEnrichment);
  const auto cs = dpg::make_constraints(s, {});
  int fixed = 0;
  for (int d = 0; d < s.hat_u.n_dofs; ++d) {
    if (!s.hat_u.on_boundary[d]) continue;
    ++fixed;
    EXPECT_TRUE(cs.is_constrained(s.offset[2] + d));
    EXPECT_EQ(cs.constant(s.offset[2] + d), 0.0);
  }
  EXPECT_EQ(fixed, 16);
}

TEST(Constraints, EliminationReproducesFixedValue) {
  dpg::SparseMatrix A(2, 2);
  A.insert(0, 0) = 2.0;
  A.insert(0, 1) = 1.0;
  A.insert(1, 0) = 1.0;
  A.insert(1, 1) = 3.0;
  const double g = -0.4;
  const double x0 = 0.7;
  Eigen::VectorXd b(2);
  b << 2.0 * x0 + g, x0 + 3.0 * g;
  dpg::ConstraintSet cs(2);
  cs.add_line({1, {}, g});
  cs.close();
  const auto red = dpg::apply_constraints(cs, A, b);
  ASSERT_EQ(red.matrix.rows(), 1);
  EXPECT_DOUBLE_EQ(red.rhs[0], 2.0 * x0);  // column times g moved to the right-hand side
  Eigen::VectorXd y(1);
  y[0] = red.rhs[0] / red.matrix.coeff(0, 0);
  const Eigen::VectorXd x = cs.distribute(y);
  EXPECT_DOUBLE_EQ(x[0], x0);
  EXPECT_DOUBLE_EQ(x[1], g);
}

TEST(Constraints, CycleIsRejected) {
  dpg::ConstraintSet cs(3);
  cs.add_line({0, {{1, 1.0}}, 0.0});
  cs.add_line({1, {{0, 1.0}}, 0.0});
  EXPECT_THROW(cs.close(), dpg::Error);
}

TEST(Constraints, ChainsResolveToFreeDofs) {
  dpg::ConstraintSet cs(4);
  cs.add_line({0, {{1, 0.5}}, 1.0});
  cs.add_line({1, {{2, 2.0}}, 0.5});
  cs.close();
  EXPECT_EQ(cs.n_free(), 2);
  Eigen::VectorXd y(2);
  y << 3.0, 5.0;  // dofs 2 and 3
  const Eigen::VectorXd x = cs.distribute(y);
  EXPECT_DOUBLE_EQ(x[2], 3.0);
  EXPECT_DOUBLE_EQ(x[1], 6.5);
  EXPECT_DOUBLE_EQ(x[0], 0.5 * 6.5 + 1.0);
  EXPECT_DOUBLE_EQ(x[3], 5.0);
}
