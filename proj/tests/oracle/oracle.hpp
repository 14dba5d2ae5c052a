#pragma once

// Brute-force reference implementations used only by the tests. Nothing here
// reuses the production quadrature, bases or element kernels: quadrature comes
// from the Golub-Welsch eigenvalue method, trial bases from barycentric
// Lagrange formulas on independently computed Gauss-Lobatto nodes, and the
// test space is spanned by Legendre polynomials instead of a nodal basis.
// Skeleton terms are assembled edge by edge through the jump definition.

#include <vector>

#include <Eigen/Dense>

#include "dpg/constraints.hpp"
#include "dpg/dofmap.hpp"
#include "dpg/forms.hpp"
#include "dpg/mesh.hpp"
#include "dpg/problems.hpp"

namespace oracle {

struct Rule {
  std::vector<double> x;  // on [0, 1]
  std::vector<double> w;
};

/// Gauss-Legendre nodes and weights from the Jacobi matrix eigenproblem.
Rule golub_welsch(int n);

/// n >= 2 Gauss-Lobatto nodes on [0, 1]: endpoints plus the zeros of the
/// Jacobi(1,1) polynomial of degree n - 2.
std::vector<double> lobatto_nodes(int n);

/// Lagrange basis through `nodes` (barycentric form).
struct Lagrange {
  explicit Lagrange(std::vector<double> nodes);
  double value(int i, double t) const;
  double derivative(int i, double t) const;
  int size() const { return static_cast<int>(nodes.size()); }
  std::vector<double> nodes;
  std::vector<double> bary;
};

/// Legendre polynomial P_n(2t - 1) and its t-derivative.
double legendre(int n, double t);
double legendre_derivative(int n, double t);

struct Limits {
  int max_cells = 64;
  int max_degree = 2;
};

struct DenseSystem {
  Eigen::MatrixXd A;  // full unconstrained numbering
  Eigen::VectorXd b;
};

/// Dense normal equations B^T G^{-1} B and B^T G^{-1} l. Quadrature uses
/// p + dp + 2 + extra points. Throws std::length_error beyond `limits`.
DenseSystem assemble(const dpg::QuadMesh& mesh, const dpg::Spaces& spaces,
                     const dpg::TestNormSpec& norm, const dpg::ScalarFunction& forcing,
                     int extra = 4, Limits limits = {});

/// Raw global matrices: block-diagonal G, B (test x trial) and l, with the
/// test space of cell k occupying rows [k * n_test, (k+1) * n_test).
struct RawSystem {
  Eigen::MatrixXd G;
  Eigen::MatrixXd B;
  Eigen::VectorXd l;
  int n_test_cell = 0;
};
RawSystem assemble_raw(const dpg::QuadMesh& mesh, const dpg::Spaces& spaces,
                       const dpg::TestNormSpec& norm, const dpg::ScalarFunction& forcing,
                       int extra = 4, Limits limits = {});

/// Quadratic form of the test norm evaluated directly at quadrature points for
/// a test pair given by nodal Gauss-Lobatto coefficients in the production
/// layout [v | tau_x | tau_y].
double norm_squared(const dpg::Rect& box, const dpg::TestNormSpec& norm, int q,
                    const Eigen::VectorXd& coefficients, int n_points);

/// Free-dof system of a conforming mesh: Dirichlet hat-u and Neumann
/// hat-sigma dofs are identified geometrically and eliminated.
struct Reduced {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<int> free;
  Eigen::VectorXd fixed;  // full-length values of the eliminated dofs
};
Reduced reduce_conforming(const DenseSystem& sys, const dpg::QuadMesh& mesh,
                          const dpg::Spaces& spaces, const dpg::ProblemSpec& problem);

/// T^T A T and T^T (b - A g) with the production constraint set (for meshes
/// with hanging vertices).
DenseSystem reduce_with(const DenseSystem& sys, const dpg::ConstraintSet& constraints);

/// One-shot dense solve of the reduced system; returns the full coefficient vector.
Eigen::VectorXd solve(const Reduced& r);

}  // namespace oracle
