#pragma once

#include <array>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "dpg/dofmap.hpp"
#include "dpg/mesh.hpp"
#include "dpg/quadrature.hpp"

namespace dpg {

using Vector2 = Eigen::Vector2d;
using VectorFunction = std::function<Vector2(Point)>;
using ScalarFunction = std::function<double(Point)>;

/// Localizable test inner products on the broken space (v, tau).
///
///   Proposed:      eps|div tau - a.grad v|^2 + C_tau^2 |tau + eps grad v|^2 + eps|v|^2 + eps|grad v|^2
///   ProposedPlain: as Proposed with C_tau^2 = 1/eps
///   MD:            C_v^2|v|^2 + eps|grad v|^2 + |a.grad v|^2 + C_tau^2|tau|^2 + |div tau|^2
///   QO:            |div tau - a.grad v|^2 + |tau/eps + grad v|^2 + |v|^2
///
/// with C_tau|_K = min(1/sqrt(eps), 1/sqrt|K|) and C_v|_K = min(sqrt(eps/|K|), 1).
enum class NormVariant { Proposed, ProposedPlain, MD, QO };

std::string to_string(NormVariant v);
NormVariant parse_norm(const std::string& name);

struct TestNormSpec {
  NormVariant variant = NormVariant::Proposed;
  double eps = 1.0;
  VectorFunction convection;

  double c_tau(double area) const;
  double c_v(double area) const;
  void validate() const;
};

/// Reference-cell tabulations shared by every cell of one discretization.
/// All cells are axis-aligned rectangles, so physical values follow from these
/// by scaling derivatives with 1/hx, 1/hy.
struct ReferenceTables {
  int p = 1;
  int q = 3;  // test degree p + dp
  int n_points = 0;
  Quadrature2D cell_rule;
  Quadrature1D edge_rule;
  Eigen::MatrixXd trial;    // n_q x (p+1)^2
  Eigen::MatrixXd test;     // n_q x (q+1)^2
  Eigen::MatrixXd test_dx;  // reference derivatives
  Eigen::MatrixXd test_dy;
  Eigen::MatrixXd trace;  // n_e x (p+2), edge basis at edge_rule points
  // side_test[side][part]: scalar test basis on the side at the edge rule
  // mapped to the whole side (part 0) or its lower/upper half (1/2).
  std::array<std::array<Eigen::MatrixXd, 3>, 4> side_test;

  /// Default rule uses p + dp + 2 Gauss points per axis and per edge.
  static ReferenceTables make(int p, int dp, int n_points = -1);
};

/// Dense local data of one cell: G (test Gram), B (test x local trial) and the
/// load vector l. The test layout is [v | tau_x | tau_y].
struct ElementSystem {
  int cell = -1;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd bmat;
  Eigen::VectorXd load;
  ElementDofs dofs;
};

Eigen::MatrixXd assemble_gram(const Rect& box, const TestNormSpec& norm,
                              const ReferenceTables& tables, int cell = -1);

Eigen::MatrixXd assemble_b(const QuadMesh& mesh, int cell, const ElementDofs& dofs,
                           const TestNormSpec& norm, const ReferenceTables& tables);

Eigen::VectorXd assemble_load(const Rect& box, const ScalarFunction& forcing,
                              const ReferenceTables& tables, int cell = -1);

ElementSystem assemble_element(const QuadMesh& mesh, const Spaces& spaces, int cell,
                               const TestNormSpec& norm, const ScalarFunction& forcing,
                               const ReferenceTables& tables);

}  // namespace dpg
