#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpg/mesh.hpp"

namespace dpg {

/// Nodal Lagrange basis of degree `degree` on [0, 1] through Gauss-Lobatto
/// nodes. Degree 0 is the constant 1 with its node at 0.5.
class LagrangeBasis1D {
 public:
  explicit LagrangeBasis1D(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  const std::vector<double>& nodes() const { return nodes_; }

  double value(int i, double t) const;
  double derivative(int i, double t) const;

  /// values(k, i) = phi_i(t_k)
  Eigen::MatrixXd values(std::span<const double> t) const;
  Eigen::MatrixXd derivatives(std::span<const double> t) const;

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> denominators_;
};

enum class BasisKind { ScalarSquare, VectorSquare, Edge };

/// Tabulated values and first derivatives of a reference basis at a set of
/// points. Derivatives are with respect to reference coordinates; callers on an
/// axis-aligned cell scale them by 1/hx and 1/hy.
///
/// Scalar square: values/dx/dy are (n_points x (p+1)^2), function i = ix + (p+1) iy.
/// Vector square: per-component blocks; function i < (p+1)^2 is (phi_i, 0), the
/// rest are (0, phi_{i - (p+1)^2}). values holds the x component and values_y the
/// y component; dx, dy follow the same layout for the nonzero component.
/// Edge: values/dx are (n_points x (p+1)).
struct Tabulation {
  Eigen::MatrixXd values;
  Eigen::MatrixXd values_y;
  Eigen::MatrixXd dx;
  Eigen::MatrixXd dy;
};

class ReferenceBasis {
 public:
  ReferenceBasis(BasisKind kind, int degree);

  BasisKind kind() const { return kind_; }
  int degree() const { return line_.degree(); }
  int size() const;
  const LagrangeBasis1D& line() const { return line_; }

  /// Reference nodes of the scalar/edge basis (x only for Edge).
  std::vector<Point> nodes() const;

  Tabulation tabulate(std::span<const Point> points) const;

 private:
  BasisKind kind_;
  LagrangeBasis1D line_;
};

/// Convenience wrapper matching the operation of the same name.
inline Tabulation eval_basis(const ReferenceBasis& basis, std::span<const Point> points) {
  return basis.tabulate(points);
}

}  // namespace dpg
