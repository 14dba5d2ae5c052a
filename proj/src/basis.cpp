#include "dpg/basis.hpp"

#include "dpg/error.hpp"
#include "dpg/quadrature.hpp"

namespace dpg {

LagrangeBasis1D::LagrangeBasis1D(int degree) : degree_(degree) {
  if (degree < 0) throw InputError("LagrangeBasis1D: negative degree");
  nodes_ = degree == 0 ? std::vector<double>{0.5} : gauss_lobatto_nodes(degree + 1);
  denominators_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    double d = 1.0;
    for (std::size_t m = 0; m < nodes_.size(); ++m)
      if (m != i) d *= nodes_[i] - nodes_[m];
    denominators_[i] = d;
  }
}

double LagrangeBasis1D::value(int i, double t) const {
  double v = 1.0;
  for (int m = 0; m <= degree_; ++m)
    if (m != i) v *= t - nodes_[m];
  return v / denominators_[i];
}

double LagrangeBasis1D::derivative(int i, double t) const {
  double sum = 0.0;
  for (int m = 0; m <= degree_; ++m) {
    if (m == i) continue;
    double prod = 1.0;
    for (int l = 0; l <= degree_; ++l)
      if (l != i && l != m) prod *= t - nodes_[l];
    sum += prod;
  }
  return sum / denominators_[i];
}

Eigen::MatrixXd LagrangeBasis1D::values(std::span<const double> t) const {
  Eigen::MatrixXd out(t.size(), size());
  for (std::size_t k = 0; k < t.size(); ++k)
    for (int i = 0; i < size(); ++i) out(k, i) = value(i, t[k]);
  return out;
}

Eigen::MatrixXd LagrangeBasis1D::derivatives(std::span<const double> t) const {
  Eigen::MatrixXd out(t.size(), size());
  for (std::size_t k = 0; k < t.size(); ++k)
    for (int i = 0; i < size(); ++i) out(k, i) = derivative(i, t[k]);
  return out;
}

ReferenceBasis::ReferenceBasis(BasisKind kind, int degree) : kind_(kind), line_(degree) {}

int ReferenceBasis::size() const {
  const int n = line_.size();
  switch (kind_) {
    case BasisKind::ScalarSquare: return n * n;
    case BasisKind::VectorSquare: return 2 * n * n;
    default: return n;
  }
}

std::vector<Point> ReferenceBasis::nodes() const {
  const auto& t = line_.nodes();
  std::vector<Point> out;
  if (kind_ == BasisKind::Edge) {
    for (double x : t) out.push_back({x, 0.0});
    return out;
  }
  for (double y : t)
    for (double x : t) out.push_back({x, y});
  return out;
}

Tabulation ReferenceBasis::tabulate(std::span<const Point> points) const {
  const int n = line_.size();
  const auto np = static_cast<Eigen::Index>(points.size());
  Tabulation tab;
  if (kind_ == BasisKind::Edge) {
    tab.values.resize(np, n);
    tab.dx.resize(np, n);
    for (Eigen::Index k = 0; k < np; ++k)
      for (int i = 0; i < n; ++i) {
        tab.values(k, i) = line_.value(i, points[k].x);
        tab.dx(k, i) = line_.derivative(i, points[k].x);
      }
    return tab;
  }
  const int ns = n * n;
  Eigen::MatrixXd val(np, ns), dx(np, ns), dy(np, ns);
  for (Eigen::Index k = 0; k < np; ++k) {
    for (int iy = 0; iy < n; ++iy) {
      const double vy = line_.value(iy, points[k].y);
      const double dvy = line_.derivative(iy, points[k].y);
      for (int ix = 0; ix < n; ++ix) {
        const double vx = line_.value(ix, points[k].x);
        const double dvx = line_.derivative(ix, points[k].x);
        const int i = ix + n * iy;
        val(k, i) = vx * vy;
        dx(k, i) = dvx * vy;
        dy(k, i) = vx * dvy;
      }
    }
  }
  if (kind_ == BasisKind::ScalarSquare) {
    tab.values = std::move(val);
    tab.dx = std::move(dx);
    tab.dy = std::move(dy);
    return tab;
  }
  tab.values = Eigen::MatrixXd::Zero(np, 2 * ns);
  tab.values_y = Eigen::MatrixXd::Zero(np, 2 * ns);
  tab.values.leftCols(ns) = val;
  tab.values_y.rightCols(ns) = val;
  tab.dx.resize(np, 2 * ns);
  tab.dy.resize(np, 2 * ns);
  tab.dx << dx, dx;
  tab.dy << dy, dy;
  return tab;
}

}  // namespace dpg
