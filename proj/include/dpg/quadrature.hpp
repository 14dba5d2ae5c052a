#pragma once

#include <vector>

#include "dpg/mesh.hpp"

namespace dpg {

/// Rule on the unit interval [0, 1].
struct Quadrature1D {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Tensor rule on the unit square; point k = (ix, iy) is stored at ix + n * iy.
struct Quadrature2D {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule on [0, 1]; exact for degree 2n - 1.
Quadrature1D gauss_legendre(int n);

/// n Gauss-Lobatto-Legendre nodes on [0, 1] (n >= 2), ascending, endpoints included.
std::vector<double> gauss_lobatto_nodes(int n);

Quadrature2D tensor_rule(const Quadrature1D& rule);

}  // namespace dpg
