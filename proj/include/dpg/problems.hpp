#pragma once

#include <span>
#include <string>
#include <vector>

#include "dpg/forms.hpp"
#include "dpg/mesh.hpp"

namespace dpg {

/// Convection-diffusion problem div(a u - eps grad u) = f with its boundary
/// partition and, when known, the exact solution u and sigma = grad u.
struct ProblemSpec {
  std::string name;
  Rect domain;
  double eps = 1.0;
  VectorFunction convection;
  ScalarFunction forcing;
  BoundaryRule boundary = all_dirichlet();
  ScalarFunction dirichlet;  // hat-u datum on Dirichlet edges (zero when empty)
  ScalarFunction exact_u;
  VectorFunction exact_sigma;
  int initial_n = 4;  // initial mesh is initial_n x initial_n

  bool has_exact() const { return static_cast<bool>(exact_u) && static_cast<bool>(exact_sigma); }
  TestNormSpec norm(NormVariant variant) const { return {variant, eps, convection}; }
};

/// (0,1)^2, a = (1,1), homogeneous Dirichlet, boundary layers at x = 1 and y = 1.
ProblemSpec example1(double eps);

/// Eriksson-Johnson: (0,1)^2, a = (1,0), f = 0, u = y(1-y) on x = 0, u = 0 on
/// x = 1, zero total flux on y = 0 and y = 1. The exact solution is the cosine
/// series truncated after `n_terms` modes.
ProblemSpec example2(double eps, int n_terms = 200);

/// (-1,1)^2, a = (x,y), u = erf(x / sqrt(2 eps)) (1 - y^2), exact Dirichlet data.
ProblemSpec example3(double eps);

/// "ex1", "ex2" or "ex3".
ProblemSpec make_problem(const std::string& name, double eps);

QuadMesh initial_mesh(const ProblemSpec& problem);

/// Smooth manufactured solution: f = a.grad u + (div a) u - eps lap u, with the
/// exact u used as Dirichlet datum on every boundary edge.
struct ManufacturedData {
  ScalarFunction u;
  VectorFunction grad_u;
  ScalarFunction laplacian_u;
  ScalarFunction divergence_a;  // zero when empty
};
ProblemSpec manufactured(std::string name, Rect domain, double eps, VectorFunction convection,
                         const ManufacturedData& data);

/// The zero problem: f = 0, u = 0 on the whole boundary.
ProblemSpec zero_problem(Rect domain, double eps, VectorFunction convection);

/// Finite-difference step used by the oracles for a given eps.
double default_fd_step(double eps);

/// Central-difference value of div(a u - eps grad u) at `x` (5-point Laplacian).
/// With `domain`, x must keep a margin of 2 * step from its boundary.
double fd_operator(const ScalarFunction& u, const VectorFunction& a, double eps, Point x,
                   double step, const Rect* domain = nullptr);

/// max |f - FD(u)| / (1 + |f|) over the samples.
double verify_forcing(const ProblemSpec& problem, std::span<const Point> samples,
                      double step = -1.0);

/// max |sigma - central difference of u|_inf / (1 + |sigma|_inf) over the samples.
double verify_gradient(const ProblemSpec& problem, std::span<const Point> samples,
                       double step = -1.0);

struct VerifyRow {
  std::string problem;
  double eps = 1.0;
  double forcing = 0.0;
  double forcing_tol = 0.0;
  double gradient = 0.0;
  double gradient_tol = 0.0;
  bool pass = false;
};

/// Forcing and gradient checks of the three examples at eps in {1, 0.1, 0.01}
/// on 25 interior samples each. Example 2 uses 50 series terms.
std::vector<VerifyRow> verify_examples();

/// Deterministic pseudo-random points strictly inside `domain`, kept
/// `inset` (relative) away from its boundary.
std::vector<Point> interior_samples(const Rect& domain, int count, unsigned seed = 7,
                                    double inset = 0.1);

/// Example 2 coefficients C_n = 2 int_0^1 y(1-y) cos(n pi y) dy (C_0 without the 2).
double example2_coefficient(int n);

}  // namespace dpg
