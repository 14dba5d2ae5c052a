#include "dpg/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "dpg/error.hpp"

namespace dpg {

namespace {

void require_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eps must be positive and finite");
}

// One-dimensional factor of Example 1, the solution of X' - eps X'' = 1 with
// X(0) = X(1) = 0. expm1 keeps e^{-1/eps} underflow harmless.
struct LayerFactor {
  double eps;
  double denom;  // e^{-1/eps} - 1
  explicit LayerFactor(double e) : eps(e), denom(std::expm1(-1.0 / e)) {}
  double value(double x) const { return std::expm1((x - 1.0) / eps) / denom + x - 1.0; }
  double derivative(double x) const { return std::exp((x - 1.0) / eps) / (eps * denom) + 1.0; }
};

// Example 2 series, u = sum_n C_n mode_n(x) cos(n pi y).
struct Ex2Series {
  struct Mode {
    int n;
    double c;
    double r1;
    double r2;
    double denom;  // 1 - exp(r2 - r1)
  };
  std::vector<Mode> modes;

  Ex2Series(double eps, int n_terms) {
    for (int n = 0; n < n_terms; ++n) {
      const double c = example2_coefficient(n);
      if (c == 0.0) continue;
      const double lam = n * n * std::numbers::pi * std::numbers::pi;
      const double s = std::sqrt(1.0 + 4.0 * eps * eps * lam);
      const double r1 = (1.0 + s) / (2.0 * eps);
      const double r2 = -2.0 * eps * lam / (1.0 + s);  // (1 - s) / (2 eps) without cancellation
      modes.push_back({n, c, r1, r2, -std::expm1(r2 - r1)});
    }
  }

  // Value and gradient; terms are dropped once their bound falls below 1e-16.
  void eval(Point p, double* u, Vector2* grad) const {
    double su = 0.0, sx = 0.0, sy = 0.0;
    for (const Mode& m : modes) {
      const double decay = std::exp(m.r2 * p.x);
      const double bound = std::abs(m.c) * (1.0 + m.r1 - m.r2 + m.n * std::numbers::pi) * decay;
      if (m.n > 0 && bound < 1e-16) break;
      const double e1 = std::exp(m.r1 * (p.x - 1.0) + m.r2);
      const double arg = m.n * std::numbers::pi * p.y;
      const double cy = std::cos(arg);
      su += m.c * (decay - e1) / m.denom * cy;
      sx += m.c * (m.r2 * decay - m.r1 * e1) / m.denom * cy;
      sy -= m.c * (decay - e1) / m.denom * m.n * std::numbers::pi * std::sin(arg);
    }
    if (u) *u = su;
    if (grad) *grad = Vector2(sx, sy);
  }
};

}  // namespace

double example2_coefficient(int n) {
  if (n < 0) throw InputError("example2_coefficient: n must be >= 0");
  if (n == 0) return 1.0 / 6.0;
  if (n % 2 == 1) return 0.0;
  return -4.0 / (n * n * std::numbers::pi * std::numbers::pi);
}

ProblemSpec example1(double eps) {
  require_eps(eps);
  const LayerFactor X(eps);
  ProblemSpec p;
  p.name = "ex1";
  p.domain = {{0.0, 0.0}, {1.0, 1.0}};
  p.eps = eps;
  p.convection = [](Point) { return Vector2(1.0, 1.0); };
  p.forcing = [X](Point q) { return X.value(q.x) + X.value(q.y); };
  p.boundary = all_dirichlet();
  p.dirichlet = [](Point) { return 0.0; };
  p.exact_u = [X](Point q) { return X.value(q.x) * X.value(q.y); };
  p.exact_sigma = [X](Point q) {
    return Vector2(X.derivative(q.x) * X.value(q.y), X.value(q.x) * X.derivative(q.y));
  };
  p.initial_n = 4;
  return p;
}

ProblemSpec example2(double eps, int n_terms) {
  require_eps(eps);
  if (n_terms < 1) throw InputError("example2: truncation must be >= 1");
  auto series = std::make_shared<const Ex2Series>(eps, n_terms);
  ProblemSpec p;
  p.name = "ex2";
  p.domain = {{0.0, 0.0}, {1.0, 1.0}};
  p.eps = eps;
  p.convection = [](Point) { return Vector2(1.0, 0.0); };
  p.forcing = [](Point) { return 0.0; };
  p.boundary = [](Point mid) {
    if (mid.x <= 1e-12 || mid.x >= 1.0 - 1e-12) return BoundaryKind::Dirichlet;
    return BoundaryKind::Neumann;
  };
  p.dirichlet = [](Point q) { return q.x <= 1e-12 ? q.y * (1.0 - q.y) : 0.0; };
  p.exact_u = [series](Point q) {
    double u;
    series->eval(q, &u, nullptr);
    return u;
  };
  p.exact_sigma = [series](Point q) {
    Vector2 g;
    series->eval(q, nullptr, &g);
    return g;
  };
  p.initial_n = 4;
  return p;
}

ProblemSpec example3(double eps) {
  require_eps(eps);
  const double scale = 1.0 / std::sqrt(2.0 * eps);
  const double dscale = std::sqrt(2.0 / (std::numbers::pi * eps));
  auto E = [scale](double x) { return std::erf(x * scale); };
  auto dE = [dscale, eps](double x) { return dscale * std::exp(-x * x / (2.0 * eps)); };
  ProblemSpec p;
  p.name = "ex3";
  p.domain = {{-1.0, -1.0}, {1.0, 1.0}};
  p.eps = eps;
  p.convection = [](Point q) { return Vector2(q.x, q.y); };
  p.forcing = [E, dE, eps](Point q) {
    const double w = 1.0 - q.y * q.y;
    return E(q.x) * (2.0 - 4.0 * q.y * q.y + 2.0 * eps) + 2.0 * q.x * dE(q.x) * w;
  };
  p.exact_u = [E](Point q) { return E(q.x) * (1.0 - q.y * q.y); };
  p.exact_sigma = [E, dE](Point q) {
    return Vector2(dE(q.x) * (1.0 - q.y * q.y), -2.0 * q.y * E(q.x));
  };
  p.dirichlet = p.exact_u;
  p.boundary = all_dirichlet();
  p.initial_n = 8;
  return p;
}

ProblemSpec make_problem(const std::string& name, double eps) {
  if (name == "ex1") return example1(eps);
  if (name == "ex2") return example2(eps);
  if (name == "ex3") return example3(eps);
  throw InputError("unknown problem '" + name + "' (expected ex1, ex2 or ex3)");
}

QuadMesh initial_mesh(const ProblemSpec& problem) {
  return create_rect_mesh(problem.domain, problem.initial_n, problem.initial_n, problem.boundary);
}

ProblemSpec manufactured(std::string name, Rect domain, double eps, VectorFunction convection,
                         const ManufacturedData& data) {
  require_eps(eps);
  if (!data.u || !data.grad_u || !data.laplacian_u)
    throw InputError("manufactured: u, grad u and laplacian are required");
  ProblemSpec p;
  p.name = std::move(name);
  p.domain = domain;
  p.eps = eps;
  p.convection = convection;
  p.forcing = [convection, data, eps](Point q) {
    const double div_a = data.divergence_a ? data.divergence_a(q) : 0.0;
    return convection(q).dot(data.grad_u(q)) + div_a * data.u(q) - eps * data.laplacian_u(q);
  };
  p.boundary = all_dirichlet();
  p.dirichlet = data.u;
  p.exact_u = data.u;
  p.exact_sigma = data.grad_u;
  return p;
}

ProblemSpec zero_problem(Rect domain, double eps, VectorFunction convection) {
  return manufactured("zero", domain, eps, std::move(convection),
                      {[](Point) { return 0.0; }, [](Point) { return Vector2(0.0, 0.0); },
                       [](Point) { return 0.0; }, {}});
}

double default_fd_step(double eps) { return std::max(1e-6, std::min(1e-5, 1e-4 * std::sqrt(eps))); }

double fd_operator(const ScalarFunction& u, const VectorFunction& a, double eps, Point x,
                   double step, const Rect* domain) {
  if (!(step > 0.0)) throw InputError("fd_operator: step must be positive");
  if (domain) {
    const double m = 2.0 * step;
    if (x.x - m < domain->lo.x || x.x + m > domain->hi.x || x.y - m < domain->lo.y ||
        x.y + m > domain->hi.y)
      throw InputError("fd_operator: point too close to the domain boundary");
  }
  const Point e{x.x + step, x.y}, w{x.x - step, x.y}, n{x.x, x.y + step}, s{x.x, x.y - step};
  const double ue = u(e), uw = u(w), un = u(n), us = u(s), uc = u(x);
  const double div = (a(e)[0] * ue - a(w)[0] * uw + a(n)[1] * un - a(s)[1] * us) / (2.0 * step);
  const double lap = (ue + uw + un + us - 4.0 * uc) / (step * step);
  return div - eps * lap;
}

double verify_forcing(const ProblemSpec& problem, std::span<const Point> samples, double step) {
  if (!problem.exact_u) throw InputError("verify_forcing: problem has no exact solution");
  const double h = step > 0.0 ? step : default_fd_step(problem.eps);
  double worst = 0.0;
  for (Point x : samples) {
    if (!problem.domain.contains(x)) throw InputError("verify_forcing: sample outside the domain");
    const double f = problem.forcing(x);
    const double fd = fd_operator(problem.exact_u, problem.convection, problem.eps, x, h, &problem.domain);
    worst = std::max(worst, std::abs(f - fd) / (1.0 + std::abs(f)));
  }
  return worst;
}

double verify_gradient(const ProblemSpec& problem, std::span<const Point> samples, double step) {
  if (!problem.has_exact()) throw InputError("verify_gradient: problem has no exact solution");
  const double h = step > 0.0 ? step : default_fd_step(problem.eps);
  double worst = 0.0;
  for (Point x : samples) {
    if (!problem.domain.contains(x)) throw InputError("verify_gradient: sample outside the domain");
    const Vector2 g = problem.exact_sigma(x);
    const auto& u = problem.exact_u;
    const Vector2 fd((u({x.x + h, x.y}) - u({x.x - h, x.y})) / (2.0 * h),
                     (u({x.x, x.y + h}) - u({x.x, x.y - h})) / (2.0 * h));
    worst = std::max(worst, (g - fd).lpNorm<Eigen::Infinity>() / (1.0 + g.lpNorm<Eigen::Infinity>()));
  }
  return worst;
}

std::vector<VerifyRow> verify_examples() {
  struct Check {
    const char* name;
    double forcing_tol;
  };
  constexpr Check checks[] = {{"ex1", 1e-6}, {"ex2", 1e-5}, {"ex3", 1e-6}};
  constexpr double gradient_tol = 1e-6;
  std::vector<VerifyRow> rows;
  for (const auto& c : checks) {
    for (double eps : {1.0, 0.1, 0.01}) {
      const std::string name = c.name;
      const ProblemSpec prob = name == "ex2" ? example2(eps, 50) : make_problem(name, eps);
      const auto pts = interior_samples(prob.domain, 25);
      VerifyRow row{name, eps, verify_forcing(prob, pts), c.forcing_tol, verify_gradient(prob, pts),
                    gradient_tol, false};
      row.pass = row.forcing <= row.forcing_tol && row.gradient <= row.gradient_tol;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<Point> interior_samples(const Rect& domain, int count, unsigned seed, double inset) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unit(inset, 1.0 - inset);
  std::vector<Point> pts(count);
  for (auto& p : pts) {
    const double s = unit(gen);
    const double t = unit(gen);
    p = {domain.lo.x + s * domain.width(), domain.lo.y + t * domain.height()};
  }
  return pts;
}

}  // namespace dpg
