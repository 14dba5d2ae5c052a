#include "dpg/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <new>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#ifdef DPG_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include "dpg/basis.hpp"
#include "dpg/error.hpp"
#include "dpg/quadrature.hpp"

namespace dpg {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Contribution of one cell after eliminating its constrained dofs.
struct ReducedBlock {
  std::vector<int> free;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

ReducedBlock reduce(const CondensedElement& ce, const ConstraintSet& cs) {
  const int n = ce.dofs.size();
  ReducedBlock rb;
  for (int g : ce.dofs.global)
    for (const auto& t : cs.expansion(g)) rb.free.push_back(t.free);
  std::sort(rb.free.begin(), rb.free.end());
  rb.free.erase(std::unique(rb.free.begin(), rb.free.end()), rb.free.end());
  const auto m = static_cast<Eigen::Index>(rb.free.size());

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    const int dof = ce.dofs.global[i];
    g[i] = cs.constant(dof);
    for (const auto& t : cs.expansion(dof)) {
      const auto pos = std::lower_bound(rb.free.begin(), rb.free.end(), t.free) - rb.free.begin();
      T(i, pos) += t.coefficient;
    }
  }
  const Eigen::MatrixXd ST = ce.stiffness * T;
  Eigen::MatrixXd R = T.transpose() * ST;
  rb.matrix = 0.5 * (R + R.transpose());
  rb.rhs = T.transpose() * (ce.rhs - ce.stiffness * g);
  return rb;
}

#ifdef DPG_HAVE_CHOLMOD
using DirectSolver = Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower>;
constexpr const char* kDirectName = "cholmod-supernodal";
#else
using DirectSolver = Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower>;
constexpr const char* kDirectName = "simplicial-llt";
#endif

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = (A * x - b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

}  // namespace

std::vector<CondensedElement> condense_all(const QuadMesh& mesh, const Spaces& spaces,
                                           const ProblemSpec& problem, const TestNormSpec& norm,
                                           const SolveOptions& options) {
  if (spaces.mesh_generation != mesh.generation())
    throw UsageError("spaces were built on a different mesh state");
  norm.validate();
  const ReferenceTables tables = ReferenceTables::make(spaces.p, spaces.dp, options.quad_points);
  const CellBatch batch{mesh, spaces, norm, problem.forcing, tables};
  return options.parallel ? condense_cells_parallel(batch) : condense_cells_serial(batch);
}

UnconstrainedSystem assemble_unconstrained(const std::vector<CondensedElement>& cells, int n_dofs) {
  std::vector<Eigen::Triplet<double>> trip;
  UnconstrainedSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(n_dofs);
  for (const auto& ce : cells) {
    const auto& g = ce.dofs.global;
    for (int j = 0; j < ce.dofs.size(); ++j) {
      sys.rhs[g[j]] += ce.rhs[j];
      for (int i = 0; i < ce.dofs.size(); ++i) trip.emplace_back(g[i], g[j], ce.stiffness(i, j));
    }
  }
  sys.matrix.resize(n_dofs, n_dofs);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

GlobalSystem assemble_global(const std::vector<CondensedElement>& cells, ConstraintSet constraints,
                             bool parallel) {
  if (!constraints.closed()) constraints.close();
  const auto n = static_cast<long>(cells.size());
  std::vector<ReducedBlock> blocks(cells.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long k = 0; k < n; ++k) blocks[k] = reduce(cells[k], constraints);
  } else {
    for (long k = 0; k < n; ++k) blocks[k] = reduce(cells[k], constraints);
  }

  std::size_t nnz = 0;
  for (const auto& b : blocks) nnz += b.free.size() * b.free.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(nnz);
  GlobalSystem sys;
  const int nf = constraints.n_free();
  sys.rhs = Eigen::VectorXd::Zero(nf);
  for (auto& b : blocks) {
    const auto m = b.free.size();
    for (std::size_t j = 0; j < m; ++j) {
      sys.rhs[b.free[j]] += b.rhs[j];
      for (std::size_t i = 0; i < m; ++i) trip.emplace_back(b.free[i], b.free[j], b.matrix(i, j));
    }
    b = ReducedBlock{};
  }
  sys.matrix.resize(nf, nf);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.constraints = std::move(constraints);
  return sys;
}

Eigen::VectorXd solve_spd(const SparseMatrix& A, const Eigen::VectorXd& b,
                          const SolveOptions& options, SolveStats* stats) {
  const auto t0 = Clock::now();
  const auto n = A.rows();
  SolveStats local;
  SolveStats& st = stats ? *stats : local;
  st.n_free = static_cast<int>(n);
  if (n == 0 || b.norm() == 0.0) {
    st.method = "trivial";
    st.relative_residual = 0.0;
    return Eigen::VectorXd::Zero(n);
  }

  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = A.coeff(i, i);
    if (!(a > 0.0) || !std::isfinite(a))
      throw SolverError("singular system after boundary conditions (zero pivot at free dof " +
                        std::to_string(i) + ")");
    d[i] = 1.0 / std::sqrt(a);
  }
  SparseMatrix As = A;
  for (int k = 0; k < As.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(As, k); it; ++it) it.valueRef() *= d[it.row()] * d[it.col()];

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> inverse;
  DirectSolver direct;
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  bool use_cg = options.iterative;
  if (!use_cg) {
    try {
      direct.compute(As);
      if (direct.info() != Eigen::Success)
        throw SolverError("singular system after boundary conditions (Cholesky failed)");
      inverse = [&direct](const Eigen::VectorXd& r) -> Eigen::VectorXd { return direct.solve(r); };
      st.method = kDirectName;
    } catch (const std::bad_alloc&) {
      use_cg = true;
    }
  }
  if (use_cg) {
    cg.setTolerance(1e-12);
    cg.setMaxIterations(static_cast<Eigen::Index>(std::max<Eigen::Index>(1000, 20 * n)));
    cg.compute(As);
    inverse = [&cg](const Eigen::VectorXd& r) -> Eigen::VectorXd {
      Eigen::VectorXd z = cg.solve(r);
      if (cg.info() != Eigen::Success)
        throw SolverError("conjugate gradient did not converge (singular system after boundary conditions?)");
      return z;
    };
    st.method = "cg";
  }

  Eigen::VectorXd x = d.asDiagonal() * inverse(d.asDiagonal() * b);
  double rel = relative_residual(A, x, b);
  for (int step = 0; step < options.refinement_steps && rel > 1e-14; ++step) {
    const Eigen::VectorXd r = b - A * x;
    const Eigen::VectorXd dx = d.asDiagonal() * inverse(d.asDiagonal() * r);
    const Eigen::VectorXd candidate = x + dx;
    const double rc = relative_residual(A, candidate, b);
    if (!(rc < rel)) break;
    x = candidate;
    rel = rc;
  }
  st.relative_residual = rel;
  st.solve_ms = ms_since(t0);
  if (!x.allFinite() || !(rel <= 1e-10))
    throw SolverError("linear solve failed: relative residual " + std::to_string(rel) +
                      " (singular or severely ill-conditioned system after boundary conditions)");
  return x;
}

BlockedSolution solve(const QuadMesh& mesh, const Spaces& spaces, const ProblemSpec& problem,
                      const TestNormSpec& norm, const SolveOptions& options) {
  BlockedSolution sol;
  auto t0 = Clock::now();
  auto cells = condense_all(mesh, spaces, problem, norm, options);
  sol.stats.condense_ms = ms_since(t0);

  t0 = Clock::now();
  GlobalSystem sys = assemble_global(cells, make_constraints(spaces, problem.dirichlet), options.parallel);
  sol.stats.assemble_ms = ms_since(t0);

  const Eigen::VectorXd y = solve_spd(sys.matrix, sys.rhs, options, &sol.stats);
  sol.coefficients = sys.constraints.distribute(y);
  if (!sol.coefficients.allFinite()) throw SolverError("non-finite solution coefficients");
  sol.stats.n_dofs = spaces.n_dofs();
  sol.spaces = std::make_shared<const Spaces>(spaces);
  sol.mesh_generation = mesh.generation();
  sol.norm = norm;
  if (options.keep_elements)
    sol.elements = std::make_shared<const std::vector<CondensedElement>>(std::move(cells));
  return sol;
}

namespace {

Estimate collect(const std::vector<CondensedElement>& cells, std::vector<double> eta) {
  Estimate est;
  est.cells.reserve(cells.size());
  for (const auto& c : cells) est.cells.push_back(c.cell);
  double sum = 0.0;
  for (double e : eta) sum += e * e;
  est.eta = std::move(eta);
  est.total = std::sqrt(sum);
  return est;
}

}  // namespace

Estimate estimate(const QuadMesh& mesh, const BlockedSolution& solution, const ProblemSpec& problem,
                  bool parallel) {
  if (solution.mesh_generation != mesh.generation() || !solution.spaces)
    throw UsageError("estimate: solution was computed on a different mesh state");
  if (solution.elements) return estimate_coefficients(solution, solution.coefficients, parallel);
  SolveOptions opt;
  opt.parallel = parallel;
  const auto cells = condense_all(mesh, *solution.spaces, problem, solution.norm, opt);
  auto eta = parallel ? residual_norms_parallel(cells, solution.coefficients)
                      : residual_norms_serial(cells, solution.coefficients);
  return collect(cells, std::move(eta));
}

Estimate estimate_coefficients(const BlockedSolution& solution, const Eigen::VectorXd& coefficients,
                               bool parallel) {
  if (!solution.elements) throw UsageError("estimate_coefficients: solution has no cached cells");
  const auto& cells = *solution.elements;
  auto eta = parallel ? residual_norms_parallel(cells, coefficients)
                      : residual_norms_serial(cells, coefficients);
  return collect(cells, std::move(eta));
}

namespace {

Eigen::VectorXd cell_block(const BlockedSolution& s, int block, int cell, int size) {
  const DofMap& map = block == 0 ? s.spaces->u : s.spaces->sigma;
  return s.coefficients.segment(s.spaces->offset[block] + map.cell_offset[cell], size);
}

}  // namespace

double eval_u(const BlockedSolution& s, int cell, Point ref) {
  const ReferenceBasis basis(BasisKind::ScalarSquare, s.spaces->p);
  const Tabulation t = basis.tabulate(std::span<const Point>(&ref, 1));
  return t.values.row(0).dot(cell_block(s, 0, cell, basis.size()));
}

Vector2 eval_sigma(const BlockedSolution& s, int cell, Point ref) {
  const ReferenceBasis basis(BasisKind::ScalarSquare, s.spaces->p);
  const Tabulation t = basis.tabulate(std::span<const Point>(&ref, 1));
  const int n = basis.size();
  const Eigen::VectorXd c = cell_block(s, 1, cell, 2 * n);
  return {t.values.row(0).dot(c.head(n)), t.values.row(0).dot(c.tail(n))};
}

FieldErrors field_errors(const QuadMesh& mesh, const BlockedSolution& s, const ProblemSpec& problem,
                         int n_points) {
  if (s.mesh_generation != mesh.generation())
    throw UsageError("field_errors: solution was computed on a different mesh state");
  if (!problem.has_exact()) throw InputError("field_errors: problem has no exact solution");
  const int np = n_points > 0 ? n_points : s.spaces->p + s.spaces->dp + 3;
  const Quadrature2D rule = tensor_rule(gauss_legendre(np));
  const ReferenceBasis basis(BasisKind::ScalarSquare, s.spaces->p);
  const Eigen::MatrixXd phi = basis.tabulate(rule.points).values;
  const int nb = basis.size();

  const auto& active = mesh.active_cells();
  const auto n = static_cast<long>(active.size());
  std::vector<double> eu(active.size()), es(active.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    const int c = active[k];
    const Rect& box = mesh.cell(c).box;
    const Eigen::VectorXd uh = phi * cell_block(s, 0, c, nb);
    const Eigen::VectorXd sc = cell_block(s, 1, c, 2 * nb);
    const Eigen::VectorXd sx = phi * sc.head(nb);
    const Eigen::VectorXd sy = phi * sc.tail(nb);
    double au = 0.0, as = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point x{box.lo.x + rule.points[q].x * box.width(), box.lo.y + rule.points[q].y * box.height()};
      const double w = rule.weights[q] * box.area();
      const double du = problem.exact_u(x) - uh[q];
      const Vector2 sg = problem.exact_sigma(x);
      au += w * du * du;
      as += w * ((sg[0] - sx[q]) * (sg[0] - sx[q]) + (sg[1] - sy[q]) * (sg[1] - sy[q]));
    }
    eu[k] = au;
    es[k] = as;
  }
  double su = 0.0, ss = 0.0;
  for (long k = 0; k < n; ++k) {
    su += eu[k];
    ss += es[k];
  }
  FieldErrors fe;
  fe.l2_u = std::sqrt(su);
  fe.l2_sigma = std::sqrt(ss);
  fe.eps_l2_sigma = problem.eps * fe.l2_sigma;
  return fe;
}

}  // namespace dpg
