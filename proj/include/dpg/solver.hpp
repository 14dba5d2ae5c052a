#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dpg/constraints.hpp"
#include "dpg/dofmap.hpp"
#include "dpg/forms.hpp"
#include "dpg/kernels.hpp"
#include "dpg/mesh.hpp"
#include "dpg/problems.hpp"

namespace dpg {

struct SolveOptions {
  bool parallel = true;
  int quad_points = -1;  // per axis; default p + dp + 2
  bool iterative = false;  // skip the direct factorization and use CG
  int refinement_steps = 2;
  bool keep_elements = true;  // cache condensed cells for the estimator
};

struct SolveStats {
  int n_dofs = 0;
  int n_free = 0;
  std::string method;
  double relative_residual = 0.0;
  double condense_ms = 0.0;
  double assemble_ms = 0.0;
  double solve_ms = 0.0;
};

/// Normal equations of the residual minimization restricted to free dofs.
struct GlobalSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  ConstraintSet constraints;
};

/// Sum of the condensed cell contributions in the full (unconstrained)
/// numbering, before any constraint is applied.
struct UnconstrainedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Coefficients of (u, sigma, hat-u, hat-sigma) in the global numbering of
/// `spaces`; constrained dofs carry their constrained values.
struct BlockedSolution {
  Eigen::VectorXd coefficients;
  std::shared_ptr<const Spaces> spaces;
  std::uint64_t mesh_generation = 0;
  TestNormSpec norm;
  SolveStats stats;
  std::shared_ptr<const std::vector<CondensedElement>> elements;

  Eigen::VectorXd block(int b) const {
    return coefficients.segment(spaces->offset[b], spaces->offset[b + 1] - spaces->offset[b]);
  }
  Eigen::VectorXd u() const { return block(0); }
  Eigen::VectorXd sigma() const { return block(1); }
  Eigen::VectorXd hat_u() const { return block(2); }
  Eigen::VectorXd hat_sigma() const { return block(3); }
};

std::vector<CondensedElement> condense_all(const QuadMesh& mesh, const Spaces& spaces,
                                           const ProblemSpec& problem, const TestNormSpec& norm,
                                           const SolveOptions& options = {});

UnconstrainedSystem assemble_unconstrained(const std::vector<CondensedElement>& cells, int n_dofs);

/// Element-wise elimination of the constraints x = T y + g followed by a
/// scatter in ascending cell order.
GlobalSystem assemble_global(const std::vector<CondensedElement>& cells,
                             ConstraintSet constraints, bool parallel = true);

/// Solves a symmetric positive definite system (Jacobi scaling, sparse
/// Cholesky, iterative refinement; CG when requested or out of memory).
Eigen::VectorXd solve_spd(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                          const SolveOptions& options, SolveStats* stats = nullptr);

BlockedSolution solve(const QuadMesh& mesh, const Spaces& spaces, const ProblemSpec& problem,
                      const TestNormSpec& norm, const SolveOptions& options = {});

struct Estimate {
  std::vector<int> cells;  // ascending active ids
  std::vector<double> eta;  // eta_K, aligned with cells
  double total = 0.0;
};

/// eta_K = |residual representative on K|_V. Throws UsageError when the
/// solution belongs to another mesh state.
Estimate estimate(const QuadMesh& mesh, const BlockedSolution& solution,
                  const ProblemSpec& problem, bool parallel = true);

/// Estimator of an arbitrary coefficient vector on the cached cells.
Estimate estimate_coefficients(const BlockedSolution& solution, const Eigen::VectorXd& coefficients,
                               bool parallel = true);

struct FieldErrors {
  double l2_u = 0.0;
  double l2_sigma = 0.0;
  double eps_l2_sigma = 0.0;
};

/// L2 errors against the exact solution with n_points Gauss points per axis
/// (default p + dp + 3).
FieldErrors field_errors(const QuadMesh& mesh, const BlockedSolution& solution,
                         const ProblemSpec& problem, int n_points = -1);

/// u_h and sigma_h at a point of the reference square of an active cell.
double eval_u(const BlockedSolution& solution, int cell, Point ref);
Vector2 eval_sigma(const BlockedSolution& solution, int cell, Point ref);

}  // namespace dpg
