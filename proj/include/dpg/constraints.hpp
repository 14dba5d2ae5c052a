#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dpg/dofmap.hpp"

namespace dpg {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Affine constraints x = T y + g in a global numbering, where y collects the
/// unconstrained (free) dofs.
class ConstraintSet {
 public:
  struct Term {
    int free;
    double coefficient;
  };

  explicit ConstraintSet(int n_dofs = 0);

  void add_line(ConstraintLine line);
  bool is_constrained(int dof) const { return line_index_[dof] >= 0; }

  /// Resolves chains so every expansion refers to free dofs only. Throws on a
  /// cyclic dependency.
  void close();
  bool closed() const { return closed_; }

  int n_dofs() const { return static_cast<int>(line_index_.size()); }
  int n_free() const { return n_free_; }
  int free_index(int dof) const { return free_index_[dof]; }

  std::span<const Term> expansion(int dof) const {
    return {terms_.data() + term_begin_[dof], terms_.data() + term_begin_[dof + 1]};
  }
  double constant(int dof) const { return constant_[dof]; }

  SparseMatrix transfer() const;
  Eigen::VectorXd offset_vector() const;
  /// Full coefficient vector from the free values.
  Eigen::VectorXd distribute(const Eigen::VectorXd& free_values) const;
  /// Free values picked out of a full vector.
  Eigen::VectorXd restrict_to_free(const Eigen::VectorXd& full) const;

 private:
  std::vector<ConstraintLine> lines_;
  std::vector<int> line_index_;
  std::vector<int> free_index_;
  std::vector<int> term_begin_;
  std::vector<Term> terms_;
  std::vector<double> constant_;
  int n_free_ = 0;
  bool closed_ = false;
};

using ScalarFunction = std::function<double(Point)>;

/// Global constraints of the trial space: hanging nodes, Dirichlet values of
/// hat-u interpolated from `dirichlet` at the trace nodes (zero when empty) and
/// hat-sigma = 0 on Neumann edges.
ConstraintSet make_constraints(const Spaces& spaces, const ScalarFunction& dirichlet = {});

struct CondensedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// T^T A T and T^T (b - A g) for an assembled global system.
CondensedSystem apply_constraints(const ConstraintSet& constraints, const SparseMatrix& matrix,
                                  const Eigen::VectorXd& rhs);

CondensedSystem apply_constraints(const Spaces& spaces, const SparseMatrix& matrix,
                                  const Eigen::VectorXd& rhs, const ScalarFunction& dirichlet);

}  // namespace dpg
