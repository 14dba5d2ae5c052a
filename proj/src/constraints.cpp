#include "dpg/constraints.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "dpg/error.hpp"

namespace dpg {

ConstraintSet::ConstraintSet(int n_dofs) : line_index_(n_dofs, -1) {}

void ConstraintSet::add_line(ConstraintLine line) {
  if (line.dof < 0 || line.dof >= n_dofs()) throw Error("ConstraintSet: dof out of range");
  if (line_index_[line.dof] >= 0)
    throw Error("ConstraintSet: dof " + std::to_string(line.dof) + " constrained twice");
  line_index_[line.dof] = static_cast<int>(lines_.size());
  lines_.push_back(std::move(line));
  closed_ = false;
}

void ConstraintSet::close() {
  const int n = n_dofs();
  free_index_.assign(n, -1);
  n_free_ = 0;
  for (int d = 0; d < n; ++d)
    if (line_index_[d] < 0) free_index_[d] = n_free_++;

  // Depth-first resolution of each line into free dofs.
  std::vector<std::map<int, double>> resolved(lines_.size());
  std::vector<double> resolved_constant(lines_.size(), 0.0);
  std::vector<char> state(lines_.size(), 0);  // 0 new, 1 on stack, 2 done

  std::function<void(int)> resolve = [&](int li) {
    if (state[li] == 2) return;
    if (state[li] == 1)
      throw Error("ConstraintSet: constraint cycle through dof " + std::to_string(lines_[li].dof));
    state[li] = 1;
    auto& out = resolved[li];
    double c0 = lines_[li].inhomogeneity;
    for (const auto& [master, coeff] : lines_[li].entries) {
      const int mi = line_index_[master];
      if (mi < 0) {
        out[free_index_[master]] += coeff;
      } else {
        resolve(mi);
        for (const auto& [f, c] : resolved[mi]) out[f] += coeff * c;
        c0 += coeff * resolved_constant[mi];
      }
    }
    resolved_constant[li] = c0;
    state[li] = 2;
  };
  for (int li = 0; li < static_cast<int>(lines_.size()); ++li) resolve(li);

  term_begin_.assign(n + 1, 0);
  terms_.clear();
  constant_.assign(n, 0.0);
  for (int d = 0; d < n; ++d) {
    term_begin_[d] = static_cast<int>(terms_.size());
    const int li = line_index_[d];
    if (li < 0) {
      terms_.push_back({free_index_[d], 1.0});
    } else {
      for (const auto& [f, c] : resolved[li])
        if (c != 0.0) terms_.push_back({f, c});
      constant_[d] = resolved_constant[li];
    }
  }
  term_begin_[n] = static_cast<int>(terms_.size());
  closed_ = true;
}

SparseMatrix ConstraintSet::transfer() const {
  if (!closed_) throw UsageError("ConstraintSet::transfer: call close() first");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(terms_.size());
  for (int d = 0; d < n_dofs(); ++d)
    for (const Term& t : expansion(d)) trip.emplace_back(d, t.free, t.coefficient);
  SparseMatrix T(n_dofs(), n_free_);
  T.setFromTriplets(trip.begin(), trip.end());
  return T;
}

Eigen::VectorXd ConstraintSet::offset_vector() const {
  if (!closed_) throw UsageError("ConstraintSet::offset_vector: call close() first");
  return Eigen::Map<const Eigen::VectorXd>(constant_.data(), n_dofs());
}

Eigen::VectorXd ConstraintSet::distribute(const Eigen::VectorXd& free_values) const {
  if (!closed_) throw UsageError("ConstraintSet::distribute: call close() first");
  Eigen::VectorXd x(n_dofs());
  for (int d = 0; d < n_dofs(); ++d) {
    double v = constant_[d];
    for (const Term& t : expansion(d)) v += t.coefficient * free_values[t.free];
    x[d] = v;
  }
  return x;
}

Eigen::VectorXd ConstraintSet::restrict_to_free(const Eigen::VectorXd& full) const {
  Eigen::VectorXd y(n_free_);
  for (int d = 0; d < n_dofs(); ++d)
    if (free_index_[d] >= 0) y[free_index_[d]] = full[d];
  return y;
}

ConstraintSet make_constraints(const Spaces& spaces, const ScalarFunction& dirichlet) {
  ConstraintSet cs(spaces.n_dofs());
  auto add_block = [&cs](const DofMap& map, int offset, const ScalarFunction* datum) {
    for (const ConstraintLine& line : map.constraints) {
      ConstraintLine g{line.dof + offset, {}, line.inhomogeneity};
      for (const auto& [m, c] : line.entries) g.entries.emplace_back(m + offset, c);
      if (datum && *datum && map.on_boundary[line.dof]) g.inhomogeneity = (*datum)(map.dof_points[line.dof]);
      cs.add_line(std::move(g));
    }
  };
  add_block(spaces.u, spaces.offset[0], nullptr);
  add_block(spaces.sigma, spaces.offset[1], nullptr);
  add_block(spaces.hat_u, spaces.offset[2], &dirichlet);
  add_block(spaces.hat_sigma, spaces.offset[3], nullptr);
  cs.close();
  return cs;
}

CondensedSystem apply_constraints(const ConstraintSet& constraints, const SparseMatrix& matrix,
                                  const Eigen::VectorXd& rhs) {
  const SparseMatrix T = constraints.transfer();
  const Eigen::VectorXd g = constraints.offset_vector();
  CondensedSystem out;
  out.matrix = SparseMatrix(T.transpose() * (matrix * T));
  out.rhs = T.transpose() * (rhs - matrix * g);
  return out;
}

CondensedSystem apply_constraints(const Spaces& spaces, const SparseMatrix& matrix,
                                  const Eigen::VectorXd& rhs, const ScalarFunction& dirichlet) {
  return apply_constraints(make_constraints(spaces, dirichlet), matrix, rhs);
}

}  // namespace dpg
