#include "dpg/kernels.hpp"

#include <exception>
#include <string>

#include "dpg/error.hpp"

namespace dpg {

double CondensedElement::residual_norm(const Eigen::VectorXd& local) const {
  return (whitened_load - whitened_b * local).norm();
}

CondensedElement condense_element(const ElementSystem& es) {
  Eigen::LLT<Eigen::MatrixXd> llt(es.gram);
  if (llt.info() != Eigen::Success)
    throw AssemblyError("test Gram matrix is not positive definite on cell " +
                        std::to_string(es.cell));
  CondensedElement ce;
  ce.cell = es.cell;
  ce.dofs = es.dofs;
  ce.whitened_b = llt.matrixL().solve(es.bmat);
  ce.whitened_load = llt.matrixL().solve(es.load);
  Eigen::MatrixXd s = ce.whitened_b.transpose() * ce.whitened_b;
  ce.stiffness = 0.5 * (s + s.transpose());
  ce.rhs = ce.whitened_b.transpose() * ce.whitened_load;
  return ce;
}

Eigen::VectorXd gather(const ElementDofs& dofs, const Eigen::VectorXd& coefficients) {
  Eigen::VectorXd x(dofs.size());
  for (int i = 0; i < dofs.size(); ++i) x[i] = coefficients[dofs.global[i]];
  return x;
}

namespace {

CondensedElement condense_one(const CellBatch& b, int cell) {
  return condense_element(
      assemble_element(b.mesh, b.spaces, cell, b.norm, b.forcing, b.tables));
}

}  // namespace

std::vector<CondensedElement> condense_cells_serial(const CellBatch& batch) {
  const auto& active = batch.mesh.active_cells();
  std::vector<CondensedElement> out;
  out.reserve(active.size());
  for (int c : active) out.push_back(condense_one(batch, c));
  return out;
}

std::vector<CondensedElement> condense_cells_parallel(const CellBatch& batch) {
  const auto& active = batch.mesh.active_cells();
  const auto n = static_cast<long>(active.size());
  std::vector<CondensedElement> out(active.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = condense_one(batch, active[i]);
    } catch (...) {
#pragma omp critical(dpg_condense_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<double> residual_norms_serial(const std::vector<CondensedElement>& cells,
                                          const Eigen::VectorXd& coefficients) {
  std::vector<double> eta(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    eta[i] = cells[i].residual_norm(gather(cells[i].dofs, coefficients));
  return eta;
}

std::vector<double> residual_norms_parallel(const std::vector<CondensedElement>& cells,
                                            const Eigen::VectorXd& coefficients) {
  const auto n = static_cast<long>(cells.size());
  std::vector<double> eta(cells.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) eta[i] = cells[i].residual_norm(gather(cells[i].dofs, coefficients));
  return eta;
}

}  // namespace dpg
