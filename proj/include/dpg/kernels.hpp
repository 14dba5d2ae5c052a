#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dpg/forms.hpp"

namespace dpg {

/// Result of eliminating the optimal test functions of one cell.
///
/// With G = L L^T, W = L^{-1} B and z = L^{-1} l:
///   S_K = B^T G^{-1} B = W^T W,  f_K = B^T G^{-1} l = W^T z,
/// and the residual representative of a local trial vector x has test norm
///   eta_K = |z - W x|.
struct CondensedElement {
  int cell = -1;
  ElementDofs dofs;
  Eigen::MatrixXd stiffness;
  Eigen::VectorXd rhs;
  Eigen::MatrixXd whitened_b;
  Eigen::VectorXd whitened_load;

  double residual_norm(const Eigen::VectorXd& local) const;
};

/// Throws AssemblyError naming the cell when G is not positive definite.
CondensedElement condense_element(const ElementSystem& es);

/// Inputs shared by all cells of one discretization.
struct CellBatch {
  const QuadMesh& mesh;
  const Spaces& spaces;
  const TestNormSpec& norm;
  const ScalarFunction& forcing;
  const ReferenceTables& tables;
};

/// Assemble and condense every active cell, in ascending cell order. The
/// parallel variant produces results bitwise identical to the serial one.
std::vector<CondensedElement> condense_cells_serial(const CellBatch& batch);
std::vector<CondensedElement> condense_cells_parallel(const CellBatch& batch);

/// eta_K for every condensed cell, given the full global coefficient vector.
std::vector<double> residual_norms_serial(const std::vector<CondensedElement>& cells,
                                          const Eigen::VectorXd& coefficients);
std::vector<double> residual_norms_parallel(const std::vector<CondensedElement>& cells,
                                            const Eigen::VectorXd& coefficients);

Eigen::VectorXd gather(const ElementDofs& dofs, const Eigen::VectorXd& coefficients);

}  // namespace dpg
