#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpg/dofmap.hpp"
#include "dpg/forms.hpp"
#include "dpg/mesh.hpp"

namespace dpg {

/// blockdiag(mass_u / eps, eps * mass_sigma) over the field dofs (u block then
/// sigma block, in the global numbering of `spaces`).
Eigen::MatrixXd field_norm_gram(const QuadMesh& mesh, const Spaces& spaces, double eps);

/// Field block S_ff of the discrete energy Gram sum_K B^T G^{-1} B, i.e. all
/// trace dofs fixed to zero.
Eigen::MatrixXd field_energy_gram(const QuadMesh& mesh, const Spaces& spaces,
                                  const TestNormSpec& norm);

struct EquivalenceConstants {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Extremal eigenvalues of S x = lambda M x (dense). Throws SolverError when the
/// eigen-solver fails or M is not positive definite.
EquivalenceConstants generalized_extremes(const Eigen::MatrixXd& S, const Eigen::MatrixXd& M);

EquivalenceConstants equivalence_constants(const QuadMesh& mesh, int p, int dp,
                                           const TestNormSpec& norm);

struct ProbeRecord {
  NormVariant norm = NormVariant::ProposedPlain;
  double eps = 1.0;
  int p = 1;
  int dp = kDefaultEnrichment;
  int mesh_n = 4;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double ratio = 0.0;
};

struct ProbeReport {
  std::vector<ProbeRecord> records;
};

/// Probe on the unit square with an n x n mesh and a = (1, 1).
ProbeReport probe_sweep(std::span<const NormVariant> norms, std::span<const double> eps_list,
                        int mesh_n, int p, int dp = kDefaultEnrichment);

}  // namespace dpg
