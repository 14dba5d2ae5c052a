#include "dpg/normprobe.hpp"

#include "dpg/basis.hpp"
#include "dpg/error.hpp"
#include "dpg/problems.hpp"
#include "dpg/quadrature.hpp"
#include "dpg/solver.hpp"

namespace dpg {

Eigen::MatrixXd field_norm_gram(const QuadMesh& mesh, const Spaces& spaces, double eps) {
  if (!(eps > 0.0)) throw InputError("field_norm_gram: eps must be positive");
  const Quadrature2D rule = tensor_rule(gauss_legendre(spaces.p + 2));
  const ReferenceBasis basis(BasisKind::ScalarSquare, spaces.p);
  const Eigen::MatrixXd phi = basis.tabulate(rule.points).values;
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
  const Eigen::MatrixXd ref_mass = phi.transpose() * w.asDiagonal() * phi;
  const int nb = basis.size();

  const int nf = spaces.offset[2];
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nf, nf);
  for (int c : mesh.active_cells()) {
    const double area = mesh.cell(c).box.area();
    const int u0 = spaces.offset[0] + spaces.u.cell_offset[c];
    const int s0 = spaces.offset[1] + spaces.sigma.cell_offset[c];
    M.block(u0, u0, nb, nb) = (area / eps) * ref_mass;
    M.block(s0, s0, nb, nb) = (area * eps) * ref_mass;
    M.block(s0 + nb, s0 + nb, nb, nb) = (area * eps) * ref_mass;
  }
  return M;
}

Eigen::MatrixXd field_energy_gram(const QuadMesh& mesh, const Spaces& spaces,
                                  const TestNormSpec& norm) {
  ProblemSpec zero = zero_problem(mesh.domain(), norm.eps, norm.convection);
  SolveOptions opt;
  const auto cells = condense_all(mesh, spaces, zero, norm, opt);
  const int nf = spaces.offset[2];
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nf, nf);
  for (const auto& ce : cells) {
    const auto& g = ce.dofs.global;
    for (int j = 0; j < ce.dofs.size(); ++j) {
      if (g[j] >= nf) continue;
      for (int i = 0; i < ce.dofs.size(); ++i)
        if (g[i] < nf) S(g[i], g[j]) += ce.stiffness(i, j);
    }
  }
  return S;
}

EquivalenceConstants generalized_extremes(const Eigen::MatrixXd& S, const Eigen::MatrixXd& M) {
  if (Eigen::LLT<Eigen::MatrixXd>(M).info() != Eigen::Success)
    throw SolverError("norm probe: field norm matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw SolverError("norm probe: generalized eigen-solver did not converge");
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

EquivalenceConstants equivalence_constants(const QuadMesh& mesh, int p, int dp,
                                           const TestNormSpec& norm) {
  norm.validate();
  const Spaces spaces = build_spaces(mesh, p, dp);
  return generalized_extremes(field_energy_gram(mesh, spaces, norm),
                              field_norm_gram(mesh, spaces, norm.eps));
}

ProbeReport probe_sweep(std::span<const NormVariant> norms, std::span<const double> eps_list,
                        int mesh_n, int p, int dp) {
  if (mesh_n < 1) throw InputError("probe: mesh size must be >= 1");
  const QuadMesh mesh = create_rect_mesh({{0.0, 0.0}, {1.0, 1.0}}, mesh_n, mesh_n);
  ProbeReport report;
  for (NormVariant v : norms) {
    for (double eps : eps_list) {
      const TestNormSpec norm{v, eps, [](Point) { return Vector2(1.0, 1.0); }};
      const EquivalenceConstants ec = equivalence_constants(mesh, p, dp, norm);
      report.records.push_back(
          {v, eps, p, dp, mesh_n, ec.lambda_min, ec.lambda_max, ec.lambda_max / ec.lambda_min});
    }
  }
  return report;
}

}  // namespace dpg
