#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "dpg/mesh.hpp"

namespace dpg {

enum class SpaceKind {
  FieldScalar,      // discontinuous Q_p per cell
  FieldVector,      // two FieldScalar components
  TraceContinuous,  // continuous degree-k polynomials on the skeleton
  TraceEdgewise,    // degree-k polynomials per skeleton edge, no continuity
  BrokenTest,       // (v, tau) in Q_q x [Q_q]^2 per cell
};

/// dof = sum(coefficient * master) + inhomogeneity
struct ConstraintLine {
  int dof = -1;
  std::vector<std::pair<int, double>> entries;
  double inhomogeneity = 0.0;
};

/// Degree-of-freedom numbering of one discrete space on the active mesh.
///
/// Trace spaces number every vertex and every finest skeleton edge, plus the
/// interior of each hanging coarse side (continuous traces only); dofs on the
/// fine halves of a hanging side are then constrained to the coarse polynomial.
struct DofMap {
  SpaceKind kind = SpaceKind::FieldScalar;
  int degree = 0;
  int n_dofs = 0;
  std::uint64_t mesh_generation = 0;

  // Field and broken-test spaces, indexed by cell id (-1 when inactive).
  std::vector<int> cell_offset;
  int dofs_per_cell = 0;

  // Trace spaces. Continuous: vertex_dof per vertex id, edge_offset/hanging_offset
  // point at the degree-1 interior dofs. Edgewise: edge_offset points at the
  // degree+1 dofs of each skeleton edge.
  std::vector<int> vertex_dof;
  std::vector<int> edge_offset;
  std::vector<int> hanging_offset;
  std::vector<Point> dof_points;

  // Hanging-node lines plus homogeneous boundary lines (Dirichlet for continuous
  // traces, Neumann for edgewise traces).
  std::vector<ConstraintLine> constraints;
  std::vector<char> on_boundary;

  int n_constrained() const { return static_cast<int>(constraints.size()); }
  int n_free() const { return n_dofs - n_constrained(); }
};

/// Builds the numbering for `kind` at `degree`. Trace spaces require degree >= 1.
/// With `boundary_constraints`, boundary dofs receive homogeneous lines; the
/// actual Dirichlet values are supplied later by apply_constraints.
DofMap build_dofmap(const QuadMesh& mesh, SpaceKind kind, int degree,
                    bool boundary_constraints = true);

/// Dofs of a continuous-trace map on side `side` of `cell`, in increasing
/// running coordinate (degree + 1 entries).
std::vector<int> side_trace_dofs(const QuadMesh& mesh, const DofMap& map, int cell, int side);

/// Dofs of an edgewise-trace map on skeleton edge `edge`.
std::vector<int> edge_trace_dofs(const DofMap& map, int edge);

/// Default test-space enrichment. With R_{p+1} fluxes, dp = 2 leaves one
/// flux profile per edge orthogonal to every test trace, so B has a kernel.
inline constexpr int kDefaultEnrichment = 3;

/// The discrete trial space U_h = S_p x [S_p]^2 x Q_{p+1} x R_{p+1} together
/// with the broken enriched test space of degree p + dp.
struct Spaces {
  int p = 1;
  int dp = kDefaultEnrichment;
  DofMap u;
  DofMap sigma;
  DofMap hat_u;
  DofMap hat_sigma;
  // Start of each block in the global numbering, followed by the total.
  std::array<int, 5> offset{};
  std::uint64_t mesh_generation = 0;

  int n_dofs() const { return offset[4]; }
  int trace_degree() const { return p + 1; }
  int test_degree() const { return p + dp; }
  int n_test_scalar() const { return (test_degree() + 1) * (test_degree() + 1); }
  int n_test() const { return 3 * n_test_scalar(); }
  int n_free() const { return u.n_free() + sigma.n_free() + hat_u.n_free() + hat_sigma.n_free(); }
};

Spaces build_spaces(const QuadMesh& mesh, int p, int dp);

/// Local trial numbering of one cell. Columns are ordered u, sigma_x, sigma_y,
/// hat-u, hat-sigma; `global` maps each column to the global (unconstrained) dof.
struct ElementDofs {
  int cell = -1;
  std::vector<int> global;
  int n_u = 0;
  int n_sigma = 0;
  int n_hat_u = 0;
  int n_hat_sigma = 0;
  // Local hat-u columns of each side, degree + 1 entries in running order.
  std::array<std::vector<int>, 4> side_hat_u;
  // Per side and sub-edge: skeleton edge id and its local hat-sigma columns.
  struct SubEdge {
    int edge = -1;
    int part = 0;  // 0 whole side, 1 lower half, 2 upper half
    std::vector<int> columns;
  };
  std::array<std::vector<SubEdge>, 4> side_hat_sigma;

  int size() const { return static_cast<int>(global.size()); }
  int hat_u_begin() const { return n_u + n_sigma; }
  int hat_sigma_begin() const { return n_u + n_sigma + n_hat_u; }
};

ElementDofs element_dofs(const QuadMesh& mesh, const Spaces& spaces, int cell);

}  // namespace dpg
