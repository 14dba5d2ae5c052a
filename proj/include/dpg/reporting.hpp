#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpg/adapt.hpp"
#include "dpg/mesh.hpp"
#include "dpg/normprobe.hpp"
#include "dpg/solver.hpp"

namespace dpg {

/// log(e1/e2) / log(h1/h2); empty when either error is not positive or the
/// sizes do not decrease.
std::optional<double> observed_rate(double e1, double e2, double h1, double h2);

enum class RateBasis {
  CellSize,  // h = n_cells^{-1/2}, exact for uniform refinement
  Dofs,      // h ~ n_dofs^{-1/2}
};

struct RateRow {
  long dofs_a = 0;
  long dofs_b = 0;
  double error_a = 0.0;
  double error_b = 0.0;
  std::optional<double> rate;
};

struct RateTable {
  std::vector<RateRow> rows;
};

RateTable rate_table(const RunHistory& history, RateBasis basis = RateBasis::Dofs);

inline constexpr const char* kHistoryHeader =
    "cycle,ncells,ndof,l2_u,eps_l2_sigma,eta,ratio_u_sigma,ratio_eta_u,wall_ms";
inline constexpr const char* kProbeHeader = "norm,eps,p,mesh,lambda_min,lambda_max,ratio";

void write_history_csv(const std::filesystem::path& path, const RunHistory& history);
std::vector<CycleRecord> read_history_csv(const std::filesystem::path& path);
void write_probe_csv(const std::filesystem::path& path, const ProbeReport& report);

/// Legacy VTK unstructured grid of the active cells (quads).
void write_mesh_vtk(const std::filesystem::path& path, const QuadMesh& mesh);
/// As write_mesh_vtk with cell data u_h and |sigma_h| at the cell centre and eta_K.
void write_solution_vtk(const std::filesystem::path& path, const QuadMesh& mesh,
                        const BlockedSolution& solution, const Estimate& estimate);
/// One rectangle per active cell.
void write_mesh_svg(const std::filesystem::path& path, const QuadMesh& mesh, int pixels = 800);

struct NormComparison {
  RunHistory first;
  RunHistory second;
  // (index into first.records, index into second.records) with the nearest dof count.
  std::vector<std::pair<int, int>> aligned;
  double final_error_ratio = 0.0;  // first / second final l2_u
};

NormComparison compare_runs(RunHistory first, RunHistory second);

/// Adaptive runs of `config` under the two test norms.
NormComparison compare_norms(AdaptConfig config, NormVariant first = NormVariant::Proposed,
                             NormVariant second = NormVariant::MD,
                             const CycleObserver& first_observer = {},
                             const CycleObserver& second_observer = {});

}  // namespace dpg
