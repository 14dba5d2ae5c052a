#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dpg/forms.hpp"
#include "dpg/problems.hpp"
#include "dpg/solver.hpp"

namespace dpg {

struct AdaptConfig {
  ProblemSpec problem;
  NormVariant norm = NormVariant::Proposed;
  int p = 1;
  int dp = kDefaultEnrichment;
  double fraction = 0.10;
  long budget = 200000;  // stop once the free dof count reaches this
  int max_cycles = 30;
  SolveOptions solve;

  void validate() const;
};

struct CycleRecord {
  int cycle = 0;
  int n_cells = 0;
  long n_dofs = 0;  // free dofs
  double l2_u = 0.0;
  double eps_l2_sigma = 0.0;
  double eta = 0.0;
  double ratio_u_sigma = 0.0;
  double ratio_eta_u = 0.0;
  double wall_ms = 0.0;
};

struct RunHistory {
  std::string problem;
  NormVariant norm = NormVariant::Proposed;
  double eps = 1.0;
  int p = 1;
  bool uniform = false;
  std::vector<CycleRecord> records;
};

/// Everything known at the end of one cycle. `marked` is empty on the last
/// cycle.
struct CycleView {
  const QuadMesh& mesh;
  const BlockedSolution& solution;
  const Estimate& estimate;
  const std::vector<int>& marked;
  const CycleRecord& record;
};
using CycleObserver = std::function<void(const CycleView&)>;

/// The ceil(fraction * n) cells with the largest indicator, ties broken by the
/// smaller cell id; returned in ascending id order.
std::vector<int> mark_top_fraction(std::span<const int> cells, std::span<const double> eta,
                                   double fraction);

/// solve, estimate, record, stop on budget or cycle limit, mark, refine.
RunHistory adaptive_loop(const AdaptConfig& config, const CycleObserver& observer = {});

/// As adaptive_loop with every cell marked.
RunHistory uniform_loop(const AdaptConfig& config, const CycleObserver& observer = {});

}  // namespace dpg
