#include "dpg/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "dpg/error.hpp"

namespace dpg {

void AdaptConfig::validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InputError("marking fraction must lie in (0, 1]");
  if (p < 0) throw InputError("polynomial degree must be >= 0");
  if (dp < 1) throw InputError("test enrichment must be >= 1");
  if (max_cycles < 1) throw InputError("max cycles must be >= 1");
  if (budget < 1) throw InputError("dof budget must be >= 1");
  if (!(problem.eps > 0.0)) throw InputError("eps must be positive");
}

std::vector<int> mark_top_fraction(std::span<const int> cells, std::span<const double> eta,
                                   double fraction) {
  if (cells.empty()) throw InputError("mark_top_fraction: no cells");
  if (cells.size() != eta.size()) throw InputError("mark_top_fraction: size mismatch");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InputError("mark_top_fraction: fraction must lie in (0, 1]");
  const auto n = cells.size();
  auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  count = std::clamp<std::size_t>(count, 1, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + count, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (eta[a] != eta[b]) return eta[a] > eta[b];
                      return cells[a] < cells[b];
                    });
  std::vector<int> marked;
  marked.reserve(count);
  for (std::size_t k = 0; k < count; ++k) marked.push_back(cells[order[k]]);
  std::sort(marked.begin(), marked.end());
  return marked;
}

namespace {

[[noreturn]] void rethrow_with_cycle(int cycle) {
  const std::string prefix = "cycle " + std::to_string(cycle) + ": ";
  try {
    throw;
  } catch (const SolverError& e) {
    throw SolverError(prefix + e.what());
  } catch (const AssemblyError& e) {
    throw AssemblyError(prefix + e.what());
  } catch (const InputError& e) {
    throw InputError(prefix + e.what());
  } catch (const UsageError& e) {
    throw UsageError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

RunHistory run_loop(const AdaptConfig& config, bool uniform, const CycleObserver& observer) {
  config.validate();
  const ProblemSpec& problem = config.problem;
  const TestNormSpec norm = problem.norm(config.norm);
  RunHistory history;
  history.problem = problem.name;
  history.norm = config.norm;
  history.eps = problem.eps;
  history.p = config.p;
  history.uniform = uniform;

  QuadMesh mesh = initial_mesh(problem);
  for (int cycle = 0;; ++cycle) {
    const auto t0 = std::chrono::steady_clock::now();
    CycleRecord rec;
    std::vector<int> marked;
    try {
      const Spaces spaces = build_spaces(mesh, config.p, config.dp);
      if (cycle == 0 && config.budget < spaces.n_free())
        throw InputError("dof budget " + std::to_string(config.budget) +
                         " is below the initial dof count " + std::to_string(spaces.n_free()));
      const BlockedSolution sol = solve(mesh, spaces, problem, norm, config.solve);
      const Estimate est = estimate(mesh, sol, problem, config.solve.parallel);

      rec.cycle = cycle;
      rec.n_cells = static_cast<int>(mesh.n_active());
      rec.n_dofs = spaces.n_free();
      rec.eta = est.total;
      if (problem.has_exact()) {
        const FieldErrors fe = field_errors(mesh, sol, problem);
        rec.l2_u = fe.l2_u;
        rec.eps_l2_sigma = fe.eps_l2_sigma;
        rec.ratio_u_sigma = fe.eps_l2_sigma > 0.0 ? fe.l2_u / fe.eps_l2_sigma
                                                  : std::numeric_limits<double>::quiet_NaN();
        rec.ratio_eta_u = fe.l2_u > 0.0 ? est.total / fe.l2_u : std::numeric_limits<double>::quiet_NaN();
      } else {
        rec.l2_u = rec.eps_l2_sigma = rec.ratio_u_sigma = rec.ratio_eta_u =
            std::numeric_limits<double>::quiet_NaN();
      }
      const bool last = rec.n_dofs >= config.budget || cycle + 1 >= config.max_cycles;
      if (!last) {
        marked = uniform ? std::vector<int>(est.cells.begin(), est.cells.end())
                         : mark_top_fraction(est.cells, est.eta, config.fraction);
      }
      rec.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      history.records.push_back(rec);
      if (observer) observer(CycleView{mesh, sol, est, marked, history.records.back()});
      if (last) break;
      mesh = refine(mesh, marked);
    } catch (const Error&) {
      rethrow_with_cycle(cycle);
    }
  }
  return history;
}

}  // namespace

RunHistory adaptive_loop(const AdaptConfig& config, const CycleObserver& observer) {
  return run_loop(config, false, observer);
}

RunHistory uniform_loop(const AdaptConfig& config, const CycleObserver& observer) {
  return run_loop(config, true, observer);
}

}  // namespace dpg
