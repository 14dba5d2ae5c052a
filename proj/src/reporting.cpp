#include "dpg/reporting.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dpg/error.hpp"

namespace dpg {

std::optional<double> observed_rate(double e1, double e2, double h1, double h2) {
  if (!(e1 > 0.0) || !(e2 > 0.0) || !(h1 > h2) || !(h2 > 0.0)) return std::nullopt;
  return std::log(e1 / e2) / std::log(h1 / h2);
}

RateTable rate_table(const RunHistory& history, RateBasis basis) {
  RateTable table;
  const auto& r = history.records;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    RateRow row{r[i].n_dofs, r[i + 1].n_dofs, r[i].l2_u, r[i + 1].l2_u, std::nullopt};
    const double h1 = basis == RateBasis::Dofs ? 1.0 / std::sqrt(static_cast<double>(r[i].n_dofs))
                                               : 1.0 / std::sqrt(static_cast<double>(r[i].n_cells));
    const double h2 = basis == RateBasis::Dofs
                          ? 1.0 / std::sqrt(static_cast<double>(r[i + 1].n_dofs))
                          : 1.0 / std::sqrt(static_cast<double>(r[i + 1].n_cells));
    row.rate = observed_rate(row.error_a, row.error_b, h1, h2);
    table.rows.push_back(row);
  }
  return table;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw InputError("bad number '" + s + "'");
  return v;
}

void write_vtk_grid(std::ofstream& out, const QuadMesh& mesh) {
  const auto& active = mesh.active_cells();
  out << "# vtk DataFile Version 3.0\nactive cells\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices().size() << " double\n";
  for (const Point& v : mesh.vertices()) out << v.x << ' ' << v.y << " 0\n";
  out << "CELLS " << active.size() << ' ' << 5 * active.size() << '\n';
  for (int c : active) {
    const auto& vs = mesh.cell(c).vertices;
    out << "4 " << vs[0] << ' ' << vs[1] << ' ' << vs[2] << ' ' << vs[3] << '\n';
  }
  out << "CELL_TYPES " << active.size() << '\n';
  for (std::size_t i = 0; i < active.size(); ++i) out << "9\n";
}

}  // namespace

void write_history_csv(const std::filesystem::path& path, const RunHistory& history) {
  auto out = open_out(path);
  out << kHistoryHeader << '\n';
  for (const auto& r : history.records) {
    out << r.cycle << ',' << r.n_cells << ',' << r.n_dofs << ',' << r.l2_u << ',' << r.eps_l2_sigma
        << ',' << r.eta << ',' << r.ratio_u_sigma << ',' << r.ratio_eta_u << ',' << r.wall_ms << '\n';
  }
}

std::vector<CycleRecord> read_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kHistoryHeader)
    throw InputError(path.string() + ": missing or unexpected header");
  std::vector<CycleRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 9) throw InputError(path.string() + ": expected 9 fields in '" + line + "'");
    CycleRecord r;
    r.cycle = std::stoi(f[0]);
    r.n_cells = std::stoi(f[1]);
    r.n_dofs = std::stol(f[2]);
    r.l2_u = parse_double(f[3]);
    r.eps_l2_sigma = parse_double(f[4]);
    r.eta = parse_double(f[5]);
    r.ratio_u_sigma = parse_double(f[6]);
    r.ratio_eta_u = parse_double(f[7]);
    r.wall_ms = parse_double(f[8]);
    out.push_back(r);
  }
  return out;
}

void write_probe_csv(const std::filesystem::path& path, const ProbeReport& report) {
  auto out = open_out(path);
  out << kProbeHeader << '\n';
  for (const auto& r : report.records) {
    out << to_string(r.norm) << ',' << r.eps << ',' << r.p << ',' << r.mesh_n << ',' << r.lambda_min
        << ',' << r.lambda_max << ',' << r.ratio << '\n';
  }
}

void write_mesh_vtk(const std::filesystem::path& path, const QuadMesh& mesh) {
  auto out = open_out(path);
  write_vtk_grid(out, mesh);
}

void write_solution_vtk(const std::filesystem::path& path, const QuadMesh& mesh,
                        const BlockedSolution& solution, const Estimate& estimate) {
  if (solution.mesh_generation != mesh.generation())
    throw UsageError("write_solution_vtk: solution belongs to another mesh state");
  auto out = open_out(path);
  write_vtk_grid(out, mesh);
  const auto& active = mesh.active_cells();
  out << "CELL_DATA " << active.size() << '\n';
  out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
  for (int c : active) out << eval_u(solution, c, {0.5, 0.5}) << '\n';
  out << "SCALARS sigma_magnitude double 1\nLOOKUP_TABLE default\n";
  for (int c : active) out << eval_sigma(solution, c, {0.5, 0.5}).norm() << '\n';
  out << "SCALARS eta double 1\nLOOKUP_TABLE default\n";
  for (std::size_t k = 0; k < active.size(); ++k)
    out << (k < estimate.eta.size() ? estimate.eta[k] : 0.0) << '\n';
}

void write_mesh_svg(const std::filesystem::path& path, const QuadMesh& mesh, int pixels) {
  auto out = open_out(path);
  const Rect& d = mesh.domain();
  const double scale = pixels / std::max(d.width(), d.height());
  const double w = d.width() * scale;
  const double h = d.height() * scale;
  out << std::setprecision(8);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  for (int c : mesh.active_cells()) {
    const Rect& b = mesh.cell(c).box;
    out << "<rect x=\"" << (b.lo.x - d.lo.x) * scale << "\" y=\"" << (d.hi.y - b.hi.y) * scale
        << "\" width=\"" << b.width() * scale << "\" height=\"" << b.height() * scale
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }
  out << "</svg>\n";
}

NormComparison compare_runs(RunHistory first, RunHistory second) {
  if (first.records.empty() || second.records.empty())
    throw InputError("compare_runs: empty history");
  NormComparison cmp;
  for (std::size_t i = 0; i < first.records.size(); ++i) {
    int best = 0;
    for (std::size_t j = 1; j < second.records.size(); ++j) {
      if (std::labs(second.records[j].n_dofs - first.records[i].n_dofs) <
          std::labs(second.records[best].n_dofs - first.records[i].n_dofs))
        best = static_cast<int>(j);
    }
    cmp.aligned.emplace_back(static_cast<int>(i), best);
  }
  cmp.final_error_ratio = first.records.back().l2_u / second.records.back().l2_u;
  cmp.first = std::move(first);
  cmp.second = std::move(second);
  return cmp;
}

NormComparison compare_norms(AdaptConfig config, NormVariant first, NormVariant second,
                             const CycleObserver& first_observer,
                             const CycleObserver& second_observer) {
  auto run = [&config](NormVariant v, const CycleObserver& obs) {
    config.norm = v;
    try {
      return adaptive_loop(config, obs);
    } catch (const Error& e) {
      throw Error(to_string(v) + " norm: " + e.what());
    }
  };
  RunHistory a = run(first, first_observer);
  RunHistory b = run(second, second_observer);
  return compare_runs(std::move(a), std::move(b));
}

}  // namespace dpg
