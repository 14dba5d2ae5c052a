#include "dpg/forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpg/basis.hpp"
#include "dpg/error.hpp"

namespace dpg {

std::string to_string(NormVariant v) {
  switch (v) {
    case NormVariant::Proposed: return "proposed";
    case NormVariant::ProposedPlain: return "proposed-plain";
    case NormVariant::MD: return "md";
    case NormVariant::QO: return "qo";
  }
  return "unknown";
}

NormVariant parse_norm(const std::string& name) {
  if (name == "proposed") return NormVariant::Proposed;
  if (name == "proposed-plain") return NormVariant::ProposedPlain;
  if (name == "md") return NormVariant::MD;
  if (name == "qo") return NormVariant::QO;
  throw InputError("unknown test norm '" + name + "' (expected proposed, proposed-plain, md or qo)");
}

double TestNormSpec::c_tau(double area) const {
  if (variant == NormVariant::ProposedPlain) return 1.0 / std::sqrt(eps);
  return std::min(1.0 / std::sqrt(eps), 1.0 / std::sqrt(area));
}

double TestNormSpec::c_v(double area) const { return std::min(std::sqrt(eps / area), 1.0); }

void TestNormSpec::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eps must be positive and finite");
  if (!convection) throw InputError("test norm needs a convection field");
}

namespace {

Point side_point(int side, double r) {
  switch (side) {
    case kBottom: return {r, 0.0};
    case kRight: return {1.0, r};
    case kTop: return {r, 1.0};
    default: return {0.0, r};
  }
}

Point physical(const Rect& box, Point ref) {
  return {box.lo.x + ref.x * box.width(), box.lo.y + ref.y * box.height()};
}

std::string where(int cell, Point x) {
  std::ostringstream os;
  os.precision(17);
  os << "cell " << cell << " at (" << x.x << ", " << x.y << ")";
  return os.str();
}

struct Convection {
  Eigen::VectorXd ax;
  Eigen::VectorXd ay;
};

Convection eval_convection(const Rect& box, const TestNormSpec& norm, const ReferenceTables& t,
                           int cell) {
  const auto nq = static_cast<Eigen::Index>(t.cell_rule.size());
  Convection c{Eigen::VectorXd(nq), Eigen::VectorXd(nq)};
  for (Eigen::Index k = 0; k < nq; ++k) {
    const Point x = physical(box, t.cell_rule.points[k]);
    const Vector2 a = norm.convection(x);
    if (!std::isfinite(a[0]) || !std::isfinite(a[1]))
      throw AssemblyError("non-finite convection field in " + where(cell, x));
    c.ax[k] = a[0];
    c.ay[k] = a[1];
  }
  return c;
}

}  // namespace

ReferenceTables ReferenceTables::make(int p, int dp, int n_points) {
  if (p < 0 || dp < 1) throw InputError("ReferenceTables: need p >= 0 and dp >= 1");
  ReferenceTables t;
  t.p = p;
  t.q = p + dp;
  t.n_points = n_points > 0 ? n_points : p + dp + 2;
  t.edge_rule = gauss_legendre(t.n_points);
  t.cell_rule = tensor_rule(t.edge_rule);

  const ReferenceBasis trial(BasisKind::ScalarSquare, p);
  const ReferenceBasis test(BasisKind::ScalarSquare, t.q);
  t.trial = trial.tabulate(t.cell_rule.points).values;
  Tabulation tt = test.tabulate(t.cell_rule.points);
  t.test = std::move(tt.values);
  t.test_dx = std::move(tt.dx);
  t.test_dy = std::move(tt.dy);

  const LagrangeBasis1D trace(p + 1);
  t.trace = trace.values(t.edge_rule.points);

  std::vector<Point> pts(t.edge_rule.size());
  for (int side = 0; side < 4; ++side) {
    for (int part = 0; part < 3; ++part) {
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const double s = t.edge_rule.points[k];
        const double r = part == 0 ? s : 0.5 * ((part - 1) + s);
        pts[k] = side_point(side, r);
      }
      t.side_test[side][part] = test.tabulate(pts).values;
    }
  }
  return t;
}

Eigen::MatrixXd assemble_gram(const Rect& box, const TestNormSpec& norm,
                              const ReferenceTables& t, int cell) {
  norm.validate();
  const double hx = box.width();
  const double hy = box.height();
  const double eps = norm.eps;
  const auto nq = static_cast<Eigen::Index>(t.cell_rule.size());
  const auto ns = t.test.cols();
  const Convection a = eval_convection(box, norm, t, cell);

  Eigen::VectorXd sw(nq);
  for (Eigen::Index k = 0; k < nq; ++k) sw[k] = std::sqrt(t.cell_rule.weights[k] * hx * hy);

  // Weighted physical tabulations.
  const Eigen::MatrixXd V = sw.asDiagonal() * t.test;
  const Eigen::MatrixXd Dx = sw.asDiagonal() * t.test_dx / hx;
  const Eigen::MatrixXd Dy = sw.asDiagonal() * t.test_dy / hy;
  const Eigen::MatrixXd Av = a.ax.asDiagonal() * Dx + a.ay.asDiagonal() * Dy;

  // Each feature is a row block of R acting on [v | tau_x | tau_y]; G = R^T R.
  const int n_features = norm.variant == NormVariant::MD ? 7
                         : norm.variant == NormVariant::QO ? 4
                                                           : 6;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n_features * nq, 3 * ns);
  auto block = [&](int f, int comp) { return R.block(f * nq, comp * ns, nq, ns); };

  const double area = box.area();
  switch (norm.variant) {
    case NormVariant::Proposed:
    case NormVariant::ProposedPlain: {
      const double se = std::sqrt(eps);
      const double ct = norm.c_tau(area);
      block(0, 0) = -se * Av;
      block(0, 1) = se * Dx;
      block(0, 2) = se * Dy;
      block(1, 0) = ct * eps * Dx;
      block(1, 1) = ct * V;
      block(2, 0) = ct * eps * Dy;
      block(2, 2) = ct * V;
      block(3, 0) = se * V;
      block(4, 0) = se * Dx;
      block(5, 0) = se * Dy;
      break;
    }
    case NormVariant::MD: {
      const double se = std::sqrt(eps);
      const double ct = norm.c_tau(area);
      block(0, 0) = norm.c_v(area) * V;
      block(1, 0) = se * Dx;
      block(2, 0) = se * Dy;
      block(3, 0) = Av;
      block(4, 1) = ct * V;
      block(5, 2) = ct * V;
      block(6, 1) = Dx;
      block(6, 2) = Dy;
      break;
    }
    case NormVariant::QO: {
      block(0, 0) = -Av;
      block(0, 1) = Dx;
      block(0, 2) = Dy;
      block(1, 0) = Dx;
      block(1, 1) = V / eps;
      block(2, 0) = Dy;
      block(2, 2) = V / eps;
      block(3, 0) = V;
      break;
    }
  }
  Eigen::MatrixXd G = R.transpose() * R;
  return 0.5 * (G + G.transpose());
}

Eigen::MatrixXd assemble_b(const QuadMesh& mesh, int cell, const ElementDofs& dofs,
                           const TestNormSpec& norm, const ReferenceTables& t) {
  const Rect& box = mesh.cell(cell).box;
  const double hx = box.width();
  const double hy = box.height();
  const double eps = norm.eps;
  const auto nq = static_cast<Eigen::Index>(t.cell_rule.size());
  const auto ns = t.test.cols();
  const auto nu = t.trial.cols();
  const Convection a = eval_convection(box, norm, t, cell);

  Eigen::VectorXd w(nq);
  for (Eigen::Index k = 0; k < nq; ++k) w[k] = t.cell_rule.weights[k] * hx * hy;
  const Eigen::MatrixXd Wphi = w.asDiagonal() * t.trial;
  const Eigen::MatrixXd Dx = t.test_dx / hx;
  const Eigen::MatrixXd Dy = t.test_dy / hy;
  const Eigen::MatrixXd Av = a.ax.asDiagonal() * Dx + a.ay.asDiagonal() * Dy;

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3 * ns, dofs.size());
  const Eigen::MatrixXd VtW = t.test.transpose() * Wphi;
  const Eigen::MatrixXd DxtW = Dx.transpose() * Wphi;
  const Eigen::MatrixXd DytW = Dy.transpose() * Wphi;

  // u (div tau - a.grad v)
  B.block(0, 0, ns, nu) = -(Av.transpose() * Wphi);
  B.block(ns, 0, ns, nu) = DxtW;
  B.block(2 * ns, 0, ns, nu) = DytW;
  // sigma . (tau + eps grad v)
  B.block(0, nu, ns, nu) = eps * DxtW;
  B.block(ns, nu, ns, nu) = VtW;
  B.block(0, 2 * nu, ns, nu) = eps * DytW;
  B.block(2 * ns, 2 * nu, ns, nu) = VtW;

  const auto ne = static_cast<Eigen::Index>(t.edge_rule.size());
  for (int side = 0; side < 4; ++side) {
    const Point n = side_normal(side);
    const bool vertical = side == kLeft || side == kRight;
    const double length = vertical ? hy : hx;

    // -<hat u, tau . n_K> over the whole side.
    Eigen::VectorXd we(ne);
    for (Eigen::Index k = 0; k < ne; ++k) we[k] = t.edge_rule.weights[k] * length;
    const Eigen::MatrixXd Mu = t.side_test[side][0].transpose() * (we.asDiagonal() * t.trace);
    const int comp = vertical ? 1 : 2;
    const double nk = vertical ? n.x : n.y;
    const auto& cols = dofs.side_hat_u[side];
    for (std::size_t m = 0; m < cols.size(); ++m) B.block(comp * ns, cols[m], ns, 1) -= nk * Mu.col(m);

    // +sgn(n_K) <hat sigma_n, v> per covering sub-edge.
    for (const auto& sub : dofs.side_hat_sigma[side]) {
      const double sub_len = sub.part == 0 ? length : 0.5 * length;
      for (Eigen::Index k = 0; k < ne; ++k) we[k] = t.edge_rule.weights[k] * sub_len;
      const Eigen::MatrixXd Ms =
          t.side_test[side][sub.part].transpose() * (we.asDiagonal() * t.trace);
      const double sgn = mesh.skeleton().edges[sub.edge].sign_for(cell);
      for (std::size_t m = 0; m < sub.columns.size(); ++m)
        B.block(0, sub.columns[m], ns, 1) += sgn * Ms.col(m);
    }
  }
  return B;
}

Eigen::VectorXd assemble_load(const Rect& box, const ScalarFunction& forcing,
                              const ReferenceTables& t, int cell) {
  const auto nq = static_cast<Eigen::Index>(t.cell_rule.size());
  const auto ns = t.test.cols();
  Eigen::VectorXd wf(nq);
  for (Eigen::Index k = 0; k < nq; ++k) {
    const Point x = physical(box, t.cell_rule.points[k]);
    const double f = forcing ? forcing(x) : 0.0;
    if (!std::isfinite(f)) throw AssemblyError("non-finite forcing in " + where(cell, x));
    wf[k] = t.cell_rule.weights[k] * box.area() * f;
  }
  Eigen::VectorXd l = Eigen::VectorXd::Zero(3 * ns);
  l.head(ns) = t.test.transpose() * wf;
  return l;
}

ElementSystem assemble_element(const QuadMesh& mesh, const Spaces& spaces, int cell,
                               const TestNormSpec& norm, const ScalarFunction& forcing,
                               const ReferenceTables& tables) {
  ElementSystem es;
  es.cell = cell;
  es.dofs = element_dofs(mesh, spaces, cell);
  const Rect& box = mesh.cell(cell).box;
  es.gram = assemble_gram(box, norm, tables, cell);
  es.bmat = assemble_b(mesh, cell, es.dofs, norm, tables);
  es.load = assemble_load(box, forcing, tables, cell);
  return es;
}

}  // namespace dpg
