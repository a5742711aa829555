#include "spraykit/operators.hpp"

#include <algorithm>
#include <cmath>

namespace spraykit {
namespace {

using Eigen::Index;

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

void check_scalar(const ScalarModel& F, const TangentPoint& p) {
  if (p.x.size() != F.n || p.y.size() != F.n)
    throw std::invalid_argument("tangent point dimension does not match n = " + std::to_string(F.n));
}

void check_pair(const SprayModel& m, const ScalarModel& F) {
  if (m.n != F.n)
    throw std::invalid_argument("spray n = " + std::to_string(m.n) + " but function n = " + std::to_string(F.n));
}

Eigen::MatrixXd ddj_from_jet(const Jet3& f, std::size_t n) {
  const std::size_t d = 2 * n;
  // theta_a = sum_c dF/dz^c J^c_a; only the dx^i slots are nonzero.
  std::vector<Jet3> theta(d, Jet3(d));
  for (std::size_t i = 0; i < n; ++i) theta[i] = f.derivative(n + i);
  Eigen::MatrixXd omega(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      omega(static_cast<Index>(a), static_cast<Index>(b)) = theta[b].d(a) - theta[a].d(b);
  return omega;
}

Eigen::VectorXd hc_gradient(const Jet3& f, const TangentPoint& p) {
  // d(CF - F) with CF = y^j F_{y^j}
  const std::size_t n = p.dim();
  const std::size_t d = 2 * n;
  Eigen::VectorXd g(static_cast<Index>(d));
  for (std::size_t a = 0; a < d; ++a) {
    double v = -f.d(a);
    for (std::size_t j = 0; j < n; ++j) v += p.y[j] * f.d(a, n + j);
    if (a >= n) v += f.d(a);
    g(static_cast<Index>(a)) = v;
  }
  return g;
}

double form3(const Eigen::MatrixXd& omega, const VectorForm2& r, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
             const Eigen::VectorXd& z) {
  return r(x, y).dot(omega * z) + r(y, z).dot(omega * x) + r(z, x).dot(omega * y);
}

double jet_scale(const Jet3& f) {
  double s = 0.0;
  for (std::size_t r = 0; r < f.size(); ++r) {
    if (jet_multi_index(f.nvars(), r).size() > 2) break;
    s = std::max(s, std::fabs(f.coeff(r)));
  }
  return s;
}

}  // namespace

Eigen::MatrixXd ddJ(const ScalarModel& F, const TangentPoint& p) {
  check_scalar(F, p);
  return ddj_from_jet(eval_jet(F.expr, p), F.n);
}

RapcsakValue P_S(const SprayModel& m, const ScalarModel& F, const TangentPoint& p) {
  check_pair(m, F);
  check_scalar(F, p);
  const std::size_t n = m.n;
  const Jet3 f = eval_jet(F.expr, p);
  const Eigen::MatrixXd omega = ddj_from_jet(f, n);
  const Eigen::VectorXd s = spray_vector(m, p);

  RapcsakValue out;
  out.omega.resize(static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double v = -f.d(i);
    for (std::size_t j = 0; j < n; ++j) v += p.y[j] * f.d(j, n + i) + s(static_cast<Index>(n + j)) * f.d(n + j, n + i);
    out.omega(static_cast<Index>(i)) = v;
  }
  out.contraction = omega.transpose() * s;
  const Eigen::VectorXd grad = hc_gradient(f, p);
  const auto N = static_cast<Index>(n);
  out.cross_check = max_abs(Eigen::VectorXd(out.contraction.head(N) - (out.omega - grad.head(N))));
  out.vertical = max_abs(Eigen::VectorXd(out.contraction.tail(N)));
  return out;
}

HomogeneityValue P_C(const ScalarModel& F, const TangentPoint& p) {
  check_scalar(F, p);
  const Jet3 f = eval_jet(F.expr, p);
  HomogeneityValue out;
  out.value = -f.value();
  for (std::size_t j = 0; j < F.n; ++j) out.value += p.y[j] * f.d(F.n + j);
  out.gradient = hc_gradient(f, p);
  return out;
}

GammaFormValue P_Gamma(const SprayModel& m, const ScalarModel& F, const TangentPoint& p) {
  check_pair(m, F);
  const std::size_t n = m.n;
  const Eigen::MatrixXd omega = ddJ(F, p);
  const ConnectionData conn = connection_at(m, p);
  const Eigen::VectorXd s = spray_vector(m, p);
  const AdaptedFrame frame = adapted_frame(conn, p, s);

  const Eigen::MatrixXd igo = conn.gamma.transpose() * omega + omega * conn.gamma;
  GammaFormValue out;
  out.frame_matrix = frame.basis.transpose() * igo * frame.basis;
  const auto d = static_cast<std::size_t>(frame.basis.cols());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double v = out.frame_matrix(static_cast<Index>(i), static_cast<Index>(j));
      if (i < n && j < n) {
        if (i < j) out.components.push_back(v);
      } else {
        out.off_block = std::max(out.off_block, std::fabs(v));
      }
    }
  // P_S F(hX) = 1/2 i_Gamma Omega(S, hX) on the frame vectors h_i, with h_n = hS = S.
  const Eigen::VectorXd hs = frame.h(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double lhs = hs.dot(omega * frame.h(i));
    const double rhs = 0.5 * out.frame_matrix(static_cast<Index>(n - 1), static_cast<Index>(i));
    out.containment = std::max(out.containment, std::fabs(lhs - rhs));
  }
  return out;
}

CurvatureObstruction obstruction_R(const SprayModel& m, const ScalarModel& F, const TangentPoint& p) {
  check_pair(m, F);
  const std::size_t n = m.n;
  CurvatureObstruction out;
  if (n < 3) return out;
  const Eigen::MatrixXd omega = ddJ(F, p);
  const CurvatureData curv = curvature_at(m, p);
  const AdaptedFrame frame = adapted_frame_at(m, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const Eigen::VectorXd a = frame.h(i), b = frame.h(j), c = frame.h(k);
        const double v1 = form3(omega, curv.R, a, b, c);
        const double v2 = form3(omega, curv.R_from_phi, a, b, c);
        out.components.push_back(v1);
        out.components_from_phi.push_back(v2);
        out.route_difference = std::max(out.route_difference, std::fabs(v1 - v2));
      }
  return out;
}

EulerLagrangeValue euler_lagrange_form(const SprayModel& m, const ScalarModel& E, const TangentPoint& p) {
  check_pair(m, E);
  check_scalar(E, p);
  const std::size_t n = m.n;
  const auto N = static_cast<Index>(n);
  const Jet3 e = eval_jet(E.expr, p);
  const Eigen::MatrixXd omega = ddj_from_jet(e, n);
  const Eigen::VectorXd s = spray_vector(m, p);

  EulerLagrangeValue out;
  // i_S dd_J E + d(CE - E); hc_gradient is exactly d(CE - E).
  out.form = omega.transpose() * s + hc_gradient(e, p);
  out.coordinate.resize(N);
  for (std::size_t i = 0; i < n; ++i) {
    double v = -e.d(i);
    for (std::size_t j = 0; j < n; ++j) v += p.y[j] * e.d(j, n + i) + s(static_cast<Index>(n + j)) * e.d(n + j, n + i);
    out.coordinate(static_cast<Index>(i)) = v;
  }
  out.vertical = max_abs(Eigen::VectorXd(out.form.tail(N)));
  out.two_path = max_abs(Eigen::VectorXd(out.form.head(N) - out.coordinate));
  return out;
}

const char* to_string(HessianStatus s) {
  switch (s) {
    case HessianStatus::PositiveDefinite: return "positive-definite";
    case HessianStatus::Degenerate: return "degenerate";
    case HessianStatus::Indefinite: return "indefinite";
  }
  return "?";
}

HessianValue hessian_metric(const ScalarModel& F, const TangentPoint& p, double tol) {
  check_scalar(F, p);
  const std::size_t n = F.n;
  const Jet3 f = eval_jet(F.expr, p);
  if (!(f.value() > 0.0))
    throw std::invalid_argument("Finsler function must be positive, got F = " + std::to_string(f.value()));
  const Jet3 energy = f * f * 0.5;
  HessianValue out;
  out.g.resize(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.g(static_cast<Index>(i), static_cast<Index>(j)) = energy.d(n + i, n + j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.g, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  const double band = tol * (1.0 + max_abs(out.g));
  if (out.min_eigenvalue > band)
    out.status = HessianStatus::PositiveDefinite;
  else if (out.min_eigenvalue >= -band)
    out.status = HessianStatus::Degenerate;
  else
    out.status = HessianStatus::Indefinite;
  return out;
}

ProjectiveFactorValue projective_factor(const SprayModel& m, const SprayModel* m_tilde, const ScalarModel& F_tilde,
                                        const TangentPoint& p) {
  check_pair(m, F_tilde);
  check_scalar(F_tilde, p);
  const Jet3 f = eval_jet(F_tilde.expr, p);
  if (!(f.value() > 0.0))
    throw std::invalid_argument("projective factor needs F~ > 0, got " + std::to_string(f.value()));
  const Eigen::VectorXd s = spray_vector(m, p);
  double sf = 0.0;
  for (std::size_t a = 0; a < 2 * m.n; ++a) sf += s(static_cast<Index>(a)) * f.d(a);
  ProjectiveFactorValue out;
  out.factor = sf / (2.0 * f.value());
  if (m_tilde != nullptr) {
    if (m_tilde->n != m.n) throw std::invalid_argument("second spray dimension mismatch");
    const Eigen::VectorXd st = spray_vector(*m_tilde, p);
    double c = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
      const auto k = static_cast<Index>(m.n + i);
      c = std::max(c, std::fabs(st(k) - (s(k) - 2.0 * out.factor * p.y[i])));
    }
    out.consistency = c;
  }
  return out;
}

SolutionAudit solution_audit(const SprayModel& m, const ScalarModel& F, std::span<const TangentPoint> samples,
                             const AuditTolerances& tol) {
  check_pair(m, F);
  SolutionAudit out;
  bool all_pc = true, all_ps = true, all_pg = true, all_ir = true, all_pd = true;
  bool first = true;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const TangentPoint& p = samples[k];
    SampleAudit a;
    a.index = k;
    try {
      const Jet3 f = eval_jet(F.expr, p);
      const Eigen::VectorXd s = spray_vector(m, p);
      a.scale = 1.0 + std::fabs(f.value()) + jet_scale(f) + max_abs(s);
      const HomogeneityValue pc = P_C(F, p);
      a.p_c = std::max(std::fabs(pc.value), max_abs(pc.gradient));
      const RapcsakValue ps = P_S(m, F, p);
      a.p_s = max_abs(ps.omega);
      a.p_s_vertical = ps.vertical;
      const GammaFormValue pg = P_Gamma(m, F, p);
      for (double v : pg.components) a.p_gamma = std::max(a.p_gamma, std::fabs(v));
      a.containment = pg.containment;
      const CurvatureObstruction ir = obstruction_R(m, F, p);
      for (double v : ir.components) a.i_r = std::max(a.i_r, std::fabs(v));
      const HessianValue hv = hessian_metric(F, p, tol.hessian);
      a.min_eigenvalue = hv.min_eigenvalue;
      a.hessian = hv.status;
    } catch (const std::exception& e) {
      a.ok = false;
      a.error = e.what();
      ++out.failed_samples;
      out.samples.push_back(std::move(a));
      continue;
    }
    const double t = tol.residual * a.scale;
    all_pc = all_pc && a.p_c <= t;
    all_ps = all_ps && a.p_s <= t && a.p_s_vertical <= t;
    all_pg = all_pg && a.p_gamma <= t;
    all_ir = all_ir && a.i_r <= t;
    all_pd = all_pd && a.hessian == HessianStatus::PositiveDefinite;
    out.max_p_c = std::max(out.max_p_c, a.p_c);
    out.max_p_s = std::max(out.max_p_s, std::max(a.p_s, a.p_s_vertical));
    out.max_p_gamma = std::max(out.max_p_gamma, a.p_gamma);
    out.max_i_r = std::max(out.max_i_r, a.i_r);
    out.max_containment = std::max(out.max_containment, a.containment);
    out.min_eigenvalue = first ? a.min_eigenvalue : std::min(out.min_eigenvalue, a.min_eigenvalue);
    first = false;
    out.samples.push_back(std::move(a));
  }
  const bool usable = out.failed_samples == 0 && !samples.empty();
  out.pass_p_c = usable && all_pc;
  out.pass_p_s = usable && all_ps;
  out.pass_p_gamma = usable && all_pg;
  out.pass_i_r = usable && all_ir;
  out.pass_hessian = usable && all_pd;
  out.order2_solution = out.pass_p_c && out.pass_p_s;
  out.liftable_p1 = out.order2_solution && out.pass_p_gamma;
  out.liftable_p2 = out.liftable_p1 && out.pass_i_r;
  return out;
}

}  // namespace spraykit
