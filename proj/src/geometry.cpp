#include "spraykit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spraykit {
namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void check_point(const SprayModel& m, const TangentPoint& p) {
  if (p.x.size() != m.n || p.y.size() != m.n)
    throw std::invalid_argument("tangent point dimension " + std::to_string(p.x.size()) + " does not match spray n = " +
                                std::to_string(m.n));
  bool nonzero = false;
  for (double v : p.y) nonzero = nonzero || v != 0.0;
  if (!nonzero) throw std::invalid_argument("tangent point lies on the zero section (y = 0)");
}

// Nijenhuis torsion of K on the coordinate pair (d_a, d_b):
// [Kd_a, Kd_b] - K[Kd_a, d_b] - K[d_a, Kd_b]; the K^2[d_a, d_b] term vanishes.
JetVector nijenhuis(const JetEndo& k, std::size_t a, std::size_t b) {
  const std::size_t d = k.dim();
  const std::size_t nv = k(0, 0).nvars();
  const JetVector x = coordinate_field(a, d, nv);
  const JetVector y = coordinate_field(b, d, nv);
  const JetVector kx = k.column(a);
  const JetVector ky = k.column(b);
  JetVector out = lie_bracket(kx, ky);
  out = sub(out, apply_endo(k, lie_bracket(kx, y)));
  out = sub(out, apply_endo(k, lie_bracket(x, ky)));
  return out;
}

}  // namespace

Eigen::VectorXd VectorForm2::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    if (x(static_cast<Eigen::Index>(a)) == 0.0) continue;
    for (std::size_t b = 0; b < dim; ++b)
      out += x(static_cast<Eigen::Index>(a)) * y(static_cast<Eigen::Index>(b)) * at(a, b);
  }
  return out;
}

const char* to_string(SprayClass c) {
  switch (c) {
    case SprayClass::Flat: return "flat";
    case SprayClass::Isotropic: return "isotropic";
    case SprayClass::Generic: return "generic";
  }
  return "?";
}

double StructuralResiduals::max() const {
  return std::max({j_squared, gamma_squared, h_idempotent, v_idempotent, hv, jh, hj, js_minus_c, cs_bracket,
                   jc_bracket});
}

Eigen::MatrixXd vertical_endomorphism(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  j.bottomLeftCorner(N, N).setIdentity();
  return j;
}

Eigen::VectorXd liouville(const TangentPoint& p) {
  const auto n = static_cast<Eigen::Index>(p.dim());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) c(n + i) = p.y[static_cast<std::size_t>(i)];
  return c;
}

Eigen::VectorXd spray_vector(const SprayModel& m, const TangentPoint& p) {
  check_point(m, p);
  const auto n = static_cast<Eigen::Index>(m.n);
  Eigen::VectorXd s(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i) = p.y[static_cast<std::size_t>(i)];
    s(n + i) = eval(m.f[static_cast<std::size_t>(i)], p);
  }
  return s;
}

SprayJets spray_jets(const SprayModel& m, const TangentPoint& p) {
  check_point(m, p);
  const std::size_t n = m.n;
  const std::size_t d = 2 * n;
  SprayJets sj;
  sj.n = n;
  sj.S.resize(d, Jet3(d));
  sj.C.resize(d, Jet3(d));
  for (std::size_t i = 0; i < n; ++i) {
    sj.S[i] = Jet3::variable(n + i, p.y[i], d);
    sj.S[n + i] = eval_jet(m.f[i], p);
    sj.C[n + i] = Jet3::variable(n + i, p.y[i], d);
  }
  sj.J = JetEndo::constant(vertical_endomorphism(n), d);
  // Gamma = [J, S]
  sj.gamma = fn_bracket(sj.J, sj.S);
  sj.h = JetEndo(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      Jet3 e = sj.gamma(r, c);
      if (r == c) e += Jet3::constant(1.0, d);
      sj.h(r, c) = e * 0.5;
    }
  return sj;
}

ConnectionData connection_at(const SprayModel& m, const TangentPoint& p) {
  const SprayJets sj = spray_jets(m, p);
  const auto d = static_cast<Eigen::Index>(2 * m.n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd j = vertical_endomorphism(m.n);
  ConnectionData c;
  c.gamma = sj.gamma.value();
  c.h = 0.5 * (id + c.gamma);
  c.v = 0.5 * (id - c.gamma);
  const double g2 = max_abs(c.gamma * c.gamma - id);
  c.identity_residual = std::max({g2, max_abs(c.h * c.h - c.h), max_abs(c.v * c.v - c.v), max_abs(c.h * c.v),
                                  max_abs(j * c.h - j), max_abs(c.h * j)});
  const double scale = 1.0 + max_abs(c.gamma) * max_abs(c.gamma);
  if (g2 > 1e-9 * scale)
    throw GeometryError("connection fails Gamma^2 = Id (residual " + std::to_string(g2) + ")");
  return c;
}

StructuralResiduals structural_identities(const SprayModel& m, const TangentPoint& p) {
  const SprayJets sj = spray_jets(m, p);
  const auto d = static_cast<Eigen::Index>(2 * m.n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd j = vertical_endomorphism(m.n);
  const Eigen::MatrixXd g = sj.gamma.value();
  const Eigen::MatrixXd h = 0.5 * (id + g);
  const Eigen::MatrixXd v = 0.5 * (id - g);
  StructuralResiduals r;
  r.j_squared = max_abs(j * j);
  r.gamma_squared = max_abs(g * g - id);
  r.h_idempotent = max_abs(h * h - h);
  r.v_idempotent = max_abs(v * v - v);
  r.hv = max_abs(h * v);
  r.jh = max_abs(j * h - j);
  r.hj = max_abs(h * j);
  const Eigen::VectorXd s = value(sj.S);
  const Eigen::VectorXd c = value(sj.C);
  r.js_minus_c = (j * s - c).cwiseAbs().maxCoeff();
  r.cs_bracket = (value(lie_bracket(sj.C, sj.S)) - s).cwiseAbs().maxCoeff();
  r.jc_bracket = max_abs(fn_bracket(sj.J, sj.C).value() - j);
  return r;
}

CurvatureData curvature_at(const SprayModel& m, const TangentPoint& p) {
  const SprayJets sj = spray_jets(m, p);
  const std::size_t n = m.n;
  const std::size_t d = 2 * n;
  CurvatureData out;
  out.n = n;
  out.R.dim = d;
  out.R.values.assign(d * d, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)));
  std::vector<JetVector> rjets(d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      rjets[a * d + b] = nijenhuis(sj.h, a, b);
      out.R.values[a * d + b] = value(rjets[a * d + b]);
    }

  // Phi = i_S R, Phi(d_b) = S^a R(d_a, d_b)
  JetEndo phi(d, d);
  for (std::size_t b = 0; b < d; ++b) {
    JetVector col(d, Jet3(d));
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t r = 0; r < d; ++r) col[r] += sj.S[a] * rjets[a * d + b][r];
    phi.set_column(b, col);
  }
  out.phi_full = phi.value();
  out.phi = out.phi_full.bottomLeftCorner(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  out.R_from_phi.dim = d;
  out.R_from_phi.values.resize(d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) out.R_from_phi.values[a * d + b] = value(fn_bracket(sj.J, phi, a, b)) / 3.0;

  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const auto& rab = out.R.at(a, b);
      out.skew_residual = std::max(out.skew_residual, (rab + out.R.at(b, a)).cwiseAbs().maxCoeff());
      if (a >= n || b >= n) out.semi_basic_residual = std::max(out.semi_basic_residual, rab.cwiseAbs().maxCoeff());
      out.reconstruction_residual =
          std::max(out.reconstruction_residual, (rab - out.R_from_phi.at(a, b)).cwiseAbs().maxCoeff());
    }
  out.phi_S_residual = (out.phi_full * value(sj.S)).cwiseAbs().maxCoeff();

  const Classification cls = classify(out, p);
  out.lambda = cls.lambda;
  out.flat_defect = cls.flat_defect;
  out.isotropy_defect = cls.isotropy_defect;
  return out;
}

Classification classify(const CurvatureData& curv, const TangentPoint& p, double rel_tol) {
  Classification c;
  const std::size_t n = curv.n;
  const Eigen::MatrixXd& phi = curv.phi;
  c.threshold = rel_tol * (1.0 + max_abs(phi));
  if (n == 1) {
    c.kind = SprayClass::Flat;
    return c;
  }
  const auto N = static_cast<Eigen::Index>(n);
  c.lambda = phi.trace() / static_cast<double>(n - 1);
  const Eigen::MatrixXd m = c.lambda * Eigen::MatrixXd::Identity(N, N) - phi;
  c.flat_defect = max_abs(m);
  // least-squares alpha for M ~ y (x) alpha, column by column
  Eigen::VectorXd y(N);
  for (Eigen::Index i = 0; i < N; ++i) y(i) = p.y[static_cast<std::size_t>(i)];
  const Eigen::RowVectorXd alpha = (y.transpose() * m) / y.squaredNorm();
  c.isotropy_defect = max_abs(m - y * alpha);
  if (c.flat_defect <= c.threshold)
    c.kind = SprayClass::Flat;
  else if (c.isotropy_defect <= c.threshold)
    c.kind = SprayClass::Isotropic;
  else
    c.kind = SprayClass::Generic;
  return c;
}

Classification classify_at(const SprayModel& m, const TangentPoint& p, double rel_tol) {
  return classify(curvature_at(m, p), p, rel_tol);
}

SprayModel projective_deform_unchecked(const SprayModel& m, const ScalarModel& P) {
  if (P.n != m.n) throw std::invalid_argument("projective factor dimension does not match the spray");
  SprayModel out;
  out.n = m.n;
  for (std::size_t i = 0; i < m.n; ++i)
    out.f.push_back(m.f[i] - Expr::number(2.0) * P.expr * Expr::y(i + 1));
  return out;
}

SprayModel projective_deform(const SprayModel& m, const ScalarModel& P, std::span<const TangentPoint> samples) {
  ScalarModel p1 = P;
  p1.degree = 1;
  const auto rep = homogeneity_check(p1, samples);
  if (!rep.pass)
    throw std::invalid_argument("projective factor '" + P.expr.to_string() +
                                "' is not 1-homogeneous (Euler residual " + std::to_string(rep.max_residual) + ")");
  return projective_deform_unchecked(m, P);
}

double deformed_projector_check(const SprayModel& m, const ScalarModel& P, const TangentPoint& p) {
  const SprayModel deformed = projective_deform_unchecked(m, P);
  const Eigen::MatrixXd h_direct = connection_at(deformed, p).h;

  const Eigen::MatrixXd h = connection_at(m, p).h;
  const Eigen::MatrixXd j = vertical_endomorphism(m.n);
  const Jet3 pj = eval_jet(P.expr, p);
  const auto d = static_cast<Eigen::Index>(2 * m.n);
  Eigen::RowVectorXd dp(d);
  for (Eigen::Index a = 0; a < d; ++a) dp(a) = pj.d(static_cast<std::size_t>(a));
  // (d_J P (x) C)(X) = dP(JX) C
  const Eigen::MatrixXd h_formula = h - pj.value() * j - liouville(p) * (dp * j);
  return max_abs(h_direct - h_formula);
}

AdaptedFrame adapted_frame(const ConnectionData& conn, const TangentPoint& p, const Eigen::VectorXd& spray) {
  const std::size_t n = p.dim();
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::fabs(p.y[i]) > std::fabs(p.y[pivot])) pivot = i;
  if (p.y[pivot] == 0.0) throw std::invalid_argument("adapted frame needs y != 0");
  const auto N = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd j = vertical_endomorphism(n);
  AdaptedFrame f;
  f.pivot = pivot;
  f.basis = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == pivot) continue;
    f.basis.col(col++) = conn.h.col(static_cast<Eigen::Index>(i));
  }
  f.basis.col(N - 1) = conn.h * spray;
  for (Eigen::Index i = 0; i < N; ++i) f.basis.col(N + i) = j * f.basis.col(i);
  return f;
}

AdaptedFrame adapted_frame_at(const SprayModel& m, const TangentPoint& p) {
  return adapted_frame(connection_at(m, p), p, spray_vector(m, p));
}

GeodesicPath geodesic_flow(const SprayModel& m, std::span<const double> x0, std::span<const double> y0, double t_end,
                           double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("geodesic step dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("geodesic end time must be non-negative");
  if (x0.size() != m.n || y0.size() != m.n) throw std::invalid_argument("initial data dimension mismatch");
  const std::size_t n = m.n;
  using State = std::vector<double>;
  auto rhs = [&](const State& z) {
    TangentPoint p{State(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n)),
                   State(z.begin() + static_cast<std::ptrdiff_t>(n), z.end())};
    State dz(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      dz[i] = p.y[i];
      dz[n + i] = eval(m.f[i], p);
    }
    return dz;
  };
  auto axpy = [](const State& z, double s, const State& k) {
    State out(z);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * k[i];
    return out;
  };

  GeodesicPath path;
  State z(x0.begin(), x0.end());
  z.insert(z.end(), y0.begin(), y0.end());
  auto record = [&](double t) {
    path.t.push_back(t);
    path.x.emplace_back(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
    path.y.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(n), z.end());
  };
  record(0.0);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  double t = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double h = std::min(dt, t_end - t);
    try {
      const State k1 = rhs(z);
      const State k2 = rhs(axpy(z, h / 2, k1));
      const State k3 = rhs(axpy(z, h / 2, k2));
      const State k4 = rhs(axpy(z, h, k3));
      State next(z);
      for (std::size_t i = 0; i < z.size(); ++i) next[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      for (double v : next)
        if (!std::isfinite(v)) throw DomainError("non-finite state");
      z = std::move(next);
    } catch (const DomainError& e) {
      path.complete = false;
      path.exit_time = t;
      path.exit_reason = e.what();
      return path;
    }
    t = (s + 1 == steps) ? t_end : t + h;
    record(t);
  }
  path.exit_time = t;
  return path;
}

namespace {

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double arc_length(const GeodesicPath& path) {
  double len = 0.0;
  for (std::size_t k = 1; k < path.x.size(); ++k) len += (as_vector(path.x[k]) - as_vector(path.x[k - 1])).norm();
  return len;
}

std::vector<Eigen::VectorXd> resample_by_arc_length(const GeodesicPath& path, double length, std::size_t count) {
  if (path.x.size() < 2 || count < 2) throw std::invalid_argument("resampling needs at least two points");
  std::vector<double> cum(path.x.size(), 0.0);
  for (std::size_t k = 1; k < path.x.size(); ++k)
    cum[k] = cum[k - 1] + (as_vector(path.x[k]) - as_vector(path.x[k - 1])).norm();
  if (length > cum.back() * (1.0 + 1e-12))
    throw std::invalid_argument("requested arc length " + std::to_string(length) + " exceeds path length " +
                                std::to_string(cum.back()));
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  std::size_t seg = 1;
  for (std::size_t i = 0; i < count; ++i) {
    const double s = length * static_cast<double>(i) / static_cast<double>(count - 1);
    while (seg + 1 < cum.size() && cum[seg] < s) ++seg;
    const double span = cum[seg] - cum[seg - 1];
    const double w = span > 0.0 ? std::clamp((s - cum[seg - 1]) / span, 0.0, 1.0) : 0.0;
    out.push_back((1.0 - w) * as_vector(path.x[seg - 1]) + w * as_vector(path.x[seg]));
  }
  return out;
}

double hausdorff_distance(std::span<const Eigen::VectorXd> a, std::span<const Eigen::VectorXd> b) {
  auto directed = [](std::span<const Eigen::VectorXd> from, std::span<const Eigen::VectorXd> to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, (p - q).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace spraykit
