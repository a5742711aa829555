#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spraykit/geometry.hpp"
#include "spraykit/operators.hpp"
#include "spraykit/sampling.hpp"
#include "support.hpp"

using namespace spraykit;
using namespace spraykit::fixtures;

namespace {

TangentPoint point(std::vector<double> x, std::vector<double> y) { return TangentPoint{std::move(x), std::move(y)}; }

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::fabs(a));
  return m;
}

SampleBox sphere_box() {
  SampleBox b;
  b.x_box = {{0.5, 2.5}, {-1.0, 1.0}};
  return b;
}

SprayModel generic_spray3() {
  return make_spray(3, {"x2*y1^2 + sin(x3)*y2*y3", "y1*y3*exp(x1) - x3*y2^2", "cos(x1 + x2)*y3^2 + y1*y2"});
}

ScalarModel generic_norm3() {
  return ScalarModel::parse(3, "sqrt(y1^2 + 2*y2^2 + y3^2 + x1*y1*y2/4) + x2*y3/5", 1);
}

// Partial of F by finite differences, variables ordered x then y.
double fd(const ScalarModel& F, const TangentPoint& p, std::size_t a, std::size_t b) {
  std::vector<int> alpha(2 * p.dim(), 0);
  ++alpha[a];
  ++alpha[b];
  return fd_partial(F.expr, p, alpha);
}

}  // namespace

TEST(DdJ, LinearFunctionIsClosed) {
  const auto pts = sample_points(2, 20, 3);
  for (const auto& p : pts) EXPECT_EQ(max_abs(ddJ(ScalarModel::parse(2, "y1", 1), p)), 0.0);
}

TEST(DdJ, EuclideanHessianBlock) {
  const Eigen::MatrixXd om = ddJ(euclidean_norm(2), point({0.3, -0.2}, {3, 4}));
  Eigen::Matrix2d expected;
  expected << 16, -12, -12, 9;
  expected /= 125.0;
  EXPECT_LT(max_abs(om.bottomLeftCorner(2, 2) - expected), 1e-15);
  EXPECT_LT(max_abs(om.topRightCorner(2, 2) + expected), 1e-15);
  EXPECT_EQ(max_abs(om.bottomRightCorner(2, 2)), 0.0);
  EXPECT_EQ(max_abs(om.topLeftCorner(2, 2)), 0.0);
}

TEST(DdJ, SkewAndMatchesFiniteDifferences) {
  const ScalarModel F = generic_norm3();
  for (const auto& p : sample_points(3, 10, 8)) {
    const Eigen::MatrixXd om = ddJ(F, p);
    EXPECT_EQ(max_abs(om + om.transpose()), 0.0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(om(i, j), fd(F, p, i, 3 + j) - fd(F, p, j, 3 + i), 1e-6);
        EXPECT_NEAR(om(3 + i, j), fd(F, p, 3 + i, 3 + j), 1e-6);
        EXPECT_EQ(om(3 + i, 3 + j), 0.0);
      }
  }
}

TEST(PS, FlatSprayEuclideanNorm) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& p : sample_points(n, 50, 10 + n)) {
      const RapcsakValue v = P_S(flat_spray(n), euclidean_norm(n), p);
      EXPECT_LT(v.omega.cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT(v.vertical, 1e-10);
      EXPECT_LT(v.cross_check, 1e-12);
    }
}

TEST(PS, SphereSprayOwnMetric) {
  for (const auto& p : sample_points(2, 100, 4, sphere_box())) {
    const RapcsakValue v = P_S(sphere_spray(), sphere_norm(), p);
    EXPECT_LT(v.omega.cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(v.vertical, 1e-10);
  }
}

TEST(PS, WrongSprayIsRejected) {
  const SprayModel wrong = make_spray(2, {"y2^2", "0"});
  const ScalarModel F = ScalarModel::parse(2, "sqrt(y1^2 + 2*y2^2)", 1);
  std::size_t above = 0;
  const auto pts = sample_points(2, 50, 6);
  for (const auto& p : pts) {
    const RapcsakValue v = P_S(wrong, F, p);
    // vanishes only where y2 does
    if (v.omega.norm() > 1e-3) ++above;
    // only the f-term survives: omega_i = f^j F_{y^j y^i}
    const Jet3 j = eval_jet(F.expr, p);
    const double f1 = p.y[1] * p.y[1];
    EXPECT_NEAR(v.omega(0), f1 * j.d(2, 2), 1e-12);
    EXPECT_NEAR(v.omega(1), f1 * j.d(2, 3), 1e-12);
  }
  EXPECT_GT(above, pts.size() * 9 / 10);
}

TEST(PS, ContractionCrossCheckForGenericData) {
  const ScalarModel F = generic_norm3();
  const ScalarModel G = ScalarModel::parse(3, "y1^2*x2 + y2*y3 + x3", 2);
  for (const auto& p : sample_points(3, 40, 12)) {
    EXPECT_LT(P_S(generic_spray3(), F, p).cross_check, 1e-12);
    EXPECT_LT(P_S(generic_spray3(), G, p).cross_check, 1e-11);
    EXPECT_LT(P_S(generic_spray3(), F, p).vertical, 1e-12);
  }
}

TEST(PS, ProjectiveInvariance) {
  struct Case {
    SprayModel m;
    ScalarModel F;
    ScalarModel P;
    SampleBox box;
  };
  const std::vector<Case> cases{
      {flat_spray(2), euclidean_norm(2), ScalarModel::parse(2, "sqrt(y1^2 + y2^2) + x1*y1", 1), {}},
      {sphere_spray(), sphere_norm(), ScalarModel::parse(2, "y1*cos(x2) - 2*y2", 1), sphere_box()},
      {generic_spray3(), generic_norm3(), ScalarModel::parse(3, "y1 + y2*y3/sqrt(y1^2 + y2^2 + y3^2)", 1), {}},
  };
  for (const auto& c : cases) {
    const SprayModel deformed = projective_deform_unchecked(c.m, c.P);
    for (const auto& p : sample_points(c.m.n, 50, 21, c.box)) {
      const double before = P_S(c.m, c.F, p).omega.cwiseAbs().maxCoeff();
      const double after = P_S(deformed, c.F, p).omega.cwiseAbs().maxCoeff();
      EXPECT_LT(std::fabs(after - before), 1e-9);
    }
  }
}

TEST(PC, EuclideanNormIsExactlyHomogeneous) {
  for (const auto& p : sample_points(3, 30, 2)) {
    const HomogeneityValue h = P_C(euclidean_norm(3), p);
    EXPECT_LT(std::fabs(h.value), 1e-12);
    EXPECT_EQ(h.gradient.size(), 6);
    EXPECT_LT(h.gradient.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PC, WrongDegreeResidual) {
  const TangentPoint p = point({0.1, 0.2}, {1.5, -0.7});
  const HomogeneityValue h = P_C(ScalarModel::parse(2, "y1^2", 1), p);
  EXPECT_DOUBLE_EQ(h.value, 1.5 * 1.5);
  EXPECT_DOUBLE_EQ(h.gradient(2), 2 * 1.5);
  EXPECT_EQ(h.gradient(3), 0.0);
}

TEST(PC, LinearCandidateVanishesButPSDoesNot) {
  const ScalarModel F = ScalarModel::parse(2, "y1 + x1*y2", 1);
  for (const auto& p : sample_points(2, 20, 7)) {
    const HomogeneityValue h = P_C(F, p);
    EXPECT_LT(std::fabs(h.value), 1e-14);
    EXPECT_LT(h.gradient.cwiseAbs().maxCoeff(), 1e-14);
    // omega = y^j F_{x^j y^i} - F_{x^i} = (0, y1) - (y2, 0)
    const RapcsakValue v = P_S(flat_spray(2), F, p);
    EXPECT_NEAR(v.omega(0), -p.y[1], 1e-14);
    EXPECT_NEAR(v.omega(1), p.y[0], 1e-14);
  }
}

TEST(PGamma, FlatEuclideanAndClosedForms) {
  for (const auto& p : sample_points(3, 30, 9)) {
    const GammaFormValue g = P_Gamma(flat_spray(3), euclidean_norm(3), p);
    EXPECT_EQ(g.components.size(), 3u);
    EXPECT_LT(max_abs(g.components), 1e-12);
    const GammaFormValue z = P_Gamma(generic_spray3(), ScalarModel::parse(3, "y1", 1), p);
    EXPECT_EQ(max_abs(z.components), 0.0);
  }
}

TEST(PGamma, OnlyHorizontalBlockSurvives) {
  for (const auto& p : sample_points(3, 30, 14)) {
    const GammaFormValue g = P_Gamma(generic_spray3(), generic_norm3(), p);
    EXPECT_LT(g.off_block, 1e-10 * (1.0 + max_abs(g.frame_matrix)));
    EXPECT_LT(max_abs(g.frame_matrix + g.frame_matrix.transpose()), 1e-12);
  }
}

TEST(PGamma, ContainsRapcsakEquation) {
  for (const auto& fx : fixture_sprays()) {
    const ScalarModel F = fx.spray.n == 3 ? generic_norm3() : ScalarModel::parse(2, "sqrt(y1^2 + 2*y2^2) + y1/3", 1);
    for (const auto& p : sample_points(fx.spray.n, 100, 30, fx.box))
      EXPECT_LT(P_Gamma(fx.spray, F, p).containment, 1e-10) << fx.name;
  }
  for (const auto& p : sample_points(3, 100, 31))
    EXPECT_LT(P_Gamma(generic_spray3(), generic_norm3(), p).containment, 1e-10);
}

// Measured rather than asserted: the Riemannian sphere with its own spray.
TEST(PGamma, SphereObstructionIsSmall) {
  double worst = 0.0;
  for (const auto& p : sample_points(2, 50, 5, sphere_box()))
    worst = std::max(worst, max_abs(P_Gamma(sphere_spray(), sphere_norm(), p).components));
  RecordProperty("sphere_i_gamma_max", std::to_string(worst));
  EXPECT_LT(worst, 1e-8);
}

TEST(Obstruction, EmptyInDimensionTwo) {
  for (const auto& fx : fixture_sprays()) {
    if (fx.spray.n != 2) continue;
    const auto p = sample_points(2, 1, 3, fx.box).front();
    const CurvatureObstruction r = obstruction_R(fx.spray, ScalarModel::parse(2, "sqrt(y1^2 + y2^2)", 1), p);
    EXPECT_TRUE(r.components.empty());
    EXPECT_TRUE(r.components_from_phi.empty());
  }
}

TEST(Obstruction, FlatSprayHasNone) {
  for (const auto& p : sample_points(4, 20, 3)) {
    const CurvatureObstruction r = obstruction_R(flat_spray(4), ScalarModel::parse(4, "sqrt(y1^2 + y2^2 + 3*y3^2 + y4^2)", 1), p);
    EXPECT_EQ(r.components.size(), 4u);
    EXPECT_EQ(max_abs(r.components), 0.0);
  }
}

TEST(Obstruction, IsotropicDeformedFlatVanishes) {
  for (const auto& p : sample_points(3, 200, 40))
    EXPECT_LT(max_abs(obstruction_R(deformed_flat_spray(3), euclidean_norm(3), p).components), 1e-8);
}

TEST(Obstruction, RoutesAgreeOnGenericSpray) {
  double largest = 0.0;
  for (const auto& p : sample_points(3, 50, 41)) {
    const CurvatureObstruction r = obstruction_R(generic_spray3(), generic_norm3(), p);
    EXPECT_EQ(r.components.size(), 1u);
    EXPECT_LT(r.route_difference, 1e-8);
    largest = std::max(largest, max_abs(r.components));
  }
  // a generic spray is not isotropic, so the obstruction is genuinely exercised
  EXPECT_GT(largest, 1e-3);
}

TEST(EulerLagrange, EuclideanEnergyFlatSpray) {
  const ScalarModel E = ScalarModel::parse(2, "0.5*(y1^2+y2^2)", 2);
  for (const auto& p : sample_points(2, 30, 2)) {
    const EulerLagrangeValue v = euler_lagrange_form(flat_spray(2), E, p);
    EXPECT_LT(v.form.cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(EulerLagrange, SphereEnergy) {
  const ScalarModel E = ScalarModel::parse(2, "0.5*(y1^2 + sin(x1)^2*y2^2)", 2);
  for (const auto& p : sample_points(2, 100, 3, sphere_box())) {
    const EulerLagrangeValue v = euler_lagrange_form(sphere_spray(), E, p);
    EXPECT_LT(v.form.cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(v.vertical, 1e-10);
    EXPECT_LT(v.two_path, 1e-10);
  }
}

TEST(EulerLagrange, PlugInNegativeControl) {
  const ScalarModel E = ScalarModel::parse(2, "0.5*(y1^2+y2^2)", 2);
  const SprayModel m = make_spray(2, {"y1^2 + y2^2", "0"});
  for (const auto& p : sample_points(2, 30, 4)) {
    const EulerLagrangeValue v = euler_lagrange_form(m, E, p);
    const double r2 = p.y[0] * p.y[0] + p.y[1] * p.y[1];
    EXPECT_NEAR(v.coordinate(0), r2, 1e-12);
    EXPECT_NEAR(v.coordinate(1), 0.0, 1e-12);
    EXPECT_LT(v.two_path, 1e-10);
    EXPECT_LT(v.vertical, 1e-12);
  }
}

TEST(EulerLagrange, TwoPathsAgreeForGenericEnergy) {
  const ScalarModel E = ScalarModel::parse(3, "y1^2*exp(x2) + y2*y3*x1 + 2*y3^2 + sin(x3)*y1*y2", 2);
  for (const auto& p : sample_points(3, 50, 5)) {
    const EulerLagrangeValue v = euler_lagrange_form(generic_spray3(), E, p);
    EXPECT_LT(v.two_path, 1e-10);
    EXPECT_LT(v.vertical, 1e-10);
  }
}

TEST(Hessian, EuclideanIsIdentity) {
  for (const auto& p : sample_points(3, 20, 1)) {
    const HessianValue h = hessian_metric(euclidean_norm(3), p);
    EXPECT_LT(max_abs(h.g - Eigen::MatrixXd::Identity(3, 3)), 1e-14);
    EXPECT_NEAR(h.min_eigenvalue, 1.0, 1e-14);
    EXPECT_TRUE(h.positive_definite());
  }
}

TEST(Hessian, SphereAtEquator) {
  const HessianValue h = hessian_metric(sphere_norm(), point({std::numbers::pi / 2, 0.4}, {0.7, -1.2}));
  EXPECT_LT(max_abs(h.g - Eigen::MatrixXd::Identity(2, 2)), 1e-14);
  EXPECT_EQ(h.status, HessianStatus::PositiveDefinite);
}

TEST(Hessian, DegenerateAndIndefinite) {
  const HessianValue d = hessian_metric(ScalarModel::parse(2, "y1", 1), point({0, 0}, {1.0, 0.5}));
  EXPECT_EQ(d.status, HessianStatus::Degenerate);
  EXPECT_NEAR(d.min_eigenvalue, 0.0, 1e-14);
  EXPECT_FALSE(d.positive_definite());
  // F^2/2 = (y1^2 - y2^2)/2 where positive
  const HessianValue i = hessian_metric(ScalarModel::parse(2, "sqrt(y1^2 - y2^2)", 1), point({0, 0}, {2.0, 0.5}));
  EXPECT_EQ(i.status, HessianStatus::Indefinite);
  EXPECT_NEAR(i.min_eigenvalue, -1.0, 1e-12);
  EXPECT_STREQ(to_string(HessianStatus::Degenerate), "degenerate");
}

TEST(Hessian, RequiresPositiveF) {
  EXPECT_THROW(hessian_metric(ScalarModel::parse(2, "y1", 1), point({0, 0}, {-1.0, 0.5})), std::invalid_argument);
}

TEST(ProjectiveFactor, FlatSprayEuclideanNormIsZero) {
  for (const auto& p : sample_points(2, 20, 3))
    EXPECT_NEAR(projective_factor(flat_spray(2), nullptr, euclidean_norm(2), p).factor, 0.0, 1e-15);
}

TEST(ProjectiveFactor, RoundTripThroughDeformation) {
  for (std::size_t n = 2; n <= 3; ++n) {
    const SprayModel s = deformed_flat_spray(n);
    const SprayModel flat = flat_spray(n);
    const auto pts = sample_points(n, 100, 50 + n);
    for (const auto& p : pts) {
      const ProjectiveFactorValue v = projective_factor(s, &flat, euclidean_norm(n), p);
      double r = 0.0;
      for (double y : p.y) r += y * y;
      EXPECT_NEAR(v.factor, -std::sqrt(r), 1e-12);
      ASSERT_TRUE(v.consistency.has_value());
      EXPECT_LT(*v.consistency, 1e-9);
    }
  }
}

TEST(ProjectiveFactor, RecoveredFactorIsOneHomogeneous) {
  const SprayModel s = sphere_spray();
  const ScalarModel Ft = ScalarModel::parse(2, "sqrt(y1^2 + 2*y2^2) + x2*y1/4", 1);
  for (const auto& p : sample_points(2, 50, 60, sphere_box())) {
    // Euler residual y.grad_y P - P by central differences in the fibre scaling
    const double h = 1e-4;
    auto at = [&](double t) {
      TangentPoint q = p;
      for (double& y : q.y) y *= t;
      return projective_factor(s, nullptr, Ft, q).factor;
    };
    const double euler = (at(1 + h) - at(1 - h)) / (2 * h) - at(1.0);
    EXPECT_LT(std::fabs(euler), 1e-9 * (1.0 + std::fabs(at(1.0))) + 1e-8);
    EXPECT_NEAR(at(2.0), 2.0 * at(1.0), 1e-12 * (1.0 + std::fabs(at(1.0))));
  }
}

TEST(ProjectiveFactor, RequiresPositiveNorm) {
  EXPECT_THROW(projective_factor(flat_spray(2), nullptr, ScalarModel::parse(2, "y1", 1), point({0, 0}, {-1, 1})),
               std::invalid_argument);
}

TEST(Audit, KnownSolutionsPass) {
  const SolutionAudit flat = solution_audit(flat_spray(2), euclidean_norm(2), sample_points(2, 200, 1));
  EXPECT_TRUE(flat.passes());
  EXPECT_TRUE(flat.liftable_p1);
  EXPECT_TRUE(flat.liftable_p2);
  EXPECT_EQ(flat.failed_samples, 0u);
  EXPECT_EQ(flat.samples.size(), 200u);

  const SolutionAudit sphere = solution_audit(sphere_spray(), sphere_norm(), sample_points(2, 200, 1, sphere_box()));
  EXPECT_TRUE(sphere.passes());
  EXPECT_TRUE(sphere.pass_p_s);
  EXPECT_TRUE(sphere.pass_p_c);
  EXPECT_TRUE(sphere.pass_hessian);
  EXPECT_TRUE(sphere.liftable_p2);
  EXPECT_LT(sphere.max_i_r, 1e-300);

  const SolutionAudit iso = solution_audit(deformed_flat_spray(3), euclidean_norm(3), sample_points(3, 200, 2));
  EXPECT_TRUE(iso.passes());
  EXPECT_TRUE(iso.liftable_p2);
  EXPECT_LT(iso.max_i_r, 1e-8);
}

TEST(Audit, PerturbedCandidateFailsRapcsak) {
  const ScalarModel F =
      ScalarModel::parse(2, "sqrt(y1^2 + y2^2) + x1*y1/sqrt(y1^2 + y2^2)", 1);
  const SolutionAudit a = solution_audit(flat_spray(2), F, sample_points(2, 200, 1));
  EXPECT_FALSE(a.pass_p_s);
  EXPECT_FALSE(a.passes());
  EXPECT_GT(a.max_p_s, 1e-3);
  // the added term is 0-homogeneous, so P_C fails as well
  EXPECT_FALSE(a.pass_p_c);

  // a 1-homogeneous perturbation isolates P_S
  const ScalarModel G = ScalarModel::parse(2, "sqrt(y1^2 + y2^2) + x1*y2/2", 1);
  const SolutionAudit b = solution_audit(flat_spray(2), G, sample_points(2, 200, 1));
  EXPECT_TRUE(b.pass_p_c);
  EXPECT_TRUE(b.pass_hessian);
  EXPECT_FALSE(b.pass_p_s);
  EXPECT_FALSE(b.passes());
}

TEST(Audit, DegenerateCandidateFailsHessian) {
  SampleBox right;
  right.y_min = 0.5;
  auto pts = sample_points(2, 50, 3, right);
  for (auto& p : pts) p.y[0] = std::fabs(p.y[0]) + 0.1;
  const SolutionAudit a = solution_audit(flat_spray(2), ScalarModel::parse(2, "y1", 1), pts);
  EXPECT_TRUE(a.order2_solution);
  EXPECT_FALSE(a.pass_hessian);
  EXPECT_FALSE(a.passes());
  for (const auto& s : a.samples) EXPECT_EQ(s.hessian, HessianStatus::Degenerate);
}

TEST(Audit, DomainFailuresAreRecorded) {
  const std::vector<TangentPoint> pts{point({1.0, 0.0}, {1.0, 0.5}), point({0.0, 0.0}, {1.0, 0.5})};
  const SolutionAudit a = solution_audit(polar_flat_spray(), euclidean_norm(2), pts);
  EXPECT_EQ(a.failed_samples, 1u);
  EXPECT_TRUE(a.samples[0].ok);
  EXPECT_FALSE(a.samples[1].ok);
  EXPECT_FALSE(a.samples[1].error.empty());
  EXPECT_FALSE(a.passes());
}

TEST(Audit, GammaPassImpliesRapcsakPass) {
  const std::vector<std::pair<SprayModel, ScalarModel>> cases{
      {flat_spray(2), euclidean_norm(2)},
      {flat_spray(2), ScalarModel::parse(2, "sqrt(y1^2 + y2^2) + x1*y1/sqrt(y1^2 + y2^2)", 1)},
      {generic_spray3(), generic_norm3()},
      {deformed_flat_spray(3), euclidean_norm(3)},
  };
  for (const auto& [m, F] : cases) {
    const SolutionAudit a = solution_audit(m, F, sample_points(m.n, 50, 8));
    if (a.pass_p_gamma) EXPECT_TRUE(a.pass_p_s);
    for (const auto& s : a.samples) EXPECT_LT(s.containment, 1e-10);
  }
}

TEST(Audit, ReproducibleOrder) {
  const auto pts = sample_points(3, 30, 5);
  const SolutionAudit a = solution_audit(generic_spray3(), generic_norm3(), pts);
  const SolutionAudit b = solution_audit(generic_spray3(), generic_norm3(), pts);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    EXPECT_EQ(a.samples[k].index, k);
    EXPECT_EQ(a.samples[k].p_s, b.samples[k].p_s);
    EXPECT_EQ(a.samples[k].p_gamma, b.samples[k].p_gamma);
  }
}
