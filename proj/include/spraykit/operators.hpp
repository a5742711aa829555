#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spraykit/expr.hpp"
#include "spraykit/geometry.hpp"
#include "spraykit/tangent_point.hpp"

namespace spraykit {

/// Omega = dd_J F in the coordinate frame (x^1..x^n, y^1..y^n), built as
/// d(theta) with theta = d_J F = F_{y^i} dx^i.
Eigen::MatrixXd ddJ(const ScalarModel& F, const TangentPoint& p);

struct RapcsakValue {
  /// i_S dd_J F on d/dx^i from the coordinate expansion
  /// y^j F_{x^j y^i} + f^j F_{y^j y^i} - F_{x^i}.
  Eigen::VectorXd omega;
  /// Omega(S, .) by matrix contraction, all 2n components.
  Eigen::VectorXd contraction;
  /// max |contraction_x - (omega - d_x(CF - F))|
  double cross_check = 0.0;
  /// max |contraction_y|; zero for 1-homogeneous F.
  double vertical = 0.0;
};

RapcsakValue P_S(const SprayModel& m, const ScalarModel& F, const TangentPoint& p);

struct HomogeneityValue {
  double value = 0.0;        // CF - F
  Eigen::VectorXd gradient;  // d_x(CF - F), d_y(CF - F)
};

HomogeneityValue P_C(const ScalarModel& F, const TangentPoint& p);

struct GammaFormValue {
  /// i_Gamma Omega on (h_i, h_j), i < j, in the adapted frame.
  std::vector<double> components;
  /// Largest frame component outside the horizontal-horizontal block.
  double off_block = 0.0;
  /// max_i |Omega(S, h_i) - 1/2 i_Gamma Omega(S, h_i)|
  double containment = 0.0;
  /// Full i_Gamma Omega in the adapted frame.
  Eigen::MatrixXd frame_matrix;
};

GammaFormValue P_Gamma(const SprayModel& m, const ScalarModel& F, const TangentPoint& p);

struct CurvatureObstruction {
  /// i_R Omega on (h_i, h_j, h_k), i < j < k; empty for n <= 2.
  std::vector<double> components;
  /// The same components with R taken as 1/3 [J, Phi].
  std::vector<double> components_from_phi;
  double route_difference = 0.0;
};

CurvatureObstruction obstruction_R(const SprayModel& m, const ScalarModel& F, const TangentPoint& p);

struct EulerLagrangeValue {
  /// i_S dd_J E + d(CE) - dE, all 2n components.
  Eigen::VectorXd form;
  /// y^j E_{x^j y^i} + f^j E_{y^j y^i} - E_{x^i}
  Eigen::VectorXd coordinate;
  double vertical = 0.0;
  double two_path = 0.0;
};

EulerLagrangeValue euler_lagrange_form(const SprayModel& m, const ScalarModel& E, const TangentPoint& p);

enum class HessianStatus { PositiveDefinite, Degenerate, Indefinite };
const char* to_string(HessianStatus s);

struct HessianValue {
  Eigen::MatrixXd g;
  double min_eigenvalue = 0.0;
  HessianStatus status = HessianStatus::PositiveDefinite;
  bool positive_definite() const { return status == HessianStatus::PositiveDefinite; }
};

/// g_ij = d^2(F^2/2)/dy^i dy^j; eigenvalues within tol * (1 + max|g|) of zero count as degenerate.
HessianValue hessian_metric(const ScalarModel& F, const TangentPoint& p, double tol = 1e-8);

struct ProjectiveFactorValue {
  double factor = 0.0;
  /// max_i |f~^i - (f^i - 2 P y^i)| when the second spray is supplied.
  std::optional<double> consistency;
};

/// P = S F~ / (2 F~), S taken from m.
ProjectiveFactorValue projective_factor(const SprayModel& m, const SprayModel* m_tilde, const ScalarModel& F_tilde,
                                        const TangentPoint& p);

struct AuditTolerances {
  double residual = 1e-8;
  double hessian = 1e-8;
};

struct SampleAudit {
  std::size_t index = 0;
  bool ok = true;
  std::string error;
  double scale = 1.0;
  double p_c = 0.0;           // |CF - F| and its first derivatives
  double p_s = 0.0;           // i_S dd_J F on horizontal coordinate fields
  double p_s_vertical = 0.0;  // on vertical fields
  double p_gamma = 0.0;
  double i_r = 0.0;
  double containment = 0.0;
  double min_eigenvalue = 0.0;
  HessianStatus hessian = HessianStatus::PositiveDefinite;
};

struct SolutionAudit {
  std::vector<SampleAudit> samples;
  std::size_t failed_samples = 0;

  double max_p_c = 0.0;
  double max_p_s = 0.0;
  double max_p_gamma = 0.0;
  double max_i_r = 0.0;
  double max_containment = 0.0;
  double min_eigenvalue = 0.0;

  bool pass_p_c = false;
  bool pass_p_s = false;
  bool pass_p_gamma = false;
  bool pass_i_r = false;
  bool pass_hessian = false;

  bool order2_solution = false;  // P_C with its prolongation and P_S
  bool liftable_p1 = false;      // adds i_Gamma dd_J F = 0
  bool liftable_p2 = false;      // adds i_R dd_J F = 0
  /// order-2 solution with positive definite metric at every sample.
  bool passes() const { return order2_solution && pass_hessian; }
};

/// Residuals are compared against tol * (1 + |F| + max|partials of F|) per sample.
SolutionAudit solution_audit(const SprayModel& m, const ScalarModel& F, std::span<const TangentPoint> samples,
                             const AuditTolerances& tol = {});

}  // namespace spraykit
