#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spraykit/expr.hpp"
#include "spraykit/jet_fields.hpp"
#include "spraykit/tangent_point.hpp"

namespace spraykit {

/// A structural identity of the spray calculus failed; this points at a
/// differentiation bug rather than bad input.
class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Vector-valued 2-form on T_(x,y)TM, stored on coordinate pairs.
struct VectorForm2 {
  std::size_t dim = 0;
  std::vector<Eigen::VectorXd> values;  // values[a * dim + b] = K(d_a, d_b)

  const Eigen::VectorXd& at(std::size_t a, std::size_t b) const { return values[a * dim + b]; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
};

struct ConnectionData {
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd h;
  Eigen::MatrixXd v;
  /// max entry of {Gamma^2 - Id, h^2 - h, v^2 - v, hv, Jh - J, hJ}
  double identity_residual = 0.0;
};

struct CurvatureData {
  std::size_t n = 0;
  /// R = 1/2 [h, h] on all coordinate pairs of T(TM).
  VectorForm2 R;
  /// 1/3 [J, Phi] on the same pairs, the reconstruction route.
  VectorForm2 R_from_phi;
  /// Jacobi endomorphism on T(TM).
  Eigen::MatrixXd phi_full;
  /// Phi^i_j with Phi(d/dx^j) = Phi^i_j d/dy^i.
  Eigen::MatrixXd phi;
  double lambda = 0.0;
  double flat_defect = 0.0;
  double isotropy_defect = 0.0;

  double skew_residual = 0.0;
  double semi_basic_residual = 0.0;
  double phi_S_residual = 0.0;
  double reconstruction_residual = 0.0;

  /// R^i_{jk}, all indices 0-based base/fiber indices.
  double r(std::size_t i, std::size_t j, std::size_t k) const { return R.at(j, k)(static_cast<Eigen::Index>(n + i)); }
};

enum class SprayClass { Flat, Isotropic, Generic };
const char* to_string(SprayClass c);

struct Classification {
  SprayClass kind = SprayClass::Generic;
  double lambda = 0.0;
  double flat_defect = 0.0;
  double isotropy_defect = 0.0;
  double threshold = 0.0;
};

struct AdaptedFrame {
  /// Columns h_1..h_n, v_1..v_n in the coordinate frame.
  Eigen::MatrixXd basis;
  std::size_t pivot = 0;

  Eigen::VectorXd h(std::size_t i) const { return basis.col(static_cast<Eigen::Index>(i)); }
  Eigen::VectorXd v(std::size_t i) const { return basis.col(static_cast<Eigen::Index>(basis.cols() / 2 + i)); }
};

struct GeodesicPath {
  std::vector<double> t;
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> y;
  bool complete = true;
  double exit_time = 0.0;
  std::string exit_reason;
};

/// Residuals of the pointwise structural identities.
struct StructuralResiduals {
  double j_squared = 0.0;         // J^2
  double gamma_squared = 0.0;     // Gamma^2 - Id
  double h_idempotent = 0.0;      // h^2 - h
  double v_idempotent = 0.0;      // v^2 - v
  double hv = 0.0;                // h v
  double jh = 0.0;                // J h - J
  double hj = 0.0;                // h J
  double js_minus_c = 0.0;        // J S - C
  double cs_bracket = 0.0;        // [C, S] - S
  double jc_bracket = 0.0;        // [J, C] - J
  double max() const;
};

/// Jet-level spray data at a point, shared by the geometry and operator
/// evaluations.
struct SprayJets {
  std::size_t n = 0;
  JetVector S;
  JetVector C;
  JetEndo J;
  JetEndo gamma;
  JetEndo h;
};

SprayJets spray_jets(const SprayModel& m, const TangentPoint& p);

Eigen::MatrixXd vertical_endomorphism(std::size_t n);
Eigen::VectorXd liouville(const TangentPoint& p);
Eigen::VectorXd spray_vector(const SprayModel& m, const TangentPoint& p);

ConnectionData connection_at(const SprayModel& m, const TangentPoint& p);
CurvatureData curvature_at(const SprayModel& m, const TangentPoint& p);
StructuralResiduals structural_identities(const SprayModel& m, const TangentPoint& p);

/// Flat / isotropic / generic test with thresholds rel_tol * (1 + max|Phi|).
Classification classify_at(const SprayModel& m, const TangentPoint& p, double rel_tol = 1e-8);
/// Classification from already computed curvature data.
Classification classify(const CurvatureData& curv, const TangentPoint& p, double rel_tol = 1e-8);

/// f~^i = f^i - 2 P y^i; P must pass the degree-1 homogeneity check on the
/// given samples.
SprayModel projective_deform(const SprayModel& m, const ScalarModel& P, std::span<const TangentPoint> samples);
/// Same substitution without the homogeneity precondition.
SprayModel projective_deform_unchecked(const SprayModel& m, const ScalarModel& P);

/// Max entry difference between h~ from [J, S~] and h - P J - d_J P (x) C.
double deformed_projector_check(const SprayModel& m, const ScalarModel& P, const TangentPoint& p);

AdaptedFrame adapted_frame_at(const SprayModel& m, const TangentPoint& p);
AdaptedFrame adapted_frame(const ConnectionData& conn, const TangentPoint& p, const Eigen::VectorXd& spray);

/// Classical RK4 on x' = y, y' = f(x, y).
GeodesicPath geodesic_flow(const SprayModel& m, std::span<const double> x0, std::span<const double> y0, double t_end,
                           double dt);

/// Arc length of the base curve.
double arc_length(const GeodesicPath& path);
/// Base points at `count` equally spaced arc-length positions in [0, length].
std::vector<Eigen::VectorXd> resample_by_arc_length(const GeodesicPath& path, double length, std::size_t count);
double hausdorff_distance(std::span<const Eigen::VectorXd> a, std::span<const Eigen::VectorXd> b);

}  // namespace spraykit
