#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "spraykit/jet.hpp"

namespace spraykit {

/// Vector field on an open set of R^d, components carried as jets at the
/// base point in the coordinate frame.
using JetVector = std::vector<Jet3>;

/// (1,1)-tensor field; entry (r, c) is the r-th component of K(d/dz^c).
class JetEndo {
public:
  JetEndo() = default;
  JetEndo(std::size_t dim, std::size_t nvars);

  /// Constant field with the given matrix.
  static JetEndo constant(const Eigen::MatrixXd& m, std::size_t nvars);

  std::size_t dim() const { return dim_; }
  Jet3& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Jet3& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  JetVector column(std::size_t c) const;
  void set_column(std::size_t c, const JetVector& v);

  /// Values at the base point.
  Eigen::MatrixXd value() const;

private:
  std::size_t dim_ = 0;
  std::vector<Jet3> data_;
};

JetVector coordinate_field(std::size_t index, std::size_t dim, std::size_t nvars);
JetVector apply_endo(const JetEndo& k, const JetVector& x);
JetVector add(const JetVector& a, const JetVector& b);
JetVector sub(const JetVector& a, const JetVector& b);
JetVector scale(const JetVector& a, double s);
Eigen::VectorXd value(const JetVector& v);

/// Lie bracket [X, Y]^a = X^b d_b Y^a - Y^b d_b X^a; one jet order is lost.
JetVector lie_bracket(const JetVector& x, const JetVector& y);

/// [K, X](Y) = [KY, X] - K[Y, X] for a (1,1)-tensor K and a vector field X,
/// assembled column by column on the coordinate fields.
JetEndo fn_bracket(const JetEndo& k, const JetVector& x);

/// Frolicher-Nijenhuis bracket of two (1,1)-tensors evaluated on the
/// coordinate pair (d_a, d_b):
///   [K,L](X,Y) = [KX,LY] - [KY,LX] - L([KX,Y] - [KY,X]) - K([X,LY] - [Y,LX])
///                + (LK + KL)[X,Y].
JetVector fn_bracket(const JetEndo& k, const JetEndo& l, std::size_t a, std::size_t b);

}  // namespace spraykit
