#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spraykit {

/// Largest number of variables a jet may carry (2n with n <= 8).
inline constexpr std::size_t kMaxJetVars = 16;

/// Highest derivative order carried by a jet.
inline constexpr int kJetOrder = 3;

class JetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A multi-index stored as the sorted list of variable indices it
/// differentiates by, e.g. d^3/dz0^2 dz2 is {0, 0, 2}.
using MultiIndex = std::vector<std::size_t>;

/// Converts an exponent vector (alpha_0, ..., alpha_{nvars-1}) into the
/// sorted variable list used by Jet3.
MultiIndex multi_index_from_exponents(std::span<const int> exponents);

/// Truncated Taylor expansion of a scalar function of `nvars` variables.
///
/// Coefficients are raw partial derivatives at the base point, one entry per
/// sorted multi-index of total degree <= 3 (binom(nvars + 3, 3) entries).
/// A jet obtained by differentiating another jet is only valid up to a
/// lower order; `order()` reports how many derivative levels are
/// trustworthy, and entries above it are kept at zero.
class Jet3 {
public:
  Jet3() = default;
  explicit Jet3(std::size_t nvars, int order = kJetOrder);

  static Jet3 constant(double value, std::size_t nvars);
  static Jet3 variable(std::size_t index, double value, std::size_t nvars);

  std::size_t nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return coeffs_.size(); }

  double value() const { return coeffs_[0]; }
  double d(std::size_t i) const;
  double d(std::size_t i, std::size_t j) const;
  double d(std::size_t i, std::size_t j, std::size_t k) const;

  /// Partial derivative for a sorted or unsorted variable list, |alpha| <= 3.
  double partial(std::span<const std::size_t> vars) const;
  double partial(std::initializer_list<std::size_t> vars) const {
    return partial(std::span<const std::size_t>(vars.begin(), vars.size()));
  }

  /// Dense coefficient access in layout order (index 0 is the value).
  double coeff(std::size_t rank) const { return coeffs_[rank]; }
  double& coeff(std::size_t rank) { return coeffs_[rank]; }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Jet of the partial derivative along variable `var`; one order lower.
  Jet3 derivative(std::size_t var) const;

  /// Lowers the valid order, zeroing higher entries.
  Jet3 truncated(int order) const;

  Jet3 operator-() const;
  Jet3& operator+=(const Jet3& other);
  Jet3& operator-=(const Jet3& other);
  Jet3& operator*=(double s);

  friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
  friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
  friend Jet3 operator*(Jet3 a, double s) { return a *= s; }
  friend Jet3 operator*(double s, Jet3 a) { return a *= s; }
  friend Jet3 operator*(const Jet3& a, const Jet3& b);
  friend Jet3 operator/(const Jet3& a, const Jet3& b);

private:
  std::size_t nvars_ = 0;
  int order_ = kJetOrder;
  std::vector<double> coeffs_;
};

enum class JetFunction { Sqrt, Sin, Cos, Exp, Log, PowConst };

/// Composition with a univariate function through Faa di Bruno's formula.
/// `param` is the exponent for PowConst and ignored otherwise.
Jet3 jet_apply(JetFunction fn, const Jet3& a, double param = 0.0);

Jet3 sqrt(const Jet3& a);
Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);
Jet3 exp(const Jet3& a);
Jet3 log(const Jet3& a);
Jet3 pow(const Jet3& a, double exponent);
/// Integer power by repeated multiplication; valid for non-positive bases.
Jet3 ipow(const Jet3& a, int exponent);

/// Reads the mixed partial named by an exponent vector; throws if |alpha| > 3.
double extract_partial(const Jet3& a, std::span<const int> exponents);

/// Number of stored entries for a jet over `nvars` variables.
std::size_t jet_size(std::size_t nvars);

/// Index of a sorted multi-index in the dense layout.
std::size_t jet_rank(std::size_t nvars, std::span<const std::size_t> sorted_vars);

/// Sorted variable list of the entry at `rank`.
const MultiIndex& jet_multi_index(std::size_t nvars, std::size_t rank);

}  // namespace spraykit
