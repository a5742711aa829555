#include "spraykit/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

namespace spraykit {
namespace {

// Dense layout of sorted multi-indices of degree <= 3 over a fixed variable
// count, with precomputed Leibniz splittings for every entry.
struct JetLayout {
  std::size_t nvars = 0;
  std::vector<MultiIndex> indices;
  std::vector<int> degree;
  std::vector<std::size_t> rank1;
  std::vector<std::size_t> rank2;
  std::vector<std::size_t> rank3;
  // For entry r, every split of its variable positions into (subset, rest)
  // as pairs of entry ranks; subsets are enumerated over positions, so
  // repeated variables produce the multinomial multiplicities.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> splits;
  // raise[r * nvars + v]: rank of the entry r with variable v appended
  // (only filled for degree < 3).
  std::vector<std::size_t> raise;

  explicit JetLayout(std::size_t nv) : nvars(nv) {
    rank1.assign(nv, 0);
    rank2.assign(nv * nv, 0);
    rank3.assign(nv * nv * nv, 0);
    indices.push_back({});
    degree.push_back(0);
    for (std::size_t i = 0; i < nv; ++i) {
      rank1[i] = indices.size();
      indices.push_back({i});
      degree.push_back(1);
    }
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = i; j < nv; ++j) {
        rank2[i * nv + j] = indices.size();
        indices.push_back({i, j});
        degree.push_back(2);
      }
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = i; j < nv; ++j)
        for (std::size_t k = j; k < nv; ++k) {
          rank3[(i * nv + j) * nv + k] = indices.size();
          indices.push_back({i, j, k});
          degree.push_back(3);
        }
    splits.resize(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
      const auto& idx = indices[r];
      const std::size_t d = idx.size();
      for (unsigned mask = 0; mask < (1u << d); ++mask) {
        MultiIndex sub;
        MultiIndex rest;
        for (std::size_t p = 0; p < d; ++p) {
          if (mask & (1u << p))
            sub.push_back(idx[p]);
          else
            rest.push_back(idx[p]);
        }
        splits[r].emplace_back(rank_of(sub), rank_of(rest));
      }
    }
    raise.assign(indices.size() * nv, 0);
    for (std::size_t r = 0; r < indices.size(); ++r) {
      if (degree[r] >= 3) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        MultiIndex up = indices[r];
        up.insert(std::upper_bound(up.begin(), up.end(), v), v);
        raise[r * nv + v] = rank_of(up);
      }
    }
  }

  std::size_t rank_of(std::span<const std::size_t> v) const {
    switch (v.size()) {
      case 0:
        return 0;
      case 1:
        return rank1[v[0]];
      case 2:
        return rank2[v[0] * nvars + v[1]];
      default:
        return rank3[(v[0] * nvars + v[1]) * nvars + v[2]];
    }
  }
};

const JetLayout& layout(std::size_t nvars) {
  static const auto table = [] {
    std::array<std::unique_ptr<JetLayout>, kMaxJetVars + 1> t;
    for (std::size_t n = 0; n <= kMaxJetVars; ++n) t[n] = std::make_unique<JetLayout>(n);
    return t;
  }();
  if (nvars > kMaxJetVars) throw JetError("jet variable count exceeds " + std::to_string(kMaxJetVars));
  return *table[nvars];
}

void check_same(const Jet3& a, const Jet3& b) {
  if (a.nvars() != b.nvars())
    throw JetError("jet variable count mismatch: " + std::to_string(a.nvars()) + " vs " +
                   std::to_string(b.nvars()));
}

// Zeroes entries above `order`.
void clamp_order(std::vector<double>& c, const JetLayout& lay, int order) {
  for (std::size_t r = 0; r < c.size(); ++r)
    if (lay.degree[r] > order) c[r] = 0.0;
}

}  // namespace

std::size_t jet_size(std::size_t nvars) { return layout(nvars).indices.size(); }

std::size_t jet_rank(std::size_t nvars, std::span<const std::size_t> sorted_vars) {
  const auto& lay = layout(nvars);
  if (sorted_vars.size() > 3) throw JetError("multi-index order exceeds 3");
  for (auto v : sorted_vars)
    if (v >= nvars) throw JetError("multi-index variable out of range");
  return lay.rank_of(sorted_vars);
}

const MultiIndex& jet_multi_index(std::size_t nvars, std::size_t rank) {
  return layout(nvars).indices.at(rank);
}

MultiIndex multi_index_from_exponents(std::span<const int> exponents) {
  MultiIndex out;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0) throw JetError("negative exponent in multi-index");
    for (int k = 0; k < exponents[i]; ++k) out.push_back(i);
  }
  return out;
}

Jet3::Jet3(std::size_t nvars, int order) : nvars_(nvars), order_(order), coeffs_(jet_size(nvars), 0.0) {
  if (order < 0 || order > kJetOrder) throw JetError("jet order out of range");
}

Jet3 Jet3::constant(double value, std::size_t nvars) {
  Jet3 j(nvars);
  j.coeffs_[0] = value;
  return j;
}

Jet3 Jet3::variable(std::size_t index, double value, std::size_t nvars) {
  if (index >= nvars)
    throw JetError("variable index " + std::to_string(index) + " out of range for " +
                   std::to_string(nvars) + " variables");
  Jet3 j(nvars);
  j.coeffs_[0] = value;
  j.coeffs_[layout(nvars).rank1[index]] = 1.0;
  return j;
}

double Jet3::d(std::size_t i) const { return coeffs_[layout(nvars_).rank1.at(i)]; }

double Jet3::d(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const std::array<std::size_t, 2> v{i, j};
  return coeffs_[jet_rank(nvars_, v)];
}

double Jet3::d(std::size_t i, std::size_t j, std::size_t k) const {
  std::array<std::size_t, 3> v{i, j, k};
  std::sort(v.begin(), v.end());
  return coeffs_[jet_rank(nvars_, v)];
}

double Jet3::partial(std::span<const std::size_t> vars) const {
  if (vars.size() > 3) throw JetError("partial derivative order exceeds 3");
  MultiIndex v(vars.begin(), vars.end());
  std::sort(v.begin(), v.end());
  return coeffs_[jet_rank(nvars_, v)];
}

Jet3 Jet3::derivative(std::size_t var) const {
  if (var >= nvars_) throw JetError("derivative variable out of range");
  const auto& lay = layout(nvars_);
  Jet3 out(nvars_, std::max(order_ - 1, 0));
  if (order_ == 0) return out;
  for (std::size_t r = 0; r < coeffs_.size(); ++r) {
    if (lay.degree[r] >= order_) continue;
    out.coeffs_[r] = coeffs_[lay.raise[r * nvars_ + var]];
  }
  return out;
}

Jet3 Jet3::truncated(int order) const {
  Jet3 out = *this;
  out.order_ = std::min(order_, order);
  clamp_order(out.coeffs_, layout(nvars_), out.order_);
  return out;
}

Jet3 Jet3::operator-() const {
  Jet3 out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet3& Jet3::operator+=(const Jet3& other) {
  check_same(*this, other);
  for (std::size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] += other.coeffs_[r];
  if (other.order_ != order_) {
    order_ = std::min(order_, other.order_);
    clamp_order(coeffs_, layout(nvars_), order_);
  }
  return *this;
}

Jet3& Jet3::operator-=(const Jet3& other) {
  check_same(*this, other);
  for (std::size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] -= other.coeffs_[r];
  if (other.order_ != order_) {
    order_ = std::min(order_, other.order_);
    clamp_order(coeffs_, layout(nvars_), order_);
  }
  return *this;
}

Jet3& Jet3::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
  check_same(a, b);
  const auto& lay = layout(a.nvars_);
  Jet3 out(a.nvars_, std::min(a.order_, b.order_));
  for (std::size_t r = 0; r < out.coeffs_.size(); ++r) {
    if (lay.degree[r] > out.order_) continue;
    double s = 0.0;
    for (const auto& [sub, rest] : lay.splits[r]) s += a.coeffs_[sub] * b.coeffs_[rest];
    out.coeffs_[r] = s;
  }
  return out;
}

Jet3 operator/(const Jet3& a, const Jet3& b) {
  check_same(a, b);
  const double b0 = b.coeffs_[0];
  if (b0 == 0.0) throw JetError("division by a jet with zero value part");
  const auto& lay = layout(a.nvars_);
  Jet3 q(a.nvars_, std::min(a.order_, b.order_));
  // b * q = a, solved entry by entry in increasing degree; the split whose
  // subset is the whole index carries q_alpha * b_0.
  for (std::size_t r = 0; r < q.coeffs_.size(); ++r) {
    if (lay.degree[r] > q.order_) continue;
    double s = a.coeffs_[r];
    for (const auto& [sub, rest] : lay.splits[r])
      if (sub != r) s -= q.coeffs_[sub] * b.coeffs_[rest];
    q.coeffs_[r] = s / b0;
  }
  return q;
}

namespace {

Jet3 compose(const Jet3& a, double g0, double g1, double g2, double g3) {
  const std::size_t nv = a.nvars();
  const auto& lay = layout(nv);
  Jet3 out(nv, a.order());
  out.coeff(0) = g0;
  for (std::size_t r = 1; r < out.size(); ++r) {
    if (lay.degree[r] > a.order()) continue;
    const auto& idx = lay.indices[r];
    auto c = [&](std::initializer_list<std::size_t> v) {
      return a.coeff(lay.rank_of(std::span<const std::size_t>(v.begin(), v.size())));
    };
    double val = 0.0;
    if (idx.size() == 1) {
      val = g1 * c({idx[0]});
    } else if (idx.size() == 2) {
      const auto i = idx[0], j = idx[1];
      val = g2 * c({i}) * c({j}) + g1 * c({i, j});
    } else {
      const auto i = idx[0], j = idx[1], k = idx[2];
      val = g3 * c({i}) * c({j}) * c({k}) +
            g2 * (c({i, j}) * c({k}) + c({i, k}) * c({j}) + c({j, k}) * c({i})) + g1 * c({i, j, k});
    }
    out.coeff(r) = val;
  }
  return out;
}

}  // namespace

Jet3 jet_apply(JetFunction fn, const Jet3& a, double param) {
  const double v = a.value();
  switch (fn) {
    case JetFunction::Sqrt: {
      if (!(v > 0.0)) throw JetError("sqrt of non-positive value " + std::to_string(v));
      const double s = std::sqrt(v);
      return compose(a, s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v));
    }
    case JetFunction::Sin: {
      const double s = std::sin(v), c = std::cos(v);
      return compose(a, s, c, -s, -c);
    }
    case JetFunction::Cos: {
      const double s = std::sin(v), c = std::cos(v);
      return compose(a, c, -s, -c, s);
    }
    case JetFunction::Exp: {
      const double e = std::exp(v);
      return compose(a, e, e, e, e);
    }
    case JetFunction::Log: {
      if (!(v > 0.0)) throw JetError("log of non-positive value " + std::to_string(v));
      return compose(a, std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
    }
    case JetFunction::PowConst: {
      const double p = param;
      if (!(v > 0.0)) throw JetError("non-integer power of non-positive value " + std::to_string(v));
      const double g0 = std::pow(v, p);
      return compose(a, g0, p * g0 / v, p * (p - 1) * g0 / (v * v), p * (p - 1) * (p - 2) * g0 / (v * v * v));
    }
  }
  throw JetError("unknown jet function");
}

Jet3 sqrt(const Jet3& a) { return jet_apply(JetFunction::Sqrt, a); }
Jet3 sin(const Jet3& a) { return jet_apply(JetFunction::Sin, a); }
Jet3 cos(const Jet3& a) { return jet_apply(JetFunction::Cos, a); }
Jet3 exp(const Jet3& a) { return jet_apply(JetFunction::Exp, a); }
Jet3 log(const Jet3& a) { return jet_apply(JetFunction::Log, a); }
Jet3 pow(const Jet3& a, double exponent) { return jet_apply(JetFunction::PowConst, a, exponent); }

Jet3 ipow(const Jet3& a, int exponent) {
  if (exponent < 0) return Jet3::constant(1.0, a.nvars()) / ipow(a, -exponent);
  Jet3 result = Jet3::constant(1.0, a.nvars());
  Jet3 base = a;
  // square-and-multiply
  for (int e = exponent; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  if (exponent == 0) result = result.truncated(a.order());
  return result;
}

double extract_partial(const Jet3& a, std::span<const int> exponents) {
  if (exponents.size() != a.nvars()) throw JetError("multi-index length does not match jet variable count");
  int total = 0;
  for (int e : exponents) total += e;
  if (total > kJetOrder) throw JetError("multi-index order " + std::to_string(total) + " exceeds 3");
  const auto idx = multi_index_from_exponents(exponents);
  return a.partial(idx);
}

}  // namespace spraykit
