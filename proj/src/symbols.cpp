#include "spraykit/symbols.hpp"

#include <algorithm>
#include <set>

namespace spraykit {
namespace {

using boost::multiprecision::cpp_int;
using Row = std::vector<std::int64_t>;

struct Frame {
  std::size_t n;
  std::size_t dim;

  FrameVector zero() const { return FrameVector(dim, 0); }
  FrameVector e(std::size_t i) const {
    FrameVector v = zero();
    v[i] = 1;
    return v;
  }
  FrameVector H(std::size_t i) const { return e(i); }
  FrameVector V(std::size_t i) const { return e(n + i); }
  FrameVector S() const { return H(n - 1); }
  FrameVector C() const { return V(n - 1); }
  FrameVector h(const FrameVector& u) const {
    FrameVector out = zero();
    for (std::size_t i = 0; i < n; ++i) out[i] = u[i];
    return out;
  }
  FrameVector J(const FrameVector& u) const {
    FrameVector out = zero();
    for (std::size_t i = 0; i < n; ++i) out[n + i] = u[i];
    return out;
  }
  std::string name(std::size_t i) const { return (i < n ? "h" : "v") + std::to_string(i % n + 1); }
};

void check_n(std::size_t n) {
  if (n == 0) throw SymbolError("symbol computations need n >= 1");
}

Row& axpy(Row& acc, std::int64_t s, const Row& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s * x[i];
  return acc;
}

Row combine(std::int64_t a, const Row& x, std::int64_t b, const Row& y) {
  Row out(x.size(), 0);
  axpy(out, a, x);
  axpy(out, b, y);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> horizontal_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

// Row/column index of the symmetric pair (p, q) among sorted pairs p <= q.
std::size_t pair_index(std::size_t p, std::size_t q, std::size_t dim) {
  if (p > q) std::swap(p, q);
  return p * dim - p * (p - 1) / 2 + (q - p);
}

std::vector<std::pair<std::size_t, std::size_t>> sorted_pairs(std::size_t dim) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < dim; ++p)
    for (std::size_t q = p; q < dim; ++q) out.emplace_back(p, q);
  return out;
}

std::vector<std::string> basis_labels(const SymTensorBasis& b, const Frame& f) {
  std::vector<std::string> out;
  out.reserve(b.size());
  for (const auto& t : b.elements) {
    std::string s = "A(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + f.name(t[i]);
    out.push_back(s + ")");
  }
  return out;
}

// Rows A(X, Y, C) over sorted pairs, the S^2 coordinates of the codomain.
void append_pc3_sym(SymbolMatrix& m, const SymTensorBasis& b3, const Frame& f) {
  for (const auto& [p, q] : sorted_pairs(f.dim))
    m.append_row(evaluation_row(b3, {f.e(p), f.e(q), f.C()}), "PC3(" + f.name(p) + "," + f.name(q) + ")");
}

// Bareiss elimination in place; returns the rank. `sign` tracks row swaps.
std::size_t bareiss(std::vector<std::vector<cpp_int>>& a, std::size_t cols, int* sign = nullptr) {
  std::size_t r = 0;
  cpp_int prev = 1;
  const std::size_t rows = a.size();
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      std::swap(a[piv], a[r]);
      if (sign) *sign = -*sign;
    }
    const cpp_int& pv = a[r][c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      const cpp_int f = a[i][c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = pv * a[i][j] - f * a[r][j];
        a[i][j] /= prev;
      }
      a[i][c] = 0;
    }
    prev = pv;
    ++r;
  }
  return r;
}

}  // namespace

std::size_t SymTensorBasis::index_of(std::vector<std::size_t> tuple) const {
  std::sort(tuple.begin(), tuple.end());
  const auto it = std::lower_bound(elements.begin(), elements.end(), tuple);
  if (it == elements.end() || *it != tuple) throw SymbolError("tuple outside the symmetric basis");
  return static_cast<std::size_t>(it - elements.begin());
}

SymTensorBasis sym_basis(std::size_t k, std::size_t n) {
  check_n(n);
  if (k < 1 || k > 3) throw SymbolError("symmetric basis supports orders 1..3, got " + std::to_string(k));
  SymTensorBasis b;
  b.k = k;
  b.dim = 2 * n;
  std::vector<std::size_t> t(k, 0);
  while (true) {
    b.elements.push_back(t);
    // next non-decreasing tuple
    std::size_t i = k;
    while (i > 0 && t[i - 1] == b.dim - 1) --i;
    if (i == 0) break;
    ++t[i - 1];
    for (std::size_t j = i; j < k; ++j) t[j] = t[i - 1];
  }
  return b;
}

void SymbolMatrix::append_row(const std::vector<std::int64_t>& row, std::string label) {
  if (row.size() != cols_) throw SymbolError("row length does not match the column count");
  data_.insert(data_.end(), row.begin(), row.end());
  row_labels_.push_back(std::move(label));
  ++rows_;
}

void SymbolMatrix::stack(const SymbolMatrix& other) {
  if (other.cols_ != cols_) throw SymbolError("stacked symbol matrices have different column counts");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  row_labels_.insert(row_labels_.end(), other.row_labels_.begin(), other.row_labels_.end());
  rows_ += other.rows_;
}

bool SymbolMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::int64_t v) { return v == 0; });
}

std::size_t rank(const SymbolMatrix& m) {
  // Zero and repeated rows do not change the rank; drop them before elimination.
  std::set<Row> seen;
  std::vector<std::vector<cpp_int>> a;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Row row(m.cols());
    bool nonzero = false;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      row[c] = m(r, c);
      nonzero = nonzero || row[c] != 0;
    }
    if (!nonzero || !seen.insert(row).second) continue;
    a.emplace_back(row.begin(), row.end());
  }
  return bareiss(a, m.cols());
}

std::size_t kernel_dim(const SymbolMatrix& m) { return m.cols() - rank(m); }

cpp_int determinant(const SymbolMatrix& m) {
  if (m.rows() != m.cols()) throw SymbolError("determinant of a non-square matrix");
  std::vector<std::vector<cpp_int>> a(m.rows(), std::vector<cpp_int>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m(r, c);
  int sign = 1;
  if (bareiss(a, m.cols(), &sign) < m.rows()) return 0;
  return m.rows() == 0 ? cpp_int(1) : cpp_int(sign * a.back().back());
}

SymbolMatrix multiply(const SymbolMatrix& a, const SymbolMatrix& b) {
  if (a.cols() != b.rows())
    throw SymbolError("product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " and " +
                      std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + " matrices");
  SymbolMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::int64_t x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        std::int64_t t = 0;
        if (__builtin_mul_overflow(x, b(k, j), &t) || __builtin_add_overflow(out(i, j), t, &out(i, j)))
          throw SymbolError("integer overflow in symbol product");
      }
    }
  return out;
}

const char* to_string(RapcsakSystem s) { return s == RapcsakSystem::P1 ? "P1" : "P2"; }

std::vector<std::int64_t> evaluation_row(const SymTensorBasis& basis, const std::vector<FrameVector>& vectors) {
  if (vectors.size() != basis.k) throw SymbolError("evaluation needs exactly k vectors");
  std::vector<std::vector<std::size_t>> support(vectors.size());
  for (std::size_t v = 0; v < vectors.size(); ++v) {
    if (vectors[v].size() != basis.dim) throw SymbolError("frame vector has the wrong dimension");
    for (std::size_t i = 0; i < basis.dim; ++i)
      if (vectors[v][i] != 0) support[v].push_back(i);
  }
  Row row(basis.size(), 0);
  std::vector<std::size_t> pos(vectors.size(), 0);
  for (const auto& s : support)
    if (s.empty()) return row;
  while (true) {
    std::vector<std::size_t> tuple(vectors.size());
    std::int64_t c = 1;
    for (std::size_t v = 0; v < vectors.size(); ++v) {
      tuple[v] = support[v][pos[v]];
      c *= vectors[v][tuple[v]];
    }
    row[basis.index_of(tuple)] += c;
    std::size_t v = 0;
    while (v < vectors.size() && ++pos[v] == support[v].size()) pos[v++] = 0;
    if (v == vectors.size()) break;
  }
  return row;
}

SymbolMatrix symbol_matrix(SymbolOp op, std::size_t k, std::size_t n) {
  check_n(n);
  const Frame f{n, 2 * n};
  const auto undefined = [&] {
    return SymbolError("symbol of order " + std::to_string(k) + " is not defined for this operator");
  };
  if (k < 1 || k > 3) throw undefined();
  const SymTensorBasis b = sym_basis(k, n);
  SymbolMatrix m(0, b.size());
  m.col_labels = basis_labels(b, f);
  switch (op) {
    case SymbolOp::PC:
      if (k == 1) m.append_row(evaluation_row(b, {f.C()}), "PC1");
      if (k == 2)
        for (std::size_t x = 0; x < f.dim; ++x) m.append_row(evaluation_row(b, {f.e(x), f.C()}), "PC2(" + f.name(x) + ")");
      if (k == 3)
        for (std::size_t x = 0; x < f.dim; ++x)
          for (std::size_t y = 0; y < f.dim; ++y)
            m.append_row(evaluation_row(b, {f.e(x), f.e(y), f.C()}), "PC3(" + f.name(x) + "," + f.name(y) + ")");
      break;
    case SymbolOp::PS:
      if (k == 1) throw undefined();
      if (k == 2)
        for (std::size_t x = 0; x < f.dim; ++x) {
          const FrameVector X = f.e(x);
          m.append_row(combine(1, evaluation_row(b, {f.S(), f.J(X)}), -1, evaluation_row(b, {X, f.C()})),
                       "PS2(" + f.name(x) + ")");
        }
      if (k == 3)
        for (std::size_t x = 0; x < f.dim; ++x)
          for (std::size_t y = 0; y < f.dim; ++y) {
            const FrameVector X = f.e(x), Y = f.e(y);
            m.append_row(combine(1, evaluation_row(b, {X, f.S(), f.J(Y)}), -1, evaluation_row(b, {X, Y, f.C()})),
                         "PS3(" + f.name(x) + "," + f.name(y) + ")");
          }
      break;
    case SymbolOp::PGamma:
      if (k == 1) throw undefined();
      for (std::size_t x = 0; x < (k == 3 ? f.dim : 1); ++x)
        for (const auto& [i, j] : horizontal_pairs(n)) {
          const FrameVector hi = f.H(i), hj = f.H(j);
          std::vector<FrameVector> a{hi, f.J(hj)}, c{hj, f.J(hi)};
          std::string label = "PG" + std::to_string(k) + "(";
          if (k == 3) {
            a.insert(a.begin(), f.e(x));
            c.insert(c.begin(), f.e(x));
            label += f.name(x) + ",";
          }
          m.append_row(combine(2, evaluation_row(b, a), -2, evaluation_row(b, c)),
                       label + f.name(i) + "^" + f.name(j) + ")");
        }
      break;
  }
  return m;
}

SymbolMatrix system_symbol(RapcsakSystem sys, std::size_t k, std::size_t n) {
  check_n(n);
  if (k != 2 && k != 3) throw SymbolError("system symbols are defined for orders 2 and 3");
  SymbolMatrix m = symbol_matrix(sys == RapcsakSystem::P1 ? SymbolOp::PS : SymbolOp::PGamma, k, n);
  if (k == 2) {
    m.stack(symbol_matrix(SymbolOp::PC, 2, n));
  } else {
    const Frame f{n, 2 * n};
    append_pc3_sym(m, sym_basis(3, n), f);
  }
  return m;
}

SymbolMatrix tau_matrix(RapcsakSystem sys, std::size_t n) {
  check_n(n);
  const Frame f{n, 2 * n};
  const std::size_t d = f.dim;
  const auto spairs = sorted_pairs(d);
  const std::size_t nc = spairs.size();
  std::vector<std::string> labels;

  if (sys == RapcsakSystem::P1) {
    const std::size_t ns = d * d;
    const std::size_t cols = ns + nc;
    auto bs = [&](const FrameVector& u, const FrameVector& w) {
      Row r(cols, 0);
      for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) r[p * d + q] += u[p] * w[q];
      return r;
    };
    auto bc = [&](const FrameVector& u, const FrameVector& w) {
      Row r(cols, 0);
      for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) r[ns + pair_index(p, q, d)] += u[p] * w[q];
      return r;
    };
    SymbolMatrix m(0, cols);
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q) m.col_labels.push_back("BS(" + f.name(p) + "," + f.name(q) + ")");
    for (const auto& [p, q] : spairs) m.col_labels.push_back("BC(" + f.name(p) + "," + f.name(q) + ")");

    for (std::size_t x = 0; x < d; ++x)
      for (std::size_t y = 0; y < d; ++y) {
        const FrameVector X = f.e(x), Y = f.e(y);
        Row r = bs(f.J(X), f.h(Y));
        axpy(r, -1, bs(f.h(Y), f.J(X)));
        axpy(r, -1, bs(f.J(Y), f.h(X)));
        axpy(r, 1, bs(f.h(X), f.J(Y)));
        m.append_row(r, "tau1_S(" + f.name(x) + "," + f.name(y) + ")");
      }
    for (std::size_t x = 0; x < d; ++x) m.append_row(bs(f.e(x), f.S()), "tau2_S(" + f.name(x) + ")");
    for (std::size_t x = 0; x < d; ++x)
      for (std::size_t y = 0; y < d; ++y) {
        const FrameVector X = f.e(x), Y = f.e(y);
        m.append_row(combine(1, bs(X, f.J(Y)), 1, bc(X, f.J(Y))), "tau1_SC(" + f.name(x) + "," + f.name(y) + ")");
      }
    for (std::size_t x = 0; x < d; ++x) {
      const FrameVector X = f.e(x);
      Row r = bs(f.C(), f.h(X));
      axpy(r, -1, bc(f.S(), f.J(X)));
      axpy(r, 1, bc(f.h(X), f.C()));
      m.append_row(r, "tau2_SC(" + f.name(x) + ")");
    }
    return m;
  }

  const auto hp = horizontal_pairs(n);
  const std::size_t np = hp.size();
  const std::size_t ng = d * np;
  const std::size_t cols = ng + nc;
  auto bg = [&](const FrameVector& u, const FrameVector& w, const FrameVector& z) {
    Row r(cols, 0);
    for (std::size_t p = 0; p < d; ++p) {
      if (u[p] == 0) continue;
      for (std::size_t c = 0; c < np; ++c) {
        const auto [i, j] = hp[c];
        r[p * np + c] += u[p] * (w[i] * z[j] - w[j] * z[i]);
      }
    }
    return r;
  };
  auto bc = [&](const FrameVector& u, const FrameVector& w) {
    Row r(cols, 0);
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q) r[ng + pair_index(p, q, d)] += u[p] * w[q];
    return r;
  };
  SymbolMatrix m(0, cols);
  for (std::size_t p = 0; p < d; ++p)
    for (const auto& [i, j] : hp) m.col_labels.push_back("BG(" + f.name(p) + "," + f.name(i) + "^" + f.name(j) + ")");
  for (const auto& [p, q] : spairs) m.col_labels.push_back("BC(" + f.name(p) + "," + f.name(q) + ")");

  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z) {
        const FrameVector X = f.e(x), Y = f.e(y), Z = f.e(z);
        const std::string args = "(" + f.name(x) + "," + f.name(y) + "," + f.name(z) + ")";
        Row r1 = bg(f.h(X), Y, Z);
        axpy(r1, 1, bg(f.h(Y), Z, X));
        axpy(r1, 1, bg(f.h(Z), X, Y));
        m.append_row(r1, "tau1_G" + args);
        Row r2 = bg(f.J(X), Y, Z);
        axpy(r2, 1, bg(f.J(Y), Z, X));
        axpy(r2, 1, bg(f.J(Z), X, Y));
        m.append_row(r2, "tau2_G" + args);
      }
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) {
      const FrameVector X = f.e(x), Y = f.e(y);
      // twice the defining combination, which carries a factor 1/2 on B_Gamma
      Row r = bg(f.C(), X, Y);
      axpy(r, -2, bc(f.h(X), f.J(Y)));
      axpy(r, 2, bc(f.h(Y), f.J(X)));
      m.append_row(r, "tau_GC(" + f.name(x) + "," + f.name(y) + ")");
    }
  return m;
}

ExactnessReport exactness_check(RapcsakSystem sys, std::size_t n) {
  const SymbolMatrix sigma = system_symbol(sys, 3, n);
  const SymbolMatrix tau = tau_matrix(sys, n);
  ExactnessReport r;
  r.composition_zero = multiply(tau, sigma).is_zero();
  r.rank_sigma3 = rank(sigma);
  r.ker_tau = kernel_dim(tau);
  r.exact = r.composition_zero && r.rank_sigma3 == r.ker_tau;
  return r;
}

FlagBasis standard_flag_basis(RapcsakSystem sys, std::size_t n) {
  check_n(n);
  const Frame f{n, 2 * n};
  FlagBasis b;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    FrameVector e = f.H(i);
    if (sys == RapcsakSystem::P2) e[n + i] = static_cast<std::int64_t>(i + 1);
    b.push_back(e);
  }
  FrameVector en = f.H(n - 1);
  for (std::size_t i = 0; i < n; ++i) en[n + i] = 1;
  b.push_back(en);
  for (std::size_t i = 0; i < n; ++i) b.push_back(f.V(i));
  return b;
}

FlagBasis coordinate_flag_basis(std::size_t n) {
  check_n(n);
  const Frame f{n, 2 * n};
  FlagBasis b;
  for (std::size_t i = 0; i < f.dim; ++i) b.push_back(f.e(i));
  return b;
}

std::vector<std::size_t> restricted_kernel_dims(RapcsakSystem sys, const FlagBasis& basis, std::size_t n) {
  check_n(n);
  const std::size_t d = 2 * n;
  if (basis.size() != d) throw SymbolError("flag basis needs " + std::to_string(d) + " vectors");
  SymbolMatrix bm(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    if (basis[c].size() != d) throw SymbolError("flag basis vector has the wrong dimension");
    for (std::size_t r = 0; r < d; ++r) bm(r, c) = basis[c][r];
  }
  if (determinant(bm) == 0) throw SymbolError("flag basis is singular");

  const Frame f{n, d};
  const SymTensorBasis b2 = sym_basis(2, n);
  SymbolMatrix m = system_symbol(sys, 2, n);
  std::vector<std::size_t> out{kernel_dim(m)};
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t x = 0; x < d; ++x) m.append_row(evaluation_row(b2, {basis[j], f.e(x)}));
    out.push_back(kernel_dim(m));
  }
  return out;
}

std::int64_t closed_g2(RapcsakSystem sys, std::size_t n) {
  const auto N = static_cast<std::int64_t>(n);
  return sys == RapcsakSystem::P1 ? N * N + (N - 1) * (N - 1) : N * (N + 1) / 2 + N * (N - 1);
}

std::int64_t closed_g3(RapcsakSystem sys, std::size_t n) {
  const auto N = static_cast<std::int64_t>(n);
  return sys == RapcsakSystem::P1 ? (8 * N * N * N - 9 * N * N + 7 * N) / 6 : (4 * N * N * N + 3 * N * N - N) / 6;
}

std::int64_t closed_rank_sigma3(RapcsakSystem sys, std::size_t n) {
  const auto N = static_cast<std::int64_t>(n);
  return sys == RapcsakSystem::P1 ? (7 * N * N - N) / 2 : (4 * N * N * N + 9 * N * N + 5 * N) / 6;
}

std::int64_t closed_ker_tau(RapcsakSystem sys, std::size_t n) { return closed_rank_sigma3(sys, n); }

std::int64_t printed_flag_dim(RapcsakSystem sys, std::size_t n, std::size_t k) {
  const auto N = static_cast<std::int64_t>(n);
  const auto K = static_cast<std::int64_t>(k);
  if (sys == RapcsakSystem::P1) {
    if (K <= N) return (N - K) * (N - K + 1) / 2 + (N - K) * (N - 1) + (N - 2) * (N - 1) / 2;
    return (N - 2 - K) * (N - K - 1) / 2;
  }
  if (K <= N) return (N - K + 1) * (N - K) / 2 + (N - 1) * (N - K);
  return 0;
}

InvolutivityReport involutivity_audit(RapcsakSystem sys, std::size_t n) {
  check_n(n);
  InvolutivityReport r;
  r.system = sys;
  r.n = n;
  const std::vector<std::size_t> dims = restricted_kernel_dims(sys, standard_flag_basis(sys, n), n);
  r.g2 = dims[0];
  r.g3 = kernel_dim(system_symbol(sys, 3, n));
  r.flag_sum = 0;
  r.flags_non_increasing = true;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    r.flag_sum += dims[k];
    if (k > 0 && dims[k] > dims[k - 1]) r.flags_non_increasing = false;
    if (k == 0) continue;
    FlagStep s;
    s.k = k;
    s.computed = dims[k];
    s.printed = printed_flag_dim(sys, n, k);
    s.agrees = s.printed == static_cast<std::int64_t>(s.computed);
    if (!s.agrees) r.printed_mismatches.push_back(k);
    r.flags.push_back(s);
  }
  r.quasi_regular = r.flag_sum == r.g3;
  r.g2_matches = static_cast<std::int64_t>(r.g2) == closed_g2(sys, n);
  r.g3_matches = static_cast<std::int64_t>(r.g3) == closed_g3(sys, n);
  r.exactness = exactness_check(sys, n);
  r.rank_matches = static_cast<std::int64_t>(r.exactness.rank_sigma3) == closed_rank_sigma3(sys, n);
  r.ker_tau_matches = static_cast<std::int64_t>(r.exactness.ker_tau) == closed_ker_tau(sys, n);
  return r;
}

}  // namespace spraykit
