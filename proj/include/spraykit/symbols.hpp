#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace spraykit {

/// Symbol computations live in the abstract adapted frame of dimension 2n:
/// indices 0..n-1 are h_1..h_n (h_n = S), indices n..2n-1 are v_1..v_n (v_n = C).
using FrameVector = std::vector<std::int64_t>;

class SymbolError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct SymTensorBasis {
  std::size_t k = 0;
  std::size_t dim = 0;
  /// Sorted index tuples in lexicographic order.
  std::vector<std::vector<std::size_t>> elements;

  std::size_t size() const { return elements.size(); }
  /// Position of a tuple; the tuple need not be sorted.
  std::size_t index_of(std::vector<std::size_t> tuple) const;
};

SymTensorBasis sym_basis(std::size_t k, std::size_t n);

class SymbolMatrix {
public:
  SymbolMatrix() = default;
  SymbolMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0), row_labels_(rows) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  void append_row(const std::vector<std::int64_t>& row, std::string label = {});
  /// Rows of `other` below the rows of this matrix; column counts must agree.
  void stack(const SymbolMatrix& other);

  const std::vector<std::string>& row_labels() const { return row_labels_; }
  std::vector<std::string> col_labels;

  bool is_zero() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
  std::vector<std::string> row_labels_;
};

/// Exact rank by fraction-free (Bareiss) elimination.
std::size_t rank(const SymbolMatrix& m);
std::size_t kernel_dim(const SymbolMatrix& m);
/// Exact determinant of a square matrix.
boost::multiprecision::cpp_int determinant(const SymbolMatrix& m);
/// Exact product; throws on 64-bit overflow.
SymbolMatrix multiply(const SymbolMatrix& a, const SymbolMatrix& b);

enum class SymbolOp { PC, PS, PGamma };
enum class RapcsakSystem { P1, P2 };
const char* to_string(RapcsakSystem s);

/// Coefficient row of A -> A(v_1, ..., v_k) over sym_basis(k, n).
std::vector<std::int64_t> evaluation_row(const SymTensorBasis& basis, const std::vector<FrameVector>& vectors);

SymbolMatrix symbol_matrix(SymbolOp op, std::size_t k, std::size_t n);
SymbolMatrix system_symbol(RapcsakSystem sys, std::size_t k, std::size_t n);
SymbolMatrix tau_matrix(RapcsakSystem sys, std::size_t n);

struct ExactnessReport {
  bool composition_zero = false;
  std::size_t rank_sigma3 = 0;
  std::size_t ker_tau = 0;
  bool exact = false;
};

ExactnessReport exactness_check(RapcsakSystem sys, std::size_t n);

using FlagBasis = std::vector<FrameVector>;

/// Basis used in the involutivity proof of the system: h_1..h_{n-1}, h_n + v_1 + ... + v_n, v_1..v_n
/// for P1; the same with h_i + i v_i in the first n - 1 slots for P2.
FlagBasis standard_flag_basis(RapcsakSystem sys, std::size_t n);
FlagBasis coordinate_flag_basis(std::size_t n);

/// dim g_2, dim g_2 restricted to e_1, ..., dim g_2 restricted to e_1..e_2n.
std::vector<std::size_t> restricted_kernel_dims(RapcsakSystem sys, const FlagBasis& basis, std::size_t n);

/// Closed-form dimension counts.
std::int64_t closed_g2(RapcsakSystem sys, std::size_t n);
std::int64_t closed_g3(RapcsakSystem sys, std::size_t n);
std::int64_t closed_rank_sigma3(RapcsakSystem sys, std::size_t n);
std::int64_t closed_ker_tau(RapcsakSystem sys, std::size_t n);
/// Printed restricted dimension for the k-th flag step (1 <= k <= 2n).
std::int64_t printed_flag_dim(RapcsakSystem sys, std::size_t n, std::size_t k);

struct FlagStep {
  std::size_t k = 0;
  std::size_t computed = 0;
  std::int64_t printed = 0;
  bool agrees = false;
};

struct InvolutivityReport {
  RapcsakSystem system = RapcsakSystem::P1;
  std::size_t n = 0;
  std::size_t g2 = 0;
  std::size_t g3 = 0;
  std::size_t flag_sum = 0;  // g2 plus all restricted dims
  std::vector<FlagStep> flags;
  bool quasi_regular = false;
  bool flags_non_increasing = false;
  bool g2_matches = false;
  bool g3_matches = false;
  /// Steps where the printed flag formula disagrees with the computed value.
  std::vector<std::size_t> printed_mismatches;
  ExactnessReport exactness;
  bool rank_matches = false;
  bool ker_tau_matches = false;

  /// All closed-form counts reproduced, exact sequence, quasi-regular flag.
  bool all_match() const {
    return quasi_regular && g2_matches && g3_matches && exactness.exact && rank_matches && ker_tau_matches;
  }
};

InvolutivityReport involutivity_audit(RapcsakSystem sys, std::size_t n);

}  // namespace spraykit
