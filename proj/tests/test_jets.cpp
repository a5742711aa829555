#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spraykit/jet.hpp"
#include "support.hpp"

using namespace spraykit;

namespace {

Jet3 random_jet(std::mt19937_64& rng, std::size_t nvars) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Jet3 j(nvars);
  for (std::size_t r = 0; r < j.size(); ++r) j.coeff(r) = u(rng);
  return j;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Jets, VariableSeed) {
  const Jet3 a = Jet3::variable(0, 5.0, 2);
  EXPECT_EQ(a.value(), 5.0);
  EXPECT_EQ(a.d(0), 1.0);
  EXPECT_EQ(a.d(1), 0.0);
  const int e20[] = {2, 0};
  EXPECT_EQ(extract_partial(a, e20), 0.0);

  const Jet3 b = Jet3::variable(1, -2.0, 2);
  EXPECT_EQ(b.value(), -2.0);
  EXPECT_EQ(b.d(1), 1.0);
  EXPECT_EQ(b.d(0), 0.0);
  EXPECT_THROW(Jet3::variable(2, 0.0, 2), JetError);
}

TEST(Jets, LayoutSize) {
  for (std::size_t nv = 0; nv <= kMaxJetVars; ++nv) {
    const std::size_t expected = (nv + 3) * (nv + 2) * (nv + 1) / 6;
    EXPECT_EQ(jet_size(nv), expected);
    EXPECT_EQ(Jet3(nv).size(), expected);
  }
}

TEST(Jets, SquareOfVariable) {
  const Jet3 z = Jet3::variable(0, 3.0, 1);
  const Jet3 sq = z * z;
  EXPECT_DOUBLE_EQ(sq.value(), 9.0);
  EXPECT_DOUBLE_EQ(sq.d(0), 6.0);
  EXPECT_DOUBLE_EQ(sq.d(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(sq.d(0, 0, 0), 0.0);
}

TEST(Jets, ReciprocalMatchesSymbolicDerivatives) {
  const Jet3 z = Jet3::variable(0, 2.0, 1);
  const Jet3 r = Jet3::constant(1.0, 1) / z;
  // 1/z, -1/z^2, 2/z^3, -6/z^4 at z = 2
  EXPECT_DOUBLE_EQ(r.value(), 0.5);
  EXPECT_DOUBLE_EQ(r.d(0), -0.25);
  EXPECT_DOUBLE_EQ(r.d(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(r.d(0, 0, 0), -0.375);
}

TEST(Jets, AddNegationIsZero) {
  std::mt19937_64 rng(1);
  const Jet3 a = random_jet(rng, 4);
  const Jet3 z = a + (-a);
  for (double c : z.coeffs()) EXPECT_EQ(c, 0.0);
}

TEST(Jets, DivisionByZeroValueThrows) {
  const Jet3 z = Jet3::variable(0, 0.0, 2);
  EXPECT_THROW(Jet3::constant(1.0, 2) / z, JetError);
}

TEST(Jets, MismatchedVariableCountThrows) {
  EXPECT_THROW(Jet3(2) + Jet3(3), JetError);
  EXPECT_THROW(Jet3(2) * Jet3(3), JetError);
}

TEST(Jets, SqrtOfConstant) {
  const Jet3 r = sqrt(Jet3::constant(4.0, 3));
  EXPECT_DOUBLE_EQ(r.value(), 2.0);
  for (std::size_t k = 1; k < r.size(); ++k) EXPECT_EQ(r.coeff(k), 0.0);
}

TEST(Jets, SineTaylor) {
  const Jet3 s = sin(Jet3::variable(0, 0.0, 1));
  EXPECT_DOUBLE_EQ(s.value(), 0.0);
  EXPECT_DOUBLE_EQ(s.d(0), 1.0);
  EXPECT_DOUBLE_EQ(s.d(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(s.d(0, 0, 0), -1.0);
}

TEST(Jets, DomainViolations) {
  EXPECT_THROW(sqrt(Jet3::constant(-1.0, 1)), JetError);
  EXPECT_THROW(log(Jet3::constant(0.0, 1)), JetError);
  EXPECT_THROW(pow(Jet3::constant(-2.0, 1), 0.5), JetError);
}

TEST(Jets, ExpOfLogIsIdentity) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Jet3 a = random_jet(rng, 4);
    a.coeff(0) = 0.5 + std::fabs(a.coeff(0));
    const Jet3 b = exp(log(a));
    for (std::size_t r = 0; r < a.size(); ++r) EXPECT_NEAR(b.coeff(r), a.coeff(r), 1e-12 * (1.0 + std::fabs(a.coeff(r))));
  }
}

TEST(Jets, ExtractPartialOfProduct) {
  const Jet3 z0 = Jet3::variable(0, 1.5, 2);
  const Jet3 z1 = Jet3::variable(1, -0.5, 2);
  const int a11[] = {1, 1};
  EXPECT_DOUBLE_EQ(extract_partial(z0 * z1, a11), 1.0);
  const Jet3 c = Jet3::constant(3.25, 2);
  const int a00[] = {0, 0};
  EXPECT_DOUBLE_EQ(extract_partial(c, a00), 3.25);
  const int a22[] = {2, 2};
  EXPECT_THROW(extract_partial(c, a22), JetError);
}

TEST(Jets, AddAndMulCommuteAndAssociate) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Jet3 a = random_jet(rng, 3), b = random_jet(rng, 3), c = random_jet(rng, 3);
    const Jet3 ab = a * b, ba = b * a;
    const Jet3 l = (a * b) * c, r = a * (b * c);
    const Jet3 s1 = (a + b) + c, s2 = a + (b + c);
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_NEAR(ab.coeff(k), ba.coeff(k), 1e-12);
      EXPECT_NEAR(l.coeff(k), r.coeff(k), 1e-12 * (1.0 + std::fabs(l.coeff(k))));
      EXPECT_NEAR(s1.coeff(k), s2.coeff(k), 1e-12);
    }
  }
}

// Leibniz rule over exponent vectors: (ab)_alpha = sum_{beta <= alpha} prod binom(alpha_i, beta_i) a_beta b_{alpha-beta}.
TEST(Jets, ProductIsTruncatedLeibnizSum) {
  std::mt19937_64 rng(11);
  const std::size_t nv = 3;
  const auto alphas = fixtures::multi_indices(nv);
  for (int trial = 0; trial < 10; ++trial) {
    const Jet3 a = random_jet(rng, nv), b = random_jet(rng, nv);
    const Jet3 p = a * b;
    for (const auto& alpha : alphas) {
      double expected = 0.0;
      std::vector<int> beta(nv, 0);
      while (true) {
        std::vector<int> gamma(nv);
        double w = 1.0;
        for (std::size_t i = 0; i < nv; ++i) {
          gamma[i] = alpha[i] - beta[i];
          w *= binom(alpha[i], beta[i]);
        }
        expected += w * extract_partial(a, beta) * extract_partial(b, gamma);
        std::size_t i = 0;
        while (i < nv && ++beta[i] > alpha[i]) beta[i++] = 0;
        if (i == nv) break;
      }
      EXPECT_NEAR(extract_partial(p, alpha), expected, 1e-12 * (1.0 + std::fabs(expected)));
    }
  }
}

TEST(Jets, DerivativeLowersOrder) {
  const Jet3 z = Jet3::variable(0, 2.0, 2);
  const Jet3 cube = z * z * z;
  const Jet3 d = cube.derivative(0);
  EXPECT_EQ(d.order(), 2);
  EXPECT_DOUBLE_EQ(d.value(), 12.0);
  EXPECT_DOUBLE_EQ(d.d(0), 12.0);
  EXPECT_DOUBLE_EQ(d.d(0, 0), 6.0);
  EXPECT_EQ(d.d(0, 0, 0), 0.0);
  // sums clamp to the lower valid order
  EXPECT_EQ((d + cube).order(), 2);
}

TEST(Jets, IntegerPowerOfNegativeBase) {
  const Jet3 z = Jet3::variable(0, -2.0, 1);
  const Jet3 p = ipow(z, 3);
  EXPECT_DOUBLE_EQ(p.value(), -8.0);
  EXPECT_DOUBLE_EQ(p.d(0), 12.0);
  EXPECT_DOUBLE_EQ(p.d(0, 0), -12.0);
  EXPECT_DOUBLE_EQ(p.d(0, 0, 0), 6.0);
  const Jet3 q = ipow(z, -1);
  EXPECT_DOUBLE_EQ(q.value(), -0.5);
  EXPECT_DOUBLE_EQ(q.d(0), -0.25);
}

TEST(Jets, PowConstMatchesClosedForm) {
  const Jet3 z = Jet3::variable(0, 4.0, 1);
  const Jet3 p = pow(z, 1.5);
  EXPECT_DOUBLE_EQ(p.value(), 8.0);
  EXPECT_DOUBLE_EQ(p.d(0), 1.5 * 2.0);
  EXPECT_DOUBLE_EQ(p.d(0, 0), 0.75 * 0.5);
  EXPECT_NEAR(p.d(0, 0, 0), -0.375 / 8.0, 1e-15);
}
