#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "spraykit/expr.hpp"
#include "spraykit/jet.hpp"
#include "spraykit/sampling.hpp"

namespace spraykit::fixtures {

inline SprayModel make_spray(std::size_t n, std::vector<std::string> f) { return SprayModel::parse(n, f); }

inline SprayModel flat_spray(std::size_t n) { return make_spray(n, std::vector<std::string>(n, "0")); }

inline SprayModel polar_flat_spray() { return make_spray(2, {"x1*y2^2", "-2*y1*y2/x1"}); }

inline SprayModel sphere_spray() { return make_spray(2, {"sin(x1)*cos(x1)*y2^2", "-2*(cos(x1)/sin(x1))*y1*y2"}); }

inline std::string euclidean_norm_text(std::size_t n) {
  std::string s = "sqrt(";
  for (std::size_t i = 1; i <= n; ++i) s += (i > 1 ? " + y" : "y") + std::to_string(i) + "^2";
  return s + ")";
}

inline ScalarModel euclidean_norm(std::size_t n) { return ScalarModel::parse(n, euclidean_norm_text(n), 1); }

inline ScalarModel sphere_norm() { return ScalarModel::parse(2, "sqrt(y1^2 + sin(x1)^2*y2^2)", 1); }

/// Flat spray deformed by the Euclidean norm: f^i = -2 |y| y^i.
inline SprayModel deformed_flat_spray(std::size_t n) {
  std::vector<std::string> f;
  for (std::size_t i = 1; i <= n; ++i) f.push_back("-2*" + euclidean_norm_text(n) + "*y" + std::to_string(i));
  return make_spray(n, f);
}

struct Fixture {
  std::string name;
  SprayModel spray;
  SampleBox box;
};

inline std::vector<Fixture> fixture_sprays() {
  SampleBox polar;
  polar.x_box = {{1.0, 3.0}, {-1.0, 1.0}};
  SampleBox sphere;
  sphere.x_box = {{0.5, 2.5}, {-1.0, 1.0}};
  return {{"flat", flat_spray(2), {}},
          {"polar-flat", polar_flat_spray(), polar},
          {"deformed-flat", deformed_flat_spray(2), {}},
          {"deformed-flat-3", deformed_flat_spray(3), {}},
          {"sphere", sphere_spray(), sphere}};
}

/// Mixed partial of the plain evaluator by tensor-product central
/// differences, Richardson-extrapolated from steps h and h/2.
inline double fd_partial(const Expr& e, const TangentPoint& p, const std::vector<int>& alpha, double h = 1e-2) {
  const std::size_t n = p.dim();
  auto stencil = [](int m) -> std::vector<std::pair<int, double>> {
    switch (m) {
      case 0: return {{0, 1.0}};
      case 1: return {{1, 0.5}, {-1, -0.5}};
      case 2: return {{1, 1.0}, {0, -2.0}, {-1, 1.0}};
      default: return {{2, 0.5}, {1, -1.0}, {-1, 1.0}, {-2, -0.5}};
    }
  };
  auto diff = [&](double step) {
    // iterate over the tensor product of the per-variable stencils
    std::vector<std::vector<std::pair<int, double>>> st;
    int total = 0;
    for (int a : alpha) {
      st.push_back(stencil(a));
      total += a;
    }
    std::vector<std::size_t> pos(st.size(), 0);
    double acc = 0.0;
    while (true) {
      TangentPoint q = p;
      double w = 1.0;
      for (std::size_t v = 0; v < st.size(); ++v) {
        const auto [off, c] = st[v][pos[v]];
        w *= c;
        (v < n ? q.x[v] : q.y[v - n]) += off * step;
      }
      acc += w * eval(e, q);
      std::size_t v = 0;
      while (v < st.size() && ++pos[v] == st[v].size()) pos[v++] = 0;
      if (v == st.size()) break;
    }
    return acc / std::pow(step, total);
  };
  const double d1 = diff(h);
  const double d2 = diff(h / 2);
  return (4.0 * d2 - d1) / 3.0;
}

/// All exponent vectors over nvars variables with total degree <= 3.
inline std::vector<std::vector<int>> multi_indices(std::size_t nvars) {
  std::vector<std::vector<int>> out;
  for (std::size_t r = 0; r < jet_size(nvars); ++r) {
    std::vector<int> a(nvars, 0);
    for (std::size_t v : jet_multi_index(nvars, r)) ++a[v];
    out.push_back(a);
  }
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace spraykit::fixtures
