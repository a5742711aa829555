#include "spraykit/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace spraykit {

std::vector<TangentPoint> sample_points(std::size_t n, std::size_t count, std::uint64_t seed, const SampleBox& box) {
  if (n == 0) throw std::invalid_argument("sampling needs n >= 1");
  if (!box.x_box.empty() && box.x_box.size() != n)
    throw std::invalid_argument("x_box has " + std::to_string(box.x_box.size()) + " intervals, expected " +
                                std::to_string(n));
  if (!(box.y_min > 0.0) || box.y_max < box.y_min) throw std::invalid_argument("invalid y annulus");
  // Distributions are sampled by hand so the stream is identical across standard libraries.
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto gauss = [&] {
    const double u1 = 1.0 - unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };

  std::vector<TangentPoint> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    TangentPoint p;
    p.x.resize(n);
    p.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = box.x_box.empty() ? box.x_min : box.x_box[i].first;
      const double hi = box.x_box.empty() ? box.x_max : box.x_box[i].second;
      p.x[i] = lo + (hi - lo) * unit();
    }
    double norm = 0.0;
    do {
      norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        p.y[i] = gauss();
        norm += p.y[i] * p.y[i];
      }
    } while (norm < 1e-24);
    const double r = box.y_min + (box.y_max - box.y_min) * unit();
    norm = std::sqrt(norm);
    for (double& v : p.y) v *= r / norm;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace spraykit
