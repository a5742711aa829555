#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "spraykit/tangent_point.hpp"

namespace spraykit {

struct SampleBox {
  /// Per-coordinate bounds for x; when empty, [x_min, x_max] applies to every coordinate.
  std::vector<std::pair<double, double>> x_box;
  double x_min = -1.0;
  double x_max = 1.0;
  /// Annulus for the fiber coordinate.
  double y_min = 0.5;
  double y_max = 2.0;
};

/// Draws `count` points with x uniform in the box and y with a uniformly
/// distributed direction and radius uniform in [y_min, y_max].
/// The same seed always reproduces the same points.
std::vector<TangentPoint> sample_points(std::size_t n, std::size_t count, std::uint64_t seed,
                                        const SampleBox& box = {});

}  // namespace spraykit
