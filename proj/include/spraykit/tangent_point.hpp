#pragma once

#include <cstddef>
#include <vector>

namespace spraykit {

/// A point (x, y) of the slit tangent bundle; y is the fiber coordinate.
struct TangentPoint {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t dim() const { return x.size(); }

  /// Coordinates in the jet variable order (x1..xn, y1..yn).
  std::vector<double> flat() const {
    std::vector<double> z(x);
    z.insert(z.end(), y.begin(), y.end());
    return z;
  }
};

}  // namespace spraykit
