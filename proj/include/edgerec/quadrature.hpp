#pragma once

#include <array>
#include <vector>

namespace edgerec {

/// Barycentric point and weight; weights of a rule sum to 1.
struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};

/// Symmetric triangle rules exact up to the given polynomial degree.
/// Supported orders: 1, 2, 3, 4, 6. Throws std::invalid_argument otherwise.
std::vector<QuadPoint> triangle_quadrature(int order);

}  // namespace edgerec
