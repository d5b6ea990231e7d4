#include "relaycs/array_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relaycs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_grid(const AngleGrid& grid) {
  if (grid.count() == 0) throw std::invalid_argument("AngleGrid: empty grid");
  for (int k = 0; k < grid.count(); ++k) {
    const double a = grid.points[k];
    if (!(a >= 0.0 && a < kTwoPi))
      throw std::invalid_argument("AngleGrid: point outside [0, 2*pi)");
    if (k > 0 && !(grid.points[k - 1] < a))
      throw std::invalid_argument("AngleGrid: points not strictly increasing");
  }
}

}  // namespace

AngleGrid uniform_sine_grid(int count) {
  if (count < 1) throw std::invalid_argument("uniform_sine_grid: count < 1");
  std::vector<double> angles(static_cast<std::size_t>(count));
  for (int g = 0; g < count; ++g) {
    const double s = -1.0 + 2.0 * g / count;  // sine values, [-1, 1)
    double a = std::asin(s);
    if (a < 0.0) a += kTwoPi;
    angles[static_cast<std::size_t>(g)] = a;
  }
  std::sort(angles.begin(), angles.end());
  AngleGrid grid;
  grid.points = Eigen::Map<const RVector>(angles.data(), count);
  return grid;
}

CVector steering_vector(int num_elements, double angle) {
  if (num_elements < 1)
    throw std::invalid_argument("steering_vector: num_elements < 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_elements));
  const double step = std::numbers::pi * std::sin(angle);
  CVector v(num_elements);
  for (int n = 0; n < num_elements; ++n) v[n] = std::polar(scale, step * n);
  return v;
}

SteeringDictionary build_dictionary(int num_elements, const AngleGrid& grid) {
  if (num_elements < 1)
    throw std::invalid_argument("build_dictionary: num_elements < 1");
  check_grid(grid);
  SteeringDictionary dict;
  dict.grid = grid;
  dict.num_elements = num_elements;
  dict.matrix.resize(num_elements, grid.count());
  for (int k = 0; k < grid.count(); ++k)
    dict.matrix.col(k) = steering_vector(num_elements, grid.points[k]);
  return dict;
}

}  // namespace relaycs
