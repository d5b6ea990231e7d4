#pragma once

#include "relaycs/types.hpp"

namespace relaycs {

/// Strictly increasing angles in [0, 2*pi).
struct AngleGrid {
  RVector points;

  int count() const { return static_cast<int>(points.size()); }
};

/// Grid of `count` angles whose sines cover [-1, 1) uniformly. A uniform
/// grid in angle would sample sin(theta) twice over a full turn and produce
/// duplicated dictionary columns; the sine-space grid keeps all columns
/// distinct (and makes the dictionary unitary when count == num_elements).
AngleGrid uniform_sine_grid(int count);

/// Half-wavelength ULA response, entry n = exp(j*pi*n*sin(angle)) / sqrt(N).
CVector steering_vector(int num_elements, double angle);

/// Steering vectors for every grid angle, one unit-norm column per angle.
struct SteeringDictionary {
  AngleGrid grid;
  int num_elements = 0;
  CMatrix matrix;  // num_elements x grid.count()

  int grid_size() const { return grid.count(); }
};

SteeringDictionary build_dictionary(int num_elements, const AngleGrid& grid);

}  // namespace relaycs
