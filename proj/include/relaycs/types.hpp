#pragma once

#include <complex>

#include <Eigen/Dense>

namespace relaycs {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

}  // namespace relaycs
