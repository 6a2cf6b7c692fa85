#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qbell {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

}  // namespace qbell
