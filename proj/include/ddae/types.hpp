#pragma once

#include <complex>
#include <Eigen/Dense>

namespace ddae {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Dispatch selector for kernels that ship both an OpenMP and a serial path.
/// Both paths perform identical per-point arithmetic, so results agree bitwise.
enum class Execution { Serial, Parallel };

}  // namespace ddae
