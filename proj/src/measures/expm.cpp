#include <ddae/measures.hpp>

#include <unsupported/Eigen/MatrixFunctions>

namespace ddae {

// Eigen's MatrixExponential is scaling-and-squaring with a degree-13 Pade
// approximant for double precision scalars.
Matrix expm(const Matrix& a) {
    if (a.size() == 0) {
        return a;
    }
    return a.exp();
}

Matrix exp_integral(double a, double b, const Matrix& x) {
    const Index k = x.rows();
    const double length = b - a;
    // exp([[x L, I L], [0, 0]]) = [[exp(x L), int_0^L exp(u x) du], [0, I]]
    Matrix augmented = Matrix::Zero(2 * k, 2 * k);
    augmented.topLeftCorner(k, k) = x * length;
    augmented.topRightCorner(k, k) = Matrix::Identity(k, k) * length;
    const Matrix block = expm(augmented);
    const Matrix from_zero = block.topRightCorner(k, k);
    if (a == 0.0) {
        return from_zero;
    }
    return expm(x * a) * from_zero;
}

}  // namespace ddae
