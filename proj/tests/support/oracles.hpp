#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the library's numerics beyond constructing kernels.

#include <ddae/measures.hpp>
#include <ddae/model.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

using ddae::Complex;
using ddae::Index;
using ddae::Matrix;

/// Root of a continuous f with a sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Real root of s = e^{-s}.
inline double omega_constant() {
    return bisect([](double s) { return s - std::exp(-s); }, 0.0, 1.0);
}

/// Real root of s - a - b e^{-s tau} = 0 for b > 0; it is the rightmost root.
inline double scalar_retarded_root(double a, double b, double tau = 1.0) {
    const auto g = [&](double s) { return s - a - b * std::exp(-s * tau); };
    double lo = a;  // g(a) < 0
    double hi = a + b + 1.0;
    while (g(hi) < 0.0) {
        hi += 1.0;
    }
    return bisect(g, lo, hi);
}

/// int_a^b g(theta) d theta for complex g, adaptive Gauss-Kronrod.
inline Complex integrate(const std::function<Complex(double)>& g, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    const double re = gauss_kronrod<double, 61>::integrate(
        [&](double t) { return g(t).real(); }, a, b, 15, 1e-14);
    const double im = gauss_kronrod<double, 61>::integrate(
        [&](double t) { return g(t).imag(); }, a, b, 15, 1e-14);
    return {re, im};
}

/// Entrywise quadrature of int_a^b e^{-s theta} M(theta) d theta.
inline Matrix laplace_by_quadrature(const std::function<Matrix(double)>& density, double a,
                                    double b, Complex s, Index rows, Index cols) {
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            out(i, j) = integrate(
                [&](double t) { return std::exp(-s * t) * density(t)(i, j); }, a, b);
        }
    }
    return out;
}

/// Matrix exponential by Taylor series with scaling and squaring (test-side).
inline Matrix taylor_expm(const Matrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scaled = norm;
    while (scaled > 0.5) {
        scaled *= 0.5;
        ++squarings;
    }
    const Matrix x = a / std::pow(2.0, squarings);
    Matrix term = Matrix::Identity(a.rows(), a.cols());
    Matrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) {
        sum = sum * sum;
    }
    return sum;
}

/// Number of eigenvalues of e strictly inside the rectangle.
inline int eigen_count(const Matrix& e, double re_min, double re_max, double im_min,
                       double im_max) {
    Eigen::ComplexEigenSolver<Matrix> solver(e);
    int count = 0;
    for (const auto& z : solver.eigenvalues()) {
        if (z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max) {
            ++count;
        }
    }
    return count;
}

class Random {
  public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<>(lo, hi)(engine_); }
    bool coin(double p) { return std::bernoulli_distribution(p)(engine_); }

    Matrix real_matrix(Index rows, Index cols, double scale = 1.0) {
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) {
                m(i, j) = uniform(-scale, scale);
            }
        }
        return m;
    }

    Matrix complex_matrix(Index rows, Index cols, double scale = 1.0) {
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) {
                m(i, j) = Complex(uniform(-scale, scale), uniform(-scale, scale));
            }
        }
        return m;
    }

    /// Sparse 0/1-pattern matrix with entries in [-scale, scale].
    Matrix sparse_matrix(Index rows, Index cols, double fill, double scale = 1.0) {
        Matrix m = Matrix::Zero(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) {
                if (coin(fill)) {
                    m(i, j) = uniform(-scale, scale);
                }
            }
        }
        return m;
    }

    /// Atomic kernel with atoms on the grid {0, h, ..., r}; strictly causal
    /// unless allow_zero is set.
    ddae::DelayKernel atomic_kernel(Index rows, Index cols, double r, double h, int atoms,
                                    double scale, bool allow_zero) {
        ddae::DelayKernel k(rows, cols, r);
        const int steps = static_cast<int>(std::lround(r / h));
        for (int a = 0; a < atoms; ++a) {
            const int q = integer(allow_zero ? 0 : 1, steps);
            k.add_atom(q * h, real_matrix(rows, cols, scale));
        }
        return k;
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace oracle
