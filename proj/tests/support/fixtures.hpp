#pragma once

// Named example systems and random system generators.

#include <ddae/fsa.hpp>
#include <ddae/model.hpp>

#include "oracles.hpp"

#include <numbers>

namespace fixtures {

using namespace ddae;

inline Matrix scalar(Complex v) { return Matrix::Constant(1, 1, v); }

/// x' = 0, y(t) = x(t) + y(t): J = 0.
inline DdaeSystem ade() {
    return make_system(1, 1, 1.0, zero_kernel(1, 1, 1.0), zero_kernel(1, 1, 1.0),
                       dirac(0.0, scalar(1.0)), dirac(0.0, scalar(1.0)));
}

/// x' = 0, y(t) = x(t) + y(t - eps).
inline DdaeSystem ade_eps(double eps) {
    return make_system(1, 1, 1.0, zero_kernel(1, 1, 1.0), zero_kernel(1, 1, 1.0),
                       dirac(0.0, scalar(1.0)), dirac(eps, scalar(1.0), 1.0));
}

/// x'(t) = a x(t) + b x(t - tau), no algebraic part.
inline DdaeSystem retarded(double a, double b, double tau = 1.0) {
    DelayKernel k(1, 1, tau);
    k.add_atom(0.0, scalar(a));
    k.add_atom(tau, scalar(b));
    return make_system(1, 0, tau, k, zero_kernel(1, 0, tau), zero_kernel(0, 1, tau),
                       zero_kernel(0, 0, tau));
}

/// x' = E x.
inline DdaeSystem ode(const Matrix& e) {
    const Index n = e.rows();
    return make_system(n, 0, 1.0, dirac(0.0, e, 1.0), zero_kernel(n, 0, 1.0),
                       zero_kernel(0, n, 1.0), zero_kernel(0, 0, 1.0));
}

/// y1 = y2, y2 = y1(t - 1); x' = -x drives nothing.
inline DdaeSystem nilpotent_pair() {
    DelayKernel d(2, 2, 1.0);
    d.add_atom(0.0, Matrix{{0.0, 1.0}, {0.0, 0.0}});
    d.add_atom(1.0, Matrix{{0.0, 0.0}, {1.0, 0.0}});
    return make_system(1, 2, 1.0, dirac(0.0, scalar(-1.0), 1.0), zero_kernel(1, 2, 1.0),
                       zero_kernel(2, 1, 1.0), d);
}

/// y1' = y2, y2 = 2 y1 + y2(t - T), written with x = y1, y = y2.
inline DdaeSystem figure_sg(double t) {
    return make_system(1, 1, t, zero_kernel(1, 1, t), dirac(0.0, scalar(1.0), t),
                       dirac(0.0, scalar(2.0), t), dirac(t, scalar(1.0)));
}

inline FsaPlant double_integrator() {
    FsaPlant plant;
    plant.e = RealMatrix{{0.0, 1.0}, {0.0, 0.0}};
    plant.f = RealMatrix{{0.0}, {1.0}};
    plant.t = 1.0;
    return plant;
}

/// Random system with atomic kernels on the grid of step h; D{0} strictly
/// upper triangular (so J is unipotent and invertible) unless any_d0 is set.
inline DdaeSystem random_atomic_system(oracle::Random& rng, Index n, Index m, double r, double h,
                                       double scale, bool any_d0 = false) {
    DelayKernel a = rng.atomic_kernel(n, n, r, h, 2, scale, true);
    DelayKernel b = rng.atomic_kernel(n, m, r, h, 2, scale, true);
    DelayKernel c = rng.atomic_kernel(m, n, r, h, 2, scale, true);
    DelayKernel d = rng.atomic_kernel(m, m, r, h, 2, scale, false);
    if (m > 0) {
        Matrix d0 = rng.sparse_matrix(m, m, 0.5, scale);
        if (!any_d0) {
            d0 = d0.triangularView<Eigen::StrictlyUpper>().toDenseMatrix();
        }
        d.add_atom(0.0, d0);
    }
    return make_system(n, m, r, a, b, c, d);
}

/// Random system with densities as well as grid atoms; J invertible.
inline DdaeSystem random_mixed_system(oracle::Random& rng, Index n, Index m, double r, double h,
                                      double scale) {
    DdaeSystem sys = random_atomic_system(rng, n, m, r, h, scale);
    auto density = [&](Index rows, Index cols) {
        const double a = h * rng.integer(0, 2);
        return DensityPiece{a, r, PolyDensity{{rng.real_matrix(rows, cols, scale),
                                               rng.real_matrix(rows, cols, scale)}}};
    };
    sys.a.add_piece(density(n, n));
    if (m > 0) {
        sys.b.add_piece(density(n, m));
        sys.c.add_piece(DensityPiece{0.0, r, ExpDensity{rng.real_matrix(m, 1, scale),
                                                        rng.real_matrix(1, 1, scale),
                                                        rng.real_matrix(1, n, scale)}});
        sys.d.add_piece(density(m, m));
    }
    return sys;
}

inline InitialState random_initial_state(oracle::Random& rng, const DdaeSystem& sys, double h) {
    InitialState init;
    init.h = h;
    init.phi = rng.real_matrix(sys.n, 1);
    const Index steps = static_cast<Index>(std::lround(sys.r / h));
    const Matrix cx = rng.real_matrix(sys.n, 3);
    const Matrix cy = rng.real_matrix(sys.m, 3);
    for (Index k = 0; k <= steps; ++k) {
        const double t = -sys.r + static_cast<double>(k) * h;
        init.chi.push_back(cx.col(0) + cx.col(1) * std::sin(2.0 * t) + cx.col(2) * t);
        init.psi.push_back(cy.col(0) + cy.col(1) * std::cos(3.0 * t) + cy.col(2) * t * t);
    }
    return init;
}

}  // namespace fixtures
