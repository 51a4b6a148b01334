#pragma once

#include <ddae/model.hpp>

#include <vector>

namespace ddae {

/// Grid solution of an initial value problem. The memory segment holds the
/// initial chi/psi samples on [-r, 0]; x[0] is x(0+) = phi, so x[0] may differ
/// from memory_x.back() for discontinuous initial data.
struct Trajectory {
    double h = 0.0;
    double r = 0.0;
    Index n = 0;
    Index m = 0;
    std::vector<Vector> memory_x;
    std::vector<Vector> memory_y;
    std::vector<Vector> x;
    std::vector<Vector> y;

    Index memory_steps() const { return static_cast<Index>(memory_x.size()) - 1; }
    Index steps() const { return static_cast<Index>(x.size()) - 1; }

    /// Grid value at index k (time k h). Negative k reads the memory; k >= 0
    /// reads the computed solution (x(0+) at k = 0).
    const Vector& x_at(Index k) const;
    const Vector& y_at(Index k) const;

    /// (x(t), x_t, y_t) repackaged as initial data at grid index k.
    InitialState state_at(Index k) const;
};

/// Method of steps with step h up to horizon (a multiple of h). The system is
/// explicitized first; the algebraic equation is evaluated with left-open
/// quadrature weights and the differential part advances by Heun's method.
Trajectory simulate(const DdaeSystem& sys, const InitialState& init, double h, double horizon);

/// |x(t)|^2 + int_{t-r}^{t} |x|^2 + |y|^2, square-rooted; t must be on the grid.
double state_norm(const Trajectory& traj, double t);

}  // namespace ddae
