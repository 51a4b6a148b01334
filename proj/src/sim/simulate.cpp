#include <ddae/errors.hpp>
#include <ddae/sim.hpp>

#include <cmath>
#include <utility>

namespace ddae {

namespace {

// Nonzero quadrature weights only; most atomic kernels touch a handful of nodes.
struct SparseWeights {
    std::vector<std::pair<Index, Matrix>> terms;

    explicit SparseWeights(const QuadratureWeights& w) {
        for (Index q = 0; q < w.size(); ++q) {
            if (!w.weights[q].isZero(0.0)) {
                terms.emplace_back(q, w.weights[q]);
            }
        }
    }
};

Index grid_index(double t, double h, const char* what) {
    const double ratio = t / h;
    const auto k = static_cast<Index>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(k)) > 1e-9 * std::max(1.0, std::abs(ratio))) {
        throw OffGrid(std::string(what) + " " + std::to_string(t) + " is not on the grid of step " +
                      std::to_string(h));
    }
    return k;
}

}  // namespace

const Vector& Trajectory::x_at(Index k) const {
    return k >= 0 ? x[k] : memory_x[memory_steps() + k];
}

const Vector& Trajectory::y_at(Index k) const {
    return k >= 0 ? y[k] : memory_y[memory_steps() + k];
}

InitialState Trajectory::state_at(Index k) const {
    InitialState init;
    init.h = h;
    init.phi = x[k];
    const Index steps = memory_steps();
    for (Index j = k - steps; j <= k; ++j) {
        // The segment's t = 0 sample is the memory value only when k == 0.
        const bool from_memory = j < 0 || (j == 0 && k == 0);
        init.chi.push_back(from_memory ? memory_x[steps + j] : x[j]);
        init.psi.push_back(from_memory ? memory_y[steps + j] : y[j]);
    }
    return init;
}

Trajectory simulate(const DdaeSystem& sys, const InitialState& init, double h, double horizon) {
    sys.validate();
    if (std::abs(h - init.h) > 1e-12 * h) {
        throw OffGrid("simulation step differs from the initial state's step");
    }
    init.validate(sys);
    const double ratio = horizon / h;
    const auto total = static_cast<Index>(std::llround(ratio));
    if (!(horizon >= 0.0) ||
        std::abs(ratio - static_cast<double>(total)) > 1e-9 * std::max(1.0, ratio)) {
        throw HorizonNotMultipleOfStep("horizon " + std::to_string(horizon) +
                                       " is not a multiple of step " + std::to_string(h));
    }

    const DdaeSystem ex = explicitize(sys);
    const SparseWeights wa(discretize(ex.a, h));
    const SparseWeights wb(discretize(ex.b, h));
    const SparseWeights we(discretize(ex.c, h));
    const SparseWeights wf(discretize(ex.d, h));
    for (const auto& [q, w] : wf.terms) {
        if (q == 0) {
            throw Error("explicitized algebraic kernel has mass at zero");
        }
    }

    Trajectory traj;
    traj.h = h;
    traj.r = sys.r;
    traj.n = sys.n;
    traj.m = sys.m;
    traj.memory_x = init.chi;
    traj.memory_y = init.psi;
    traj.x.assign(total + 1, Vector::Zero(sys.n));
    traj.y.assign(total + 1, Vector::Zero(sys.m));

    auto algebraic = [&](Index k) {
        Vector acc = Vector::Zero(sys.m);
        for (const auto& [q, w] : we.terms) {
            acc.noalias() += w * traj.x_at(k - q);
        }
        for (const auto& [q, w] : wf.terms) {
            acc.noalias() += w * traj.y_at(k - q);
        }
        return acc;
    };
    auto rate = [&](Index k) {
        Vector acc = Vector::Zero(sys.n);
        for (const auto& [q, w] : wa.terms) {
            acc.noalias() += w * traj.x_at(k - q);
        }
        for (const auto& [q, w] : wb.terms) {
            acc.noalias() += w * traj.y_at(k - q);
        }
        return acc;
    };

    traj.x[0] = init.phi;
    traj.y[0] = algebraic(0);
    for (Index k = 0; k < total; ++k) {
        const Vector g0 = rate(k);
        traj.x[k + 1] = traj.x[k] + h * g0;
        traj.y[k + 1] = algebraic(k + 1);
        const Vector g1 = rate(k + 1);
        traj.x[k + 1] = traj.x[k] + (0.5 * h) * (g0 + g1);
        traj.y[k + 1] = algebraic(k + 1);
    }
    return traj;
}

double state_norm(const Trajectory& traj, double t) {
    if (t < 0.0) {
        throw OffGrid("state_norm needs t >= 0");
    }
    const Index k = grid_index(t, traj.h, "time");
    if (k > traj.steps()) {
        throw OffGrid("time beyond the simulated horizon");
    }
    const InitialState state = traj.state_at(k);
    double integral = 0.0;
    for (std::size_t j = 0; j + 1 < state.chi.size(); ++j) {
        const double left = state.chi[j].squaredNorm() + state.psi[j].squaredNorm();
        const double right = state.chi[j + 1].squaredNorm() + state.psi[j + 1].squaredNorm();
        integral += 0.5 * traj.h * (left + right);
    }
    return std::sqrt(state.phi.squaredNorm() + integral);
}

}  // namespace ddae
