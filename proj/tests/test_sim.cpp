#include <doctest.h>

#include <ddae/errors.hpp>
#include <ddae/sim.hpp>

#include "fixtures.hpp"

using namespace ddae;
using fixtures::scalar;

namespace {

constexpr double kPi = std::numbers::pi;

double cosine_error(double h) {
    const DdaeSystem sys = fixtures::retarded(0.0, -kPi / 2.0);
    InitialState init;
    init.h = h;
    init.phi = Vector::Ones(1);
    const Index steps = init.memory_steps(1.0);
    for (Index k = 0; k <= steps; ++k) {
        init.chi.push_back(Vector::Constant(1, std::cos(kPi * (-1.0 + k * h) / 2.0)));
        init.psi.push_back(Vector(0));
    }
    const Trajectory traj = simulate(sys, init, h, 4.0);
    double error = 0.0;
    for (Index k = 0; k <= traj.steps(); ++k) {
        error = std::max(error, std::abs(traj.x[k](0) - std::cos(kPi * k * h / 2.0)));
    }
    return error;
}

double max_distance(const Trajectory& p, const Trajectory& q) {
    double d = 0.0;
    for (Index k = 0; k <= p.steps(); ++k) {
        d = std::max(d, (p.x[k] - q.x[k]).cwiseAbs().maxCoeff());
        if (p.m > 0) {
            d = std::max(d, (p.y[k] - q.y[k]).cwiseAbs().maxCoeff());
        }
    }
    return d;
}

}  // namespace

TEST_CASE("constants persist") {
    const DdaeSystem sys = make_system(1, 1, 1.0, zero_kernel(1, 1, 1.0), zero_kernel(1, 1, 1.0),
                                       zero_kernel(1, 1, 1.0), dirac(1.0, scalar(1.0)));
    const InitialState init =
        InitialState::constant(Vector::Ones(1), Vector::Ones(1), Vector::Ones(1), 1.0, 0.1);
    const Trajectory traj = simulate(sys, init, 0.1, 5.0);
    CHECK(traj.steps() == 50);
    CHECK(traj.memory_steps() == 10);
    for (Index k = 0; k <= traj.steps(); ++k) {
        CHECK(std::abs(traj.x[k](0) - 1.0) < 1e-14);
        CHECK(std::abs(traj.y[k](0) - 1.0) < 1e-14);
    }
}

TEST_CASE("cosine solution and second-order convergence") {
    CHECK(cosine_error(0.01) < 5e-3);
    const double e1 = cosine_error(0.1);
    const double e2 = cosine_error(0.05);
    const double e3 = cosine_error(0.025);
    CHECK(e2 <= 0.35 * e1);
    CHECK(e3 <= 0.35 * e2);
}

TEST_CASE("explicit variant of the algebraic example stays at zero") {
    const DdaeSystem sys = fixtures::ade_eps(0.1);
    const InitialState init =
        InitialState::constant(Vector::Zero(1), Vector::Zero(1), Vector::Zero(1), 1.0, 0.05);
    const Trajectory traj = simulate(sys, init, 0.05, 3.0);
    for (Index k = 0; k <= traj.steps(); ++k) {
        CHECK(traj.x[k](0) == Complex(0.0));
        CHECK(traj.y[k](0) == Complex(0.0));
    }
}

TEST_CASE("discontinuous initial data") {
    // x' = 0 with chi = 0 but phi = 1: x jumps to 1 at 0+.
    const DdaeSystem sys = fixtures::retarded(0.0, 0.0);
    const InitialState init =
        InitialState::constant(Vector::Ones(1), Vector::Zero(1), Vector(0), 1.0, 0.25);
    const Trajectory traj = simulate(sys, init, 0.25, 1.0);
    CHECK(traj.x_at(-1)(0) == Complex(0.0));
    CHECK(traj.x_at(0)(0) == Complex(1.0));
    CHECK(traj.x_at(4)(0) == Complex(1.0));
}

TEST_CASE("error conditions") {
    const InitialState init =
        InitialState::constant(Vector::Ones(1), Vector::Ones(1), Vector::Ones(1), 1.0, 0.25);
    CHECK_THROWS_AS(simulate(fixtures::ade(), init, 0.25, 1.0), NotWellPosed);
    CHECK_THROWS_AS(simulate(fixtures::ade_eps(0.25), init, 0.25, 1.1), HorizonNotMultipleOfStep);
    CHECK_THROWS_AS(simulate(fixtures::ade_eps(0.3), init, 0.25, 1.0), AtomOffGrid);
}

TEST_CASE("state norm") {
    const DdaeSystem zero = fixtures::retarded(0.0, 0.0);
    const Trajectory z = simulate(
        zero, InitialState::constant(Vector::Zero(1), Vector::Zero(1), Vector(0), 1.0, 0.1), 0.1,
        2.0);
    CHECK(state_norm(z, 1.0) == 0.0);
    const Trajectory one = simulate(
        zero, InitialState::constant(Vector::Ones(1), Vector::Ones(1), Vector(0), 1.0, 0.1), 0.1,
        2.0);
    CHECK(std::abs(state_norm(one, 2.0) - std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(state_norm(one, 0.0) - std::sqrt(2.0)) < 1e-14);
    CHECK_THROWS_AS(state_norm(one, 0.05), OffGrid);
}

TEST_CASE("stable FSA loop decays") {
    const FsaPlant plant = fixtures::double_integrator();
    const DdaeSystem sys = build_fsa(plant, place_poles(plant, {-1.0, -2.0}));
    const InitialState init =
        InitialState::constant(Vector::Ones(2), Vector::Ones(2), Vector::Ones(2), 1.0, 0.01);
    const Trajectory traj = simulate(sys, init, 0.01, 20.0);
    const double ratio = state_norm(traj, 20.0) / state_norm(traj, 0.0);
    CHECK(ratio < std::exp(-0.9 * 20.0) * 10.0);
    const double slope = (std::log(state_norm(traj, 20.0)) - std::log(state_norm(traj, 10.0))) / 10.0;
    CHECK(slope <= -1.0 + 0.1);
    CHECK(slope >= -1.0 - 0.1);
}

TEST_CASE("trajectories of a system and its explicit form agree") {
    oracle::Random rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const DdaeSystem sys = fixtures::random_atomic_system(rng, rng.integer(1, 3),
                                                              rng.integer(1, 3), 1.0, 0.1, 0.6);
        const InitialState init = fixtures::random_initial_state(rng, sys, 0.05);
        const Trajectory p = simulate(sys, init, 0.05, 3.0);
        const Trajectory q = simulate(explicitize(sys), init, 0.05, 3.0);
        CHECK(max_distance(p, q) <= 1e-8);
    }
}

TEST_CASE("restart from a repackaged state") {
    oracle::Random rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const DdaeSystem sys = fixtures::random_mixed_system(rng, rng.integer(1, 3),
                                                             rng.integer(0, 2), 1.0, 0.1, 0.5);
        const InitialState init = fixtures::random_initial_state(rng, sys, 0.05);
        const Trajectory full = simulate(sys, init, 0.05, 4.0);
        const Trajectory first = simulate(sys, init, 0.05, 2.0);
        const Trajectory second = simulate(sys, first.state_at(first.steps()), 0.05, 2.0);
        double d = 0.0;
        for (Index k = 0; k <= second.steps(); ++k) {
            d = std::max(d, (second.x[k] - full.x[k + 40]).cwiseAbs().maxCoeff());
        }
        CHECK(d <= 1e-9);
    }
}
