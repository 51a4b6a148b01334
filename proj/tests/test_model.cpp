#include <doctest.h>

#include <ddae/errors.hpp>
#include <ddae/model.hpp>
#include <ddae/spectrum.hpp>

#include "fixtures.hpp"

using namespace ddae;
using fixtures::scalar;

TEST_CASE("classification of named systems") {
    const WellPosedness ade = classify(fixtures::ade());
    CHECK(ade.kind == WellPosedness::Kind::SingularJ);
    CHECK(ade.smallest_singular_value < 1e-12);
    CHECK_FALSE(ade.j_inverse.has_value());
    CHECK_THROWS_AS(explicitize(fixtures::ade()), NotWellPosed);

    const DdaeSystem fsa = build_fsa(fixtures::double_integrator(), RealMatrix{{2.0, 3.0}});
    CHECK(classify(fsa).kind == WellPosedness::Kind::Explicit);
    CHECK(explicitize(fsa) == fsa);

    const WellPosedness pair = classify(fixtures::nilpotent_pair());
    CHECK(pair.kind == WellPosedness::Kind::InvertibleJ);
    REQUIRE(pair.j_inverse.has_value());
    CHECK((*pair.j_inverse - Matrix{{1.0, 1.0}, {0.0, 1.0}}).cwiseAbs().maxCoeff() < 1e-15);

    CHECK(classify(fixtures::ade_eps(0.25)).kind == WellPosedness::Kind::Explicit);
    CHECK(std::string(to_string(WellPosedness::Kind::SingularJ)) == "SingularJ");
}

TEST_CASE("explicitize the nilpotent pair by hand") {
    const DdaeSystem e = explicitize(fixtures::nilpotent_pair());
    CHECK(atom_at_zero(e.d).isZero(0.0));
    REQUIRE(e.d.atoms().size() == 1);
    CHECK(e.d.atoms()[0].location == 1.0);
    // J^{-1} [[0,0],[1,0]] = [[1,0],[1,0]].
    CHECK(e.d.atoms()[0].weight == Matrix{{1.0, 0.0}, {1.0, 0.0}});
    CHECK(e.a == fixtures::nilpotent_pair().a);
}

TEST_CASE("explicitize is idempotent and strips D{0}") {
    oracle::Random rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const DdaeSystem sys =
            fixtures::random_mixed_system(rng, rng.integer(1, 3), rng.integer(1, 3), 1.0, 0.25, 1.0);
        const DdaeSystem once = explicitize(sys);
        CHECK(atom_at_zero(once.d).isZero(0.0));
        CHECK(explicitize(once) == once);
        CHECK(classify(once).kind == WellPosedness::Kind::Explicit);
    }
}

TEST_CASE("simultaneous singularity of the characteristic matrices") {
    oracle::Random rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        const DdaeSystem sys = fixtures::random_mixed_system(rng, rng.integer(1, 3),
                                                             rng.integer(1, 3), 1.0, 0.25, 1.0);
        const WellPosedness wp = classify(sys);
        REQUIRE(wp.j_inverse.has_value());
        const Complex det_j_inv = wp.j_inverse->determinant();
        for (int p = 0; p < 5; ++p) {
            const Complex s(rng.uniform(-3.0, 3.0), rng.uniform(-20.0, 20.0));
            const double lhs = std::abs(char_det_explicit(sys, s));
            const double rhs = std::abs(det_j_inv) * std::abs(char_det(sys, s));
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(lhs, rhs));
        }
    }
}

TEST_CASE("validation") {
    DdaeSystem sys = fixtures::ade();
    sys.d = zero_kernel(2, 2, 1.0);
    CHECK_THROWS_AS(sys.validate(), DimensionMismatch);
    CHECK_THROWS_AS(make_system(1, 0, 0.5, dirac(1.0, scalar(1.0)), zero_kernel(1, 0, 0.5),
                                zero_kernel(0, 1, 0.5), zero_kernel(0, 0, 0.5)),
                    SupportOutOfRange);

    const InitialState init = InitialState::constant(Vector::Ones(1), Vector::Ones(1),
                                                     Vector::Ones(1), 1.0, 0.25);
    CHECK(init.chi.size() == 5);
    CHECK(init.memory_steps(1.0) == 4);
    CHECK_THROWS_AS(init.memory_steps(1.1), OffGrid);
    InitialState bad = init;
    bad.psi.pop_back();
    CHECK_THROWS_AS(bad.validate(fixtures::ade()), DimensionMismatch);
}

TEST_CASE("initial offset") {
    // No delay operators: f = phi.
    const DdaeSystem none = fixtures::retarded(0.0, 0.0);
    InitialState init = InitialState::constant(Vector::Constant(1, 0.7), Vector::Ones(1),
                                               Vector(0), 1.0, 0.25);
    CHECK(std::abs(initial_offset(none, init)(0) - 0.7) < 1e-15);

    // A = delta_tau, chi = 1 on [-1, 0]: f = phi - int_{-1}^{-tau} chi = phi - (1 - tau).
    for (double tau : {1.0, 0.5, 0.25}) {
        const DdaeSystem sys = make_system(1, 0, 1.0, dirac(tau, scalar(1.0), 1.0),
                                           zero_kernel(1, 0, 1.0), zero_kernel(0, 1, 1.0),
                                           zero_kernel(0, 0, 1.0));
        init.phi = Vector::Zero(1);
        CHECK(std::abs(initial_offset(sys, init)(0) + (1.0 - tau)) < 1e-14);
    }

    // Linear history chi(u) = u, A = delta_0.5: int_{-1}^{-0.5} u du = -0.375.
    const DdaeSystem half = make_system(1, 0, 1.0, dirac(0.5, scalar(1.0), 1.0),
                                        zero_kernel(1, 0, 1.0), zero_kernel(0, 1, 1.0),
                                        zero_kernel(0, 0, 1.0));
    InitialState linear;
    linear.h = 0.125;
    linear.phi = Vector::Zero(1);
    for (int k = 0; k <= 8; ++k) {
        linear.chi.push_back(Vector::Constant(1, -1.0 + 0.125 * k));
        linear.psi.push_back(Vector(0));
    }
    CHECK(std::abs(initial_offset(half, linear)(0) - 0.375) < 1e-14);
}

TEST_CASE("consistency residual") {
    const DdaeSystem sys = fixtures::ade_eps(0.25);
    // psi(0) = chi(0) + psi(-0.25): 2 = 1 + 1.
    InitialState ok = InitialState::constant(Vector::Ones(1), Vector::Ones(1), Vector::Ones(1), 1.0, 0.25);
    ok.psi.back() = Vector::Constant(1, 2.0);
    CHECK(consistency_residual(sys, ok) < 1e-15);
    ok.psi.back() = Vector::Constant(1, 5.0);
    CHECK(std::abs(consistency_residual(sys, ok) - 3.0) < 1e-14);
}
