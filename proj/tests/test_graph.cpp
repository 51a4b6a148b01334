#include <doctest.h>

#include <ddae/graph.hpp>

#include "fixtures.hpp"

using namespace ddae;
using fixtures::scalar;

namespace {

BoolMatrix power(const BoolMatrix& adj, Index p) {
    BoolMatrix out = BoolMatrix::Identity(adj.rows(), adj.cols());
    for (Index i = 0; i < p; ++i) {
        out = boolean_product(out, adj);
    }
    return out;
}

BlockDiagram figure_sg_two_node(double t) {
    BlockDiagram d(2);
    d.set(0, 1, EdgeLabel::integrator());
    d.set(1, 0, EdgeLabel::of(dirac(0.0, scalar(2.0), t)));
    d.set(1, 1, EdgeLabel::of(dirac(t, scalar(1.0))));
    return d;
}

Matrix zero_mass_matrix(const BlockDiagram& d) {
    Matrix k(d.size, d.size);
    for (Index i = 0; i < d.size; ++i) {
        for (Index j = 0; j < d.size; ++j) {
            k(i, j) = d.label(i, j).mass_at_zero();
        }
    }
    return k;
}

}  // namespace

TEST_CASE("two-node diagram of the delayed feedback example") {
    const BlockDiagram d = figure_sg_two_node(0.5);
    const BoolMatrix adj = adjacency(d);
    CHECK(adj.count() == 1);
    CHECK(adj(1, 0));
    const CausalityReport report = causality_check(d);
    CHECK(report.acyclic);
    REQUIRE(report.nilpotency_index.has_value());
    CHECK(*report.nilpotency_index <= 2);
    CHECK_FALSE(report.loop.has_value());

    const std::string dot = to_dot(d);
    CHECK(dot == to_dot(figure_sg_two_node(0.5)));
    CHECK(dot.find("v1 -> v2 [label=\"2*delta(0)\", style=solid]") != std::string::npos);
    CHECK(dot.find("v2 -> v1 [label=\"e\", style=dashed]") != std::string::npos);
    CHECK(dot.find("v2 -> v2 [label=\"delta(0.5)\", style=dashed]") != std::string::npos);
}

TEST_CASE("canonical diagram of the delayed feedback system") {
    const DdaeSystem sys = fixtures::figure_sg(0.5);
    const BlockDiagram d = canonical_diagram(sys);
    REQUIRE(d.size == 3);
    CHECK(d.tags[0].name() == "x1");
    CHECK(d.tags[1].name() == "w1");
    CHECK(d.tags[2].name() == "y1");
    // K*_21 = 2 delta_0 sits on the x -> y edge.
    CHECK(d.label(2, 0).kernel == dirac(0.0, scalar(2.0), 0.5));
    CHECK(d.label(2, 2).kernel == dirac(0.5, scalar(1.0)));
    CHECK(d.label(0, 1).kind == EdgeLabel::Kind::Integrator);
    CHECK(causality_check(d).acyclic);
}

TEST_CASE("pure ODE has two vertices and two edges") {
    const BlockDiagram d = canonical_diagram(fixtures::retarded(-1.0, 0.0, 1.0));
    REQUIRE(d.size == 2);
    int edges = 0;
    for (Index i = 0; i < 2; ++i) {
        for (Index j = 0; j < 2; ++j) {
            edges += d.label(i, j).is_zero() ? 0 : 1;
        }
    }
    CHECK(edges == 2);
    CHECK(d.label(0, 1).kind == EdgeLabel::Kind::Integrator);
    CHECK(d.label(1, 0).mass_at_zero() == Complex(-1.0));
}

TEST_CASE("algebraic self loop") {
    const BlockDiagram d = canonical_diagram(fixtures::ade());
    const BoolMatrix adj = adjacency(d);
    CHECK(adj(2, 2));
    const CausalityReport report = causality_check(d);
    CHECK_FALSE(report.acyclic);
    REQUIRE(report.loop.has_value());
    CHECK(*report.loop == std::vector<Index>{2, 2});
    CHECK_FALSE(report.nilpotency_index.has_value());
}

TEST_CASE("FSA diagram") {
    const DdaeSystem sys = build_fsa(fixtures::double_integrator(), RealMatrix{{2.0, 3.0}});
    const BlockDiagram d = canonical_diagram(sys);
    CHECK(causality_check(d).acyclic);
    // y2 -> w2 carries -3 delta_0; y -> y carries densities only.
    CHECK(d.label(3, 5).mass_at_zero() == Complex(-3.0));
    CHECK(d.label(3, 0).mass_at_zero() == Complex(0.0));
    CHECK(d.label(2, 1).mass_at_zero() == Complex(1.0));
    CHECK_FALSE(d.label(4, 5).kernel.pieces().empty());
    CHECK(d.label(4, 5).mass_at_zero() == Complex(0.0));
}

TEST_CASE("all-density diagram has empty adjacency") {
    BlockDiagram d(3);
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 3; ++j) {
            d.set(i, j, EdgeLabel::of(poly_density(0.0, 1.0, {scalar(1.0)}, 1.0)));
        }
    }
    CHECK(adjacency(d).count() == 0);
    CHECK(causality_check(d).nilpotency_index == Index(1));
}

TEST_CASE("one-node empty diagram") {
    CHECK(to_dot(BlockDiagram(1)) == "digraph ddae {\n  v1;\n}\n");
}

TEST_CASE("acyclic iff boolean nilpotent on random diagrams") {
    oracle::Random rng(31);
    int cyclic = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const Index size = rng.integer(1, 12);
        const double fill = rng.uniform(0.02, 0.3);
        BlockDiagram d(size);
        for (Index i = 0; i < size; ++i) {
            for (Index j = 0; j < size; ++j) {
                const double u = rng.uniform(0.0, 1.0);
                if (u < fill) {
                    d.set(i, j, EdgeLabel::of(dirac(0.0, scalar(rng.uniform(0.5, 2.0)), 1.0)));
                } else if (u < 2 * fill) {
                    d.set(i, j, EdgeLabel::of(dirac(0.5, scalar(1.0), 1.0)));
                } else if (u < 2.5 * fill) {
                    d.set(i, j, EdgeLabel::integrator());
                }
            }
        }
        const BoolMatrix adj = adjacency(d);
        const CausalityReport report = causality_check(d);
        const bool nilpotent = power(adj, size).count() == 0;
        CHECK(report.acyclic == nilpotent);
        CHECK(report.loop.has_value() != report.nilpotency_index.has_value());
        if (report.loop) {
            ++cyclic;
            const auto& loop = *report.loop;
            REQUIRE(loop.size() >= 2);
            CHECK(loop.front() == loop.back());
            for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
                CHECK(adj(loop[k + 1], loop[k]));
            }
        } else {
            const Index p = *report.nilpotency_index;
            CHECK(power(adj, p).count() == 0);
            if (p > 0) {
                CHECK(power(adj, p - 1).count() > 0);
            }
        }
    }
    CHECK(cyclic > 50);
    CHECK(cyclic < 350);
}

TEST_CASE("no loop implies nilpotent D{0} and an invertible J") {
    oracle::Random rng(32);
    for (int trial = 0; trial < 300; ++trial) {
        const Index n = rng.integer(1, 4);
        const Index m = rng.integer(1, 4);
        DdaeSystem sys = fixtures::random_atomic_system(rng, n, m, 1.0, 0.25, 1.0);
        sys.d = strip_zero_atom(sys.d);
        sys.d.add_atom(0.0, rng.sparse_matrix(m, m, 0.3));
        if (!causality_check(canonical_diagram(sys)).acyclic) {
            continue;
        }
        Matrix power = Matrix::Identity(m, m);
        const Matrix d0 = atom_at_zero(sys.d);
        for (Index k = 0; k < m; ++k) {
            power = power * d0;
        }
        CHECK(power.cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(classify(sys).kind != WellPosedness::Kind::SingularJ);
    }
}

TEST_CASE("block powers of the zero-mass kernel matrix") {
    oracle::Random rng(33);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = rng.integer(1, 3);
        const Index m = rng.integer(1, 3);
        const DdaeSystem sys = make_system(n, m, 1.0, dirac(0.0, rng.real_matrix(n, n), 1.0),
                                           dirac(0.0, rng.real_matrix(n, m), 1.0),
                                           dirac(0.0, rng.real_matrix(m, n), 1.0),
                                           dirac(0.0, rng.real_matrix(m, m), 1.0));
        const Matrix k0 = zero_mass_matrix(canonical_diagram(sys));
        const Matrix d0 = atom_at_zero(sys.d);
        Matrix kp = k0;
        Matrix dp = d0;
        for (int p = 2; p <= 5; ++p) {
            kp = kp * k0;
            dp = dp * d0;
            const Matrix block = kp.bottomRightCorner(m, m);
            CHECK((block - dp).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, dp.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("nilpotent D{0} with a loop is not a counterexample") {
    DelayKernel d(2, 2, 1.0);
    d.add_atom(0.0, Matrix{{1.0, 1.0}, {-1.0, -1.0}});
    const DdaeSystem sys = make_system(1, 2, 1.0, zero_kernel(1, 1, 1.0), zero_kernel(1, 2, 1.0),
                                       zero_kernel(2, 1, 1.0), d);
    const Matrix d0 = atom_at_zero(sys.d);
    CHECK((d0 * d0).isZero(0.0));
    const CausalityReport report = causality_check(canonical_diagram(sys));
    CHECK_FALSE(report.acyclic);
    CHECK(classify(sys).kind == WellPosedness::Kind::InvertibleJ);
}

TEST_CASE("canonical memory") {
    const DdaeSystem sys = fixtures::figure_sg(1.0);
    const InitialState init = InitialState::constant(Vector::Constant(1, 3.0), Vector::Ones(1),
                                                     Vector::Constant(1, 2.0), 1.0, 0.25);
    const auto memory = canonical_memory(sys, init);
    REQUIRE(memory.size() == 3);
    CHECK(memory[0] == std::vector<Complex>(5, 1.0));
    CHECK(memory[2] == std::vector<Complex>(5, 2.0));
    // f = phi - int_{-1}^{0} psi = 3 - 2 = 1, spread over r = 1.
    CHECK(std::abs(memory[1][0] - 1.0) < 1e-14);
}
