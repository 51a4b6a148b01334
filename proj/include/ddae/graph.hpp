#pragma once

#include <ddae/model.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ddae {

/// Edge label of a block diagram: a scalar kernel, or the integrator whose
/// kernel is the Heaviside step (strictly causal, never in the adjacency).
struct EdgeLabel {
    enum class Kind { Zero, Integrator, Kernel };

    Kind kind = Kind::Zero;
    DelayKernel kernel;  // 1x1, only for Kind::Kernel

    static EdgeLabel integrator() { return {Kind::Integrator, {}}; }
    static EdgeLabel of(DelayKernel k);

    bool is_zero() const { return kind == Kind::Zero; }
    /// Mass at {0}; zero for the integrator.
    Complex mass_at_zero() const;
};

struct VertexTag {
    enum class Role { X, W, Y, Free };

    Role role = Role::Free;
    Index index = 0;  // 1-based within the role

    std::string name() const;
};

struct BlockDiagram {
    Index size = 0;
    /// labels[i][j] is the kernel of edge j -> i.
    std::vector<std::vector<EdgeLabel>> labels;
    std::vector<VertexTag> tags;

    /// Empty diagram with free vertices v1..vN.
    explicit BlockDiagram(Index size = 0);

    const EdgeLabel& label(Index i, Index j) const { return labels[i][j]; }
    void set(Index i, Index j, EdgeLabel label) { labels[i][j] = std::move(label); }
};

/// Vertices ordered (x_1..x_n, w_1..w_n, y_1..y_m) with kernel matrix
/// [[0, e I, 0], [A, 0, B], [C, 0, D]].
BlockDiagram canonical_diagram(const DdaeSystem& sys);

/// Canonical per-vertex initial functions (chi, upsilon, psi) sampled on the
/// history grid, with upsilon the constant f / r. Requires r > 0.
std::vector<std::vector<Complex>> canonical_memory(const DdaeSystem& sys,
                                                   const InitialState& init);

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// (i, j) is true iff edge j -> i has nonzero mass at {0}.
BoolMatrix adjacency(const BlockDiagram& diagram);

/// Boolean matrix product (or-of-ands).
BoolMatrix boolean_product(const BoolMatrix& x, const BoolMatrix& y);

struct CausalityReport {
    bool acyclic = true;
    /// Cycle i_0, ..., i_j with i_0 == i_j, each edge not strictly causal.
    std::optional<std::vector<Index>> loop;
    /// Least p with adjacency^p = 0.
    std::optional<Index> nilpotency_index;
};

CausalityReport causality_check(const BlockDiagram& diagram);

std::string to_dot(const BlockDiagram& diagram);

}  // namespace ddae
