#include <ddae/errors.hpp>
#include <ddae/graph.hpp>

#include <functional>
#include <sstream>

namespace ddae {

EdgeLabel EdgeLabel::of(DelayKernel k) {
    if (k.rows() != 1 || k.cols() != 1) {
        throw DimensionMismatch("edge labels are scalar kernels");
    }
    if (k.is_zero()) {
        return {};
    }
    return {Kind::Kernel, std::move(k)};
}

Complex EdgeLabel::mass_at_zero() const {
    if (kind != Kind::Kernel) {
        return 0.0;
    }
    return atom_at_zero(kernel)(0, 0);
}

std::string VertexTag::name() const {
    const char* prefix = "v";
    switch (role) {
        case Role::X:
            prefix = "x";
            break;
        case Role::W:
            prefix = "w";
            break;
        case Role::Y:
            prefix = "y";
            break;
        case Role::Free:
            break;
    }
    return prefix + std::to_string(index);
}

BlockDiagram::BlockDiagram(Index size)
    : size(size), labels(size, std::vector<EdgeLabel>(size)), tags(size) {
    for (Index i = 0; i < size; ++i) {
        tags[i] = VertexTag{VertexTag::Role::Free, i + 1};
    }
}

BlockDiagram canonical_diagram(const DdaeSystem& sys) {
    const Index n = sys.n;
    const Index m = sys.m;
    BlockDiagram diagram(2 * n + m);
    for (Index k = 0; k < n; ++k) {
        diagram.tags[k] = {VertexTag::Role::X, k + 1};
        diagram.tags[n + k] = {VertexTag::Role::W, k + 1};
    }
    for (Index k = 0; k < m; ++k) {
        diagram.tags[2 * n + k] = {VertexTag::Role::Y, k + 1};
    }
    const Index x0 = 0;
    const Index w0 = n;
    const Index y0 = 2 * n;
    for (Index k = 0; k < n; ++k) {
        diagram.set(x0 + k, w0 + k, EdgeLabel::integrator());
    }
    auto place = [&diagram](const DelayKernel& block, Index row0, Index col0) {
        for (Index i = 0; i < block.rows(); ++i) {
            for (Index j = 0; j < block.cols(); ++j) {
                diagram.set(row0 + i, col0 + j, EdgeLabel::of(block.entry(i, j)));
            }
        }
    };
    place(sys.a, w0, x0);
    place(sys.b, w0, y0);
    place(sys.c, y0, x0);
    place(sys.d, y0, y0);
    return diagram;
}

std::vector<std::vector<Complex>> canonical_memory(const DdaeSystem& sys,
                                                   const InitialState& init) {
    if (!(sys.r > 0.0)) {
        throw SupportOutOfRange("canonical initial functions need r > 0");
    }
    const Vector f = initial_offset(sys, init);
    const std::size_t samples = init.chi.size();
    std::vector<std::vector<Complex>> memory(2 * sys.n + sys.m);
    for (Index k = 0; k < sys.n; ++k) {
        auto& chi = memory[k];
        for (const auto& v : init.chi) {
            chi.push_back(v(k));
        }
        memory[sys.n + k].assign(samples, f(k) / sys.r);
    }
    for (Index k = 0; k < sys.m; ++k) {
        auto& psi = memory[2 * sys.n + k];
        for (const auto& v : init.psi) {
            psi.push_back(v(k));
        }
    }
    return memory;
}

BoolMatrix adjacency(const BlockDiagram& diagram) {
    BoolMatrix adj = BoolMatrix::Constant(diagram.size, diagram.size, false);
    for (Index i = 0; i < diagram.size; ++i) {
        for (Index j = 0; j < diagram.size; ++j) {
            adj(i, j) = diagram.label(i, j).mass_at_zero() != Complex(0.0);
        }
    }
    return adj;
}

BoolMatrix boolean_product(const BoolMatrix& x, const BoolMatrix& y) {
    BoolMatrix out = BoolMatrix::Constant(x.rows(), y.cols(), false);
    for (Index i = 0; i < x.rows(); ++i) {
        for (Index k = 0; k < x.cols(); ++k) {
            if (!x(i, k)) {
                continue;
            }
            for (Index j = 0; j < y.cols(); ++j) {
                out(i, j) = out(i, j) || y(k, j);
            }
        }
    }
    return out;
}

CausalityReport causality_check(const BlockDiagram& diagram) {
    const BoolMatrix adj = adjacency(diagram);
    const Index size = diagram.size;
    CausalityReport report;

    // Edge j -> i exists iff adj(i, j). For each start vertex in increasing
    // order, search successors in increasing order for a path back to it.
    for (Index start = 0; start < size && !report.loop; ++start) {
        std::vector<Index> path{start};
        std::vector<char> visited(size, 0);
        std::function<bool(Index)> dfs = [&](Index v) -> bool {
            for (Index next = 0; next < size; ++next) {
                if (!adj(next, v)) {
                    continue;
                }
                if (next == start) {
                    path.push_back(start);
                    return true;
                }
                if (visited[next]) {
                    continue;
                }
                visited[next] = 1;
                path.push_back(next);
                if (dfs(next)) {
                    return true;
                }
                path.pop_back();
            }
            return false;
        };
        visited[start] = 1;
        if (dfs(start)) {
            report.loop = path;
        }
    }

    if (report.loop) {
        report.acyclic = false;
        return report;
    }
    BoolMatrix power = adj;
    for (Index p = 1; p <= std::max<Index>(size, 1); ++p) {
        if (!power.any()) {
            report.nilpotency_index = p;
            break;
        }
        power = boolean_product(power, adj);
    }
    return report;
}

std::string to_dot(const BlockDiagram& diagram) {
    std::ostringstream out;
    out << "digraph ddae {\n";
    for (Index i = 0; i < diagram.size; ++i) {
        out << "  " << diagram.tags[i].name() << ";\n";
    }
    // Sorted by (source, target).
    for (Index j = 0; j < diagram.size; ++j) {
        for (Index i = 0; i < diagram.size; ++i) {
            const EdgeLabel& label = diagram.label(i, j);
            if (label.is_zero()) {
                continue;
            }
            std::string text = "e";
            if (label.kind == EdgeLabel::Kind::Kernel) {
                std::ostringstream desc;
                const auto& k = label.kernel;
                bool first = true;
                for (const auto& at : k.atoms()) {
                    desc << (first ? "" : " + ");
                    const Complex w = at.weight(0, 0);
                    if (w.imag() != 0.0) {
                        desc << "(" << w.real() << (w.imag() > 0 ? "+" : "") << w.imag() << "i)*";
                    } else if (w.real() != 1.0) {
                        desc << w.real() << "*";
                    }
                    desc << "delta(" << at.location << ")";
                    first = false;
                }
                for (const auto& piece : k.pieces()) {
                    desc << (first ? "" : " + ") << "density[" << piece.a << "," << piece.b << "]";
                    first = false;
                }
                text = desc.str();
            }
            const bool causal_now = label.mass_at_zero() != Complex(0.0);
            out << "  " << diagram.tags[j].name() << " -> " << diagram.tags[i].name()
                << " [label=\"" << text << "\", style=" << (causal_now ? "solid" : "dashed")
                << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace ddae
