#include <ddae/errors.hpp>
#include <ddae/model.hpp>

#include <cmath>

namespace ddae {

namespace {

DelayKernel widen(const DelayKernel& k, double r) {
    if (k.memory() > r) {
        throw SupportOutOfRange("kernel memory exceeds the system memory");
    }
    DelayKernel out(k.rows(), k.cols(), r);
    for (const auto& at : k.atoms()) {
        out.add_atom(at.location, at.weight);
    }
    for (const auto& piece : k.pieces()) {
        out.add_piece(piece);
    }
    return out;
}

void check_block(const DelayKernel& k, Index rows, Index cols, const char* name, double r) {
    if (k.rows() != rows || k.cols() != cols) {
        throw DimensionMismatch(std::string("kernel ") + name + " is " + std::to_string(k.rows()) +
                                "x" + std::to_string(k.cols()) + ", expected " +
                                std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (k.memory() > r) {
        throw SupportOutOfRange(std::string("kernel ") + name + " has memory beyond r");
    }
}

// Applies sum_q w_q z(-q h) for history samples z on [-r, 0] (z.back() is t = 0).
Vector apply_to_history(const QuadratureWeights& w, const std::vector<Vector>& z, Index rows) {
    Vector acc = Vector::Zero(rows);
    const auto steps = static_cast<Index>(z.size()) - 1;
    for (Index q = 0; q < w.size() && q <= steps; ++q) {
        acc += w.weights[q] * z[steps - q];
    }
    return acc;
}

// sum_q w_q int_{-r}^{-q h} z(u) du, cumulative trapezoid from -r.
Vector apply_integrated(const QuadratureWeights& w, const std::vector<Vector>& z, double h,
                        Index rows) {
    const auto steps = static_cast<Index>(z.size()) - 1;
    // tail[j] = int_{-r}^{-j h} z
    std::vector<Vector> tail(steps + 1, Vector::Zero(z.empty() ? 0 : z[0].size()));
    for (Index j = steps - 1; j >= 0; --j) {
        tail[j] = tail[j + 1] + 0.5 * h * (z[steps - j] + z[steps - j - 1]);
    }
    Vector acc = Vector::Zero(rows);
    for (Index q = 0; q < w.size() && q <= steps; ++q) {
        acc += w.weights[q] * tail[q];
    }
    return acc;
}

}  // namespace

void DdaeSystem::validate() const {
    if (n < 0 || m < 0 || n + m == 0) {
        throw DimensionMismatch("system needs n + m >= 1");
    }
    if (!(r >= 0.0)) {
        throw SupportOutOfRange("memory r must be non-negative");
    }
    check_block(a, n, n, "A", r);
    check_block(b, n, m, "B", r);
    check_block(c, m, n, "C", r);
    check_block(d, m, m, "D", r);
}

DdaeSystem make_system(Index n, Index m, double r, DelayKernel a, DelayKernel b, DelayKernel c,
                       DelayKernel d) {
    DdaeSystem sys{n, m, r, widen(a, r), widen(b, r), widen(c, r), widen(d, r)};
    sys.validate();
    return sys;
}

InitialState InitialState::constant(const Vector& phi, const Vector& chi, const Vector& psi,
                                    double r, double h) {
    InitialState init;
    init.phi = phi;
    init.h = h;
    const Index steps = init.memory_steps(r);
    init.chi.assign(steps + 1, chi);
    init.psi.assign(steps + 1, psi);
    return init;
}

Index InitialState::memory_steps(double r) const {
    if (!(h > 0.0)) {
        throw OffGrid("initial state step must be positive");
    }
    const double ratio = r / h;
    const auto steps = static_cast<Index>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
        throw OffGrid("step " + std::to_string(h) + " does not divide memory " + std::to_string(r));
    }
    return steps;
}

void InitialState::validate(const DdaeSystem& sys) const {
    const Index steps = memory_steps(sys.r);
    if (phi.size() != sys.n) {
        throw DimensionMismatch("phi has the wrong dimension");
    }
    if (static_cast<Index>(chi.size()) != steps + 1 || static_cast<Index>(psi.size()) != steps + 1) {
        throw DimensionMismatch("history needs r/h + 1 = " + std::to_string(steps + 1) +
                                " samples");
    }
    for (const auto& v : chi) {
        if (v.size() != sys.n) {
            throw DimensionMismatch("chi sample has the wrong dimension");
        }
    }
    for (const auto& v : psi) {
        if (v.size() != sys.m) {
            throw DimensionMismatch("psi sample has the wrong dimension");
        }
    }
}

const char* to_string(WellPosedness::Kind kind) {
    switch (kind) {
        case WellPosedness::Kind::Explicit:
            return "Explicit";
        case WellPosedness::Kind::InvertibleJ:
            return "InvertibleJ";
        case WellPosedness::Kind::SingularJ:
            return "SingularJ";
    }
    return "?";
}

WellPosedness classify(const DdaeSystem& sys) {
    WellPosedness out;
    const Matrix d0 = atom_at_zero(sys.d);
    out.j = Matrix::Identity(sys.m, sys.m) - d0;
    if (sys.m == 0) {
        out.kind = WellPosedness::Kind::Explicit;
        out.j_inverse = Matrix(0, 0);
        out.smallest_singular_value = 1.0;
        return out;
    }
    const Eigen::VectorXd sv = out.j.jacobiSvd().singularValues();
    out.smallest_singular_value = sv(sv.size() - 1);
    if (d0.isZero(0.0)) {
        out.kind = WellPosedness::Kind::Explicit;
        out.j_inverse = Matrix::Identity(sys.m, sys.m);
        return out;
    }
    if (out.smallest_singular_value < 1e-10 * std::max(1.0, sv(0))) {
        out.kind = WellPosedness::Kind::SingularJ;
        return out;
    }
    out.kind = WellPosedness::Kind::InvertibleJ;
    out.j_inverse = out.j.partialPivLu().inverse();
    return out;
}

DdaeSystem explicitize(const DdaeSystem& sys) {
    const WellPosedness wp = classify(sys);
    switch (wp.kind) {
        case WellPosedness::Kind::Explicit:
            return sys;
        case WellPosedness::Kind::SingularJ:
            throw NotWellPosed(wp.smallest_singular_value);
        case WellPosedness::Kind::InvertibleJ:
            break;
    }
    DdaeSystem out = sys;
    out.c = scale_left(*wp.j_inverse, sys.c);
    out.d = scale_left(*wp.j_inverse, strip_zero_atom(sys.d));
    return out;
}

Vector initial_offset(const DdaeSystem& sys, const InitialState& init) {
    init.validate(sys);
    const auto wa = discretize(sys.a, init.h);
    const auto wb = discretize(sys.b, init.h);
    return init.phi - apply_integrated(wa, init.chi, init.h, sys.n) -
           apply_integrated(wb, init.psi, init.h, sys.n);
}

double consistency_residual(const DdaeSystem& sys, const InitialState& init) {
    init.validate(sys);
    if (sys.m == 0) {
        return 0.0;
    }
    const auto wc = discretize(sys.c, init.h);
    const auto wd = discretize(sys.d, init.h);
    const Vector residual = init.psi.back() - apply_to_history(wc, init.chi, sys.m) -
                            apply_to_history(wd, init.psi, sys.m);
    return residual.norm();
}

}  // namespace ddae
