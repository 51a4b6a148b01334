#include <ddae/errors.hpp>
#include <ddae/measures.hpp>

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ddae {

namespace {

void check_support(double a, double b, double memory) {
    if (!(a >= 0.0) || !(b > a) || b > memory) {
        throw SupportOutOfRange("density support [" + std::to_string(a) + ", " +
                                std::to_string(b) + "] is not inside [0, " +
                                std::to_string(memory) + "]");
    }
}

bool same_matrix(const Matrix& x, const Matrix& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
}

}  // namespace

Index DensityPiece::rows() const {
    return std::visit(
        [](const auto& d) -> Index {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PolyDensity>) {
                return d.coefficients.front().rows();
            } else {
                return d.left.rows();
            }
        },
        shape);
}

Index DensityPiece::cols() const {
    return std::visit(
        [](const auto& d) -> Index {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PolyDensity>) {
                return d.coefficients.front().cols();
            } else {
                return d.right.cols();
            }
        },
        shape);
}

Matrix DensityPiece::value(double theta) const {
    return std::visit(
        [theta](const auto& d) -> Matrix {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PolyDensity>) {
                // Horner
                Matrix acc = d.coefficients.back();
                for (auto it = d.coefficients.rbegin() + 1; it != d.coefficients.rend(); ++it) {
                    acc = acc * theta + *it;
                }
                return acc;
            } else {
                return d.left * expm(d.generator * theta) * d.right;
            }
        },
        shape);
}

bool DensityPiece::is_zero() const {
    return std::visit(
        [](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PolyDensity>) {
                return std::all_of(d.coefficients.begin(), d.coefficients.end(),
                                   [](const Matrix& c) { return c.isZero(0.0); });
            } else {
                return d.left.isZero(0.0) || d.right.isZero(0.0);
            }
        },
        shape);
}

bool operator==(const DensityPiece& p, const DensityPiece& q) {
    if (p.a != q.a || p.b != q.b || p.shape.index() != q.shape.index()) {
        return false;
    }
    if (const auto* pp = std::get_if<PolyDensity>(&p.shape)) {
        const auto& qp = std::get<PolyDensity>(q.shape);
        return std::equal(pp->coefficients.begin(), pp->coefficients.end(),
                          qp.coefficients.begin(), qp.coefficients.end(), same_matrix);
    }
    const auto& pe = std::get<ExpDensity>(p.shape);
    const auto& qe = std::get<ExpDensity>(q.shape);
    return same_matrix(pe.left, qe.left) && same_matrix(pe.generator, qe.generator) &&
           same_matrix(pe.right, qe.right);
}

DelayKernel::DelayKernel(Index rows, Index cols, double memory)
    : rows_(rows), cols_(cols), memory_(memory) {
    if (rows < 0 || cols < 0 || !(memory >= 0.0) || !std::isfinite(memory)) {
        throw DimensionMismatch("kernel needs non-negative dimensions and memory");
    }
}

double DelayKernel::merge_tolerance() const { return 1e-12 * std::max(memory_, 1.0); }

void DelayKernel::add_atom(double location, const Matrix& weight) {
    if (weight.rows() != rows_ || weight.cols() != cols_) {
        throw DimensionMismatch("atom weight is " + std::to_string(weight.rows()) + "x" +
                                std::to_string(weight.cols()) + ", kernel is " +
                                std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    const double tol = merge_tolerance();
    if (!(location >= -tol) || location > memory_ + tol) {
        throw SupportOutOfRange("atom at " + std::to_string(location) + " is not inside [0, " +
                                std::to_string(memory_) + "]");
    }
    location = std::clamp(location, 0.0, memory_);
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), location - tol,
                               [](const Atom& at, double x) { return at.location < x; });
    if (it != atoms_.end() && std::abs(it->location - location) <= tol) {
        it->weight += weight;
        if (it->weight.isZero(0.0)) {
            atoms_.erase(it);
        }
        return;
    }
    if (weight.isZero(0.0)) {
        return;
    }
    atoms_.insert(it, Atom{location, weight});
}

void DelayKernel::add_piece(DensityPiece piece) {
    check_support(piece.a, piece.b, memory_);
    if (auto* poly = std::get_if<PolyDensity>(&piece.shape)) {
        if (poly->coefficients.empty()) {
            return;
        }
        if (static_cast<int>(poly->coefficients.size()) > kMaxPolyDegree + 1) {
            throw DimensionMismatch("polynomial density degree exceeds " +
                                    std::to_string(kMaxPolyDegree));
        }
        for (const auto& c : poly->coefficients) {
            if (c.rows() != rows_ || c.cols() != cols_) {
                throw DimensionMismatch("polynomial coefficient has wrong shape");
            }
        }
    } else {
        const auto& e = std::get<ExpDensity>(piece.shape);
        if (e.left.rows() != rows_ || e.right.cols() != cols_ ||
            e.generator.rows() != e.generator.cols() || e.left.cols() != e.generator.rows() ||
            e.generator.cols() != e.right.rows()) {
            throw DimensionMismatch("exponential density factors have incompatible shapes");
        }
    }
    if (piece.is_zero()) {
        return;
    }
    pieces_.push_back(std::move(piece));
}

DelayKernel DelayKernel::entry(Index i, Index j) const {
    DelayKernel out(1, 1, memory_);
    for (const auto& at : atoms_) {
        if (at.weight(i, j) != Complex(0.0)) {
            out.atoms_.push_back(Atom{at.location, at.weight.block(i, j, 1, 1)});
        }
    }
    for (const auto& piece : pieces_) {
        DensityPiece scalar{piece.a, piece.b, PolyDensity{}};
        if (const auto* poly = std::get_if<PolyDensity>(&piece.shape)) {
            PolyDensity p;
            for (const auto& c : poly->coefficients) {
                p.coefficients.push_back(c.block(i, j, 1, 1));
            }
            scalar.shape = std::move(p);
        } else {
            const auto& e = std::get<ExpDensity>(piece.shape);
            scalar.shape = ExpDensity{e.left.row(i), e.generator, e.right.col(j)};
        }
        if (!scalar.is_zero()) {
            out.pieces_.push_back(std::move(scalar));
        }
    }
    return out;
}

bool operator==(const DelayKernel& k1, const DelayKernel& k2) {
    if (k1.rows_ != k2.rows_ || k1.cols_ != k2.cols_ || k1.memory_ != k2.memory_ ||
        k1.atoms_.size() != k2.atoms_.size() || k1.pieces_ != k2.pieces_) {
        return false;
    }
    for (std::size_t i = 0; i < k1.atoms_.size(); ++i) {
        if (k1.atoms_[i].location != k2.atoms_[i].location ||
            !same_matrix(k1.atoms_[i].weight, k2.atoms_[i].weight)) {
            return false;
        }
    }
    return true;
}

DelayKernel zero_kernel(Index rows, Index cols, double memory) {
    return DelayKernel(rows, cols, memory);
}

DelayKernel dirac(double tau, const Matrix& weight, double memory) {
    if (memory < 0.0) {
        memory = std::max(tau, 0.0);
    }
    if (!(tau >= 0.0) || tau > memory) {
        throw SupportOutOfRange("dirac location " + std::to_string(tau) + " is not inside [0, " +
                                std::to_string(memory) + "]");
    }
    DelayKernel k(weight.rows(), weight.cols(), memory);
    k.add_atom(tau, weight);
    return k;
}

DelayKernel poly_density(double a, double b, std::vector<Matrix> coefficients, double memory) {
    if (coefficients.empty()) {
        throw DimensionMismatch("polynomial density needs at least one coefficient");
    }
    DelayKernel k(coefficients.front().rows(), coefficients.front().cols(), memory);
    k.add_piece(DensityPiece{a, b, PolyDensity{std::move(coefficients)}});
    return k;
}

DelayKernel exp_density(double a, double b, const Matrix& left, const Matrix& generator,
                        const Matrix& right, double memory) {
    DelayKernel k(left.rows(), right.cols(), memory);
    k.add_piece(DensityPiece{a, b, ExpDensity{left, generator, right}});
    return k;
}

Matrix atom_at_zero(const DelayKernel& k) {
    if (!k.atoms().empty() && k.atoms().front().location == 0.0) {
        return k.atoms().front().weight;
    }
    return Matrix::Zero(k.rows(), k.cols());
}

DelayKernel add(const DelayKernel& k1, const DelayKernel& k2) {
    if (k1.rows() != k2.rows() || k1.cols() != k2.cols()) {
        throw DimensionMismatch("add: kernel shapes differ");
    }
    DelayKernel out(k1.rows(), k1.cols(), std::max(k1.memory(), k2.memory()));
    for (const auto* k : {&k1, &k2}) {
        for (const auto& at : k->atoms()) {
            out.add_atom(at.location, at.weight);
        }
        for (const auto& piece : k->pieces()) {
            out.add_piece(piece);
        }
    }
    return out;
}

DelayKernel scale_left(const Matrix& m, const DelayKernel& k) {
    if (m.rows() != m.cols() || m.cols() != k.rows()) {
        throw DimensionMismatch("scale_left: matrix must be square of the kernel's row count");
    }
    DelayKernel out(k.rows(), k.cols(), k.memory());
    for (const auto& at : k.atoms()) {
        out.add_atom(at.location, m * at.weight);
    }
    for (const auto& piece : k.pieces()) {
        DensityPiece scaled = piece;
        if (auto* poly = std::get_if<PolyDensity>(&scaled.shape)) {
            for (auto& c : poly->coefficients) {
                c = m * c;
            }
        } else {
            auto& e = std::get<ExpDensity>(scaled.shape);
            e.left = m * e.left;
        }
        out.add_piece(std::move(scaled));
    }
    return out;
}

DelayKernel strip_zero_atom(const DelayKernel& k) {
    DelayKernel out(k.rows(), k.cols(), k.memory());
    for (const auto& at : k.atoms()) {
        if (at.location != 0.0) {
            out.add_atom(at.location, at.weight);
        }
    }
    for (const auto& piece : k.pieces()) {
        out.add_piece(piece);
    }
    return out;
}

DelayKernel convolve(const DelayKernel& k1, const DelayKernel& k2) {
    if (!k1.is_atomic() || !k2.is_atomic()) {
        throw NonAtomicConvolution();
    }
    if (k1.cols() != k2.rows()) {
        throw DimensionMismatch("convolve: inner dimensions differ");
    }
    DelayKernel out(k1.rows(), k2.cols(), k1.memory() + k2.memory());
    for (const auto& a1 : k1.atoms()) {
        for (const auto& a2 : k2.atoms()) {
            out.add_atom(a1.location + a2.location, a1.weight * a2.weight);
        }
    }
    return out;
}

double total_variation(const DelayKernel& k) {
    double tv = 0.0;
    for (const auto& at : k.atoms()) {
        tv += at.weight.jacobiSvd().singularValues()(0);
    }
    for (const auto& piece : k.pieces()) {
        auto norm = [&piece](double theta) {
            const Matrix v = piece.value(theta);
            return v.size() == 0 ? 0.0 : v.jacobiSvd().singularValues()(0);
        };
        double error = 0.0;
        const double integral = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
            norm, piece.a, piece.b, 15, 1e-8, &error);
        // Round up by the error estimate so the result stays an upper bound.
        tv += integral + error;
    }
    return tv;
}

Matrix QuadratureWeights::sum() const {
    Matrix acc = weights.empty() ? Matrix() : Matrix::Zero(weights[0].rows(), weights[0].cols());
    for (const auto& w : weights) {
        acc += w;
    }
    return acc;
}

}  // namespace ddae
