#include <ddae/errors.hpp>
#include <ddae/spectrum.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ddae {

Matrix char_matrix(const DdaeSystem& sys, Complex s) {
    const Index n = sys.n;
    const Index m = sys.m;
    Matrix delta(n + m, n + m);
    delta.topLeftCorner(n, n) = s * Matrix::Identity(n, n) - laplace(sys.a, s);
    delta.topRightCorner(n, m) = -laplace(sys.b, s);
    delta.bottomLeftCorner(m, n) = -laplace(sys.c, s);
    delta.bottomRightCorner(m, m) = Matrix::Identity(m, m) - laplace(sys.d, s);
    return delta;
}

namespace {

Complex determinant(const Matrix& x) {
    if (x.size() == 0) {
        return 1.0;
    }
    return x.partialPivLu().determinant();
}

Matrix delta0_matrix(const DdaeSystem& ex, Complex s) {
    return Matrix::Identity(ex.m, ex.m) - laplace(ex.d, s);
}

}  // namespace

Complex char_det(const DdaeSystem& sys, Complex s) { return determinant(char_matrix(sys, s)); }

Complex char_det_explicit(const DdaeSystem& sys, Complex s) {
    return char_det(explicitize(sys), s);
}

Complex delta0_det(const DdaeSystem& sys, Complex s) {
    return determinant(delta0_matrix(explicitize(sys), s));
}

DelayKernel conv_det(const DelayKernel& f) {
    if (!f.is_atomic()) {
        throw NonAtomicConvolution();
    }
    if (f.rows() != f.cols()) {
        throw DimensionMismatch("conv_det needs a square kernel");
    }
    const Index m = f.rows();
    if (m > 8) {
        throw DimensionTooLarge("conv_det is limited to m <= 8, got " + std::to_string(m));
    }
    const double r = f.memory();
    const Matrix one = Matrix::Identity(1, 1);
    // entries[i][j] = delta_ij delta_0 - F_ij
    std::vector<std::vector<DelayKernel>> entries(m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            DelayKernel e = scale_left(-one, f.entry(i, j));
            if (i == j) {
                e = add(e, dirac(0.0, one, r));
            }
            entries[i].push_back(std::move(e));
        }
    }
    DelayKernel mu(1, 1, static_cast<double>(m) * r);
    std::vector<Index> perm(m);
    std::iota(perm.begin(), perm.end(), Index{0});
    do {
        int inversions = 0;
        for (Index i = 0; i < m; ++i) {
            for (Index j = i + 1; j < m; ++j) {
                inversions += perm[i] > perm[j] ? 1 : 0;
            }
        }
        DelayKernel product = dirac(0.0, one, 0.0);
        bool vanishes = false;
        for (Index i = 0; i < m && !vanishes; ++i) {
            const DelayKernel& factor = entries[i][perm[i]];
            vanishes = factor.is_zero();
            product = convolve(product, factor);
        }
        if (vanishes) {
            continue;
        }
        const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
        for (const auto& at : product.atoms()) {
            mu.add_atom(at.location, sign * at.weight);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return mu;
}

double AnalyticFunction::scale(Complex s) const {
    return std::pow(1.0 + std::abs(s), degree_);
}

AnalyticFunction characteristic_function(const DdaeSystem& sys) {
    sys.validate();
    const double type = static_cast<double>(sys.n + sys.m) * sys.r;
    return AnalyticFunction([sys](Complex s) { return char_det(sys, s); },
                            static_cast<int>(sys.n), type);
}

AnalyticFunction delta0_function(const DdaeSystem& sys) {
    DdaeSystem ex = explicitize(sys);
    const double type = static_cast<double>(sys.m) * sys.r;
    return AnalyticFunction(
        [ex = std::move(ex)](Complex s) { return determinant(delta0_matrix(ex, s)); }, 0, type);
}

double Rect::diameter() const { return std::hypot(width(), height()); }

bool Rect::contains(Complex s) const {
    return s.real() >= re_min && s.real() <= re_max && s.imag() >= im_min && s.imag() <= im_max;
}

}  // namespace ddae
