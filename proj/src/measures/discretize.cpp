#include <ddae/errors.hpp>
#include <ddae/measures.hpp>

#include <array>
#include <cmath>

namespace ddae {

namespace {

// 5-point Gauss-Legendre on [-1, 1]; exact for the product of a degree-8
// density with the linear interpolation hat.
constexpr std::array<double, 5> kNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                          0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kWeights = {0.2369268850561891, 0.4786286704993665,
                                            0.5688888888888889, 0.4786286704993665,
                                            0.2369268850561891};

}  // namespace

QuadratureWeights discretize(const DelayKernel& k, double h, double snap_tolerance) {
    if (!(h > 0.0)) {
        throw Error("discretize: step must be positive");
    }
    const double r = k.memory();
    if (snap_tolerance < 0.0) {
        snap_tolerance = 1e-9 * std::max(r, h);
    }
    const auto last = static_cast<Index>(std::ceil(r / h - snap_tolerance / h));
    QuadratureWeights out;
    out.step = h;
    out.weights.assign(static_cast<std::size_t>(std::max<Index>(last, 0) + 1),
                       Matrix::Zero(k.rows(), k.cols()));
    auto grow_to = [&](Index q) {
        while (out.size() <= q) {
            out.weights.push_back(Matrix::Zero(k.rows(), k.cols()));
        }
    };

    for (const auto& at : k.atoms()) {
        const double ratio = at.location / h;
        const auto q = static_cast<Index>(std::llround(ratio));
        if (std::abs(at.location - static_cast<double>(q) * h) > snap_tolerance) {
            throw AtomOffGrid(at.location, h);
        }
        grow_to(q);
        out.weights[q] += at.weight;
    }

    // Linear interpolation of z between grid nodes (product trapezoid).
    Matrix density_at_zero = Matrix::Zero(k.rows(), k.cols());
    for (const auto& piece : k.pieces()) {
        const auto first_cell = static_cast<Index>(std::floor(piece.a / h));
        const auto last_cell = static_cast<Index>(std::ceil(piece.b / h));
        grow_to(last_cell);
        for (Index q = first_cell; q < last_cell; ++q) {
            const double left = static_cast<double>(q) * h;
            const double lo = std::max(piece.a, left);
            const double hi = std::min(piece.b, left + h);
            if (!(hi > lo)) {
                continue;
            }
            const double half = 0.5 * (hi - lo);
            const double mid = 0.5 * (hi + lo);
            for (std::size_t g = 0; g < kNodes.size(); ++g) {
                const double theta = mid + half * kNodes[g];
                const double lambda = (theta - left) / h;
                const Matrix m = piece.value(theta) * (half * kWeights[g]);
                if (q == 0) {
                    density_at_zero += (1.0 - lambda) * m;
                } else {
                    out.weights[q] += (1.0 - lambda) * m;
                }
                out.weights[q + 1] += lambda * m;
            }
        }
    }
    if (!k.pieces().empty()) {
        grow_to(1);
        out.weights[1] += density_at_zero;
    }
    return out;
}

}  // namespace ddae
