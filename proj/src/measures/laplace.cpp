#include <ddae/measures.hpp>

#include <cmath>

namespace ddae {

namespace {

// Moments I_k = int_a^b theta^k e^{-s theta} d theta for k = 0..degree.
std::vector<Complex> exponential_moments(double a, double b, Complex s, int degree) {
    std::vector<Complex> moments(degree + 1);
    const double reach = std::abs(s) * b;
    if (reach > degree + 1) {
        // Forward recurrence I_k = (a^k e^{-sa} - b^k e^{-sb}) / s + (k / s) I_{k-1};
        // error amplification per step is k / (|s| b) < 1 in this regime.
        const Complex ea = std::exp(-s * a);
        const Complex eb = std::exp(-s * b);
        double ak = 1.0;
        double bk = 1.0;
        moments[0] = (ea - eb) / s;
        for (int k = 1; k <= degree; ++k) {
            ak *= a;
            bk *= b;
            moments[k] = (ak * ea - bk * eb) / s + (static_cast<double>(k) / s) * moments[k - 1];
        }
        return moments;
    }
    // Taylor series in s: I_k = sum_j (-s)^j / j! (b^{k+j+1} - a^{k+j+1}) / (k+j+1).
    for (int k = 0; k <= degree; ++k) {
        Complex sum = 0.0;
        Complex coeff = 1.0;
        double apow = std::pow(a, k + 1);
        double bpow = std::pow(b, k + 1);
        for (int j = 0; j < 400; ++j) {
            const Complex term = coeff * (bpow - apow) / static_cast<double>(k + j + 1);
            sum += term;
            if (j > reach && std::abs(term) <= 1e-18 * std::abs(sum)) {
                break;
            }
            coeff *= -s / static_cast<double>(j + 1);
            apow *= a;
            bpow *= b;
        }
        moments[k] = sum;
    }
    return moments;
}

}  // namespace

Matrix laplace(const DelayKernel& k, Complex s) {
    Matrix out = Matrix::Zero(k.rows(), k.cols());
    for (const auto& at : k.atoms()) {
        out += std::exp(-s * at.location) * at.weight;
    }
    for (const auto& piece : k.pieces()) {
        if (const auto* poly = std::get_if<PolyDensity>(&piece.shape)) {
            const int degree = static_cast<int>(poly->coefficients.size()) - 1;
            const auto moments = exponential_moments(piece.a, piece.b, s, degree);
            for (int j = 0; j <= degree; ++j) {
                out += moments[j] * poly->coefficients[j];
            }
        } else {
            const auto& e = std::get<ExpDensity>(piece.shape);
            const Index dim = e.generator.rows();
            const Matrix shifted = e.generator - s * Matrix::Identity(dim, dim);
            out += e.left * exp_integral(piece.a, piece.b, shifted) * e.right;
        }
    }
    return out;
}

}  // namespace ddae
