#include <ddae/errors.hpp>
#include <ddae/fsa.hpp>
#include <ddae/spectrum.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ddae {

void FsaPlant::validate() const {
    if (e.rows() != e.cols() || e.rows() == 0) {
        throw DimensionMismatch("E must be square and non-empty");
    }
    if (f.rows() != e.rows() || f.cols() != 1) {
        throw DimensionMismatch("F must be n x 1");
    }
    if (!(t > 0.0)) {
        throw SupportOutOfRange("dead time T must be positive");
    }
}

DdaeSystem build_fsa(const FsaPlant& plant, const RealMatrix& gain) {
    plant.validate();
    const Index n = plant.n();
    if (gain.rows() != 1 || gain.cols() != n) {
        throw DimensionMismatch("G must be 1 x n");
    }
    const Matrix e = plant.e.cast<Complex>();
    const Matrix fg = (plant.f * gain).cast<Complex>();
    const double t = plant.t;
    DdaeSystem sys;
    sys.n = n;
    sys.m = n;
    sys.r = t;
    sys.a = dirac(0.0, e, t);
    sys.b = dirac(0.0, -fg, t);
    sys.c = dirac(t, expm(e * t), t);
    sys.d = exp_density(0.0, t, -Matrix::Identity(n, n), e, fg, t);
    sys.validate();
    return sys;
}

RealMatrix place_poles(const FsaPlant& plant, const std::vector<Complex>& desired) {
    plant.validate();
    const Index n = plant.n();
    if (static_cast<Index>(desired.size()) != n) {
        throw DimensionMismatch("need exactly n desired poles");
    }
    // Conjugate closure, matched greedily.
    std::vector<bool> used(desired.size(), false);
    for (std::size_t i = 0; i < desired.size(); ++i) {
        if (used[i]) {
            continue;
        }
        used[i] = true;
        if (std::abs(desired[i].imag()) <= 1e-12 * (1.0 + std::abs(desired[i]))) {
            continue;
        }
        bool matched = false;
        for (std::size_t j = i + 1; j < desired.size() && !matched; ++j) {
            if (!used[j] && std::abs(desired[j] - std::conj(desired[i])) <=
                                1e-9 * (1.0 + std::abs(desired[i]))) {
                used[j] = true;
                matched = true;
            }
        }
        if (!matched) {
            throw Error("desired poles are not closed under conjugation");
        }
    }

    RealMatrix ctrb(n, n);
    RealMatrix column = plant.f;
    for (Index k = 0; k < n; ++k) {
        ctrb.col(k) = column;
        column = plant.e * column;
    }
    const Eigen::JacobiSVD<RealMatrix> svd(ctrb);
    const Eigen::VectorXd sv = svd.singularValues();
    const auto rank = static_cast<int>((sv.array() > 1e-8 * sv(0)).count());
    if (rank < n) {
        std::ostringstream values;
        values << "[";
        for (Index k = 0; k < sv.size(); ++k) {
            values << (k ? ", " : "") << sv(k);
        }
        values << "]";
        throw Uncontrollable(rank, values.str());
    }

    // Desired characteristic polynomial, monic, coefficients low to high.
    std::vector<Complex> poly{1.0};
    for (const Complex& root : desired) {
        std::vector<Complex> next(poly.size() + 1, 0.0);
        for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] += poly[k];
            next[k] -= root * poly[k];
        }
        poly = std::move(next);
    }
    RealMatrix chi = RealMatrix::Zero(n, n);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        chi = chi * plant.e + it->real() * RealMatrix::Identity(n, n);
    }
    Eigen::VectorXd last = Eigen::VectorXd::Zero(n);
    last(n - 1) = 1.0;
    const Eigen::VectorXd row = ctrb.transpose().fullPivLu().solve(last);
    RealMatrix gain = row.transpose() * chi;

    const Eigen::VectorXcd achieved = (plant.e - plant.f * gain).eigenvalues();
    std::vector<bool> taken(desired.size(), false);
    for (Index k = 0; k < n; ++k) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < desired.size(); ++j) {
            if (!taken[j] && std::abs(achieved(k) - desired[j]) < best) {
                best = std::abs(achieved(k) - desired[j]);
                best_j = j;
            }
        }
        taken[best_j] = true;
        if (best > 1e-6 * std::max(1.0, std::abs(desired[best_j]))) {
            throw Error("pole placement missed " + std::to_string(desired[best_j].real()) +
                        " by " + std::to_string(best));
        }
    }
    return gain;
}

std::vector<Complex> default_identity_samples() {
    std::vector<Complex> samples;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            samples.emplace_back(-5.0 + 10.0 * i / 9.0, -20.0 + 40.0 * j / 9.0);
        }
    }
    return samples;
}

double verify_fsa_identity(const FsaPlant& plant, const RealMatrix& gain,
                           const std::vector<Complex>& samples, Execution exec) {
    const DdaeSystem sys = build_fsa(plant, gain);
    const Index n = plant.n();
    const Matrix closed = (plant.e - plant.f * gain).cast<Complex>();
    const AnalyticFunction error(
        [&sys, &closed, n](Complex s) -> Complex {
            const Complex reference =
                (s * Matrix::Identity(n, n) - closed).partialPivLu().determinant();
            return std::abs(char_det(sys, s) - reference) / (1.0 + std::abs(reference));
        },
        0, 0.0);
    const std::vector<Complex> errors = evaluate_batch(error, samples, exec);
    double worst = 0.0;
    for (const Complex& e : errors) {
        worst = std::max(worst, e.real());
    }
    return worst;
}

}  // namespace ddae
