#pragma once

// Causal matrix-valued measures on [0, r]: the convolution kernels of delay
// operators. A term x(t - tau) is an atom at tau; distributed delays are
// closed-form densities (polynomial or matrix-exponential) on sub-intervals.

#include <ddae/types.hpp>

#include <variant>
#include <vector>

namespace ddae {

struct Atom {
    double location = 0.0;
    Matrix weight;
};

/// Density sum_k coefficients[k] * theta^k.
struct PolyDensity {
    std::vector<Matrix> coefficients;
};

/// Density left * exp(theta * generator) * right.
struct ExpDensity {
    Matrix left;
    Matrix generator;
    Matrix right;
};

struct DensityPiece {
    double a = 0.0;
    double b = 0.0;
    std::variant<PolyDensity, ExpDensity> shape;

    Index rows() const;
    Index cols() const;
    /// Density value at theta (no support check).
    Matrix value(double theta) const;
    bool is_zero() const;

    friend bool operator==(const DensityPiece&, const DensityPiece&);
};

inline constexpr int kMaxPolyDegree = 8;

class DelayKernel {
  public:
    DelayKernel() = default;
    DelayKernel(Index rows, Index cols, double memory);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    double memory() const { return memory_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPiece>& pieces() const { return pieces_; }

    bool is_atomic() const { return pieces_.empty(); }
    bool is_zero() const { return atoms_.empty() && pieces_.empty(); }

    /// Adds weight at location, merging with an existing atom within the merge
    /// tolerance; atoms whose weight cancels to exactly zero are dropped.
    void add_atom(double location, const Matrix& weight);
    void add_piece(DensityPiece piece);

    /// Scalar 1x1 kernel of entry (i, j).
    DelayKernel entry(Index i, Index j) const;

    double merge_tolerance() const;

    friend bool operator==(const DelayKernel&, const DelayKernel&);

  private:
    Index rows_ = 0;
    Index cols_ = 0;
    double memory_ = 0.0;
    std::vector<Atom> atoms_;  // sorted by location
    std::vector<DensityPiece> pieces_;
};

DelayKernel zero_kernel(Index rows, Index cols, double memory);
/// Single atom at tau; memory defaults to tau. Throws SupportOutOfRange if tau
/// lies outside [0, memory].
DelayKernel dirac(double tau, const Matrix& weight, double memory = -1.0);
DelayKernel poly_density(double a, double b, std::vector<Matrix> coefficients, double memory);
DelayKernel exp_density(double a, double b, const Matrix& left, const Matrix& generator,
                        const Matrix& right, double memory);

Matrix atom_at_zero(const DelayKernel& k);
DelayKernel add(const DelayKernel& k1, const DelayKernel& k2);
DelayKernel scale_left(const Matrix& m, const DelayKernel& k);
DelayKernel strip_zero_atom(const DelayKernel& k);

/// Laplace transform int e^{-s t} dk(t), evaluated in closed form.
Matrix laplace(const DelayKernel& k, Complex s);

/// Atomic convolution; memory adds. Throws NonAtomicConvolution on densities.
DelayKernel convolve(const DelayKernel& k1, const DelayKernel& k2);

/// Spectral-norm total variation (upper-bound semantics for densities).
double total_variation(const DelayKernel& k);

/// Quadrature weights w_q such that sum_q w_q z(t - q h) approximates
/// int dk(theta) z(t - theta). Density mass landing on node 0 is moved to
/// node 1, so w_0 equals atom_at_zero(k) exactly.
struct QuadratureWeights {
    double step = 0.0;
    std::vector<Matrix> weights;

    Index size() const { return static_cast<Index>(weights.size()); }
    Matrix sum() const;
};

QuadratureWeights discretize(const DelayKernel& k, double h, double snap_tolerance = -1.0);

// Matrix exponential and its integral.

Matrix expm(const Matrix& a);
/// int_a^b exp(theta * x) d theta via the augmented block exponential; valid
/// for singular or defective x.
Matrix exp_integral(double a, double b, const Matrix& x);

}  // namespace ddae
