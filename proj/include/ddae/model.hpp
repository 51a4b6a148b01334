#pragma once

#include <ddae/measures.hpp>

#include <optional>
#include <vector>

namespace ddae {

/// x'(t) = A x_t + B y_t,  y(t) = C x_t + D y_t  with kernels on [0, r].
struct DdaeSystem {
    Index n = 0;
    Index m = 0;
    double r = 0.0;
    DelayKernel a;
    DelayKernel b;
    DelayKernel c;
    DelayKernel d;

    /// Checks block shapes and that every kernel's memory is at most r.
    void validate() const;

    friend bool operator==(const DdaeSystem&, const DdaeSystem&) = default;
};

/// Builds a system, widening every kernel's memory to r.
DdaeSystem make_system(Index n, Index m, double r, DelayKernel a, DelayKernel b, DelayKernel c,
                       DelayKernel d);

/// Sampled initial data (phi, chi, psi) on the grid {-r, -r + h, ..., 0}.
struct InitialState {
    Vector phi;
    double h = 0.0;
    std::vector<Vector> chi;
    std::vector<Vector> psi;

    /// Constant histories chi, psi sampled at step h over [-r, 0].
    static InitialState constant(const Vector& phi, const Vector& chi, const Vector& psi,
                                 double r, double h);

    /// Number of grid steps covering [-r, 0]; throws if h does not divide r.
    Index memory_steps(double r) const;
    void validate(const DdaeSystem& sys) const;
};

struct WellPosedness {
    enum class Kind { Explicit, InvertibleJ, SingularJ };

    Kind kind = Kind::Explicit;
    /// I_m - D{0}
    Matrix j;
    /// Present for Explicit (identity) and InvertibleJ.
    std::optional<Matrix> j_inverse;
    double smallest_singular_value = 0.0;
};

const char* to_string(WellPosedness::Kind kind);

WellPosedness classify(const DdaeSystem& sys);

/// (A, B, J^{-1} C, J^{-1} (D - D|{0})); the identity on explicit systems.
/// Throws NotWellPosed when J is singular.
DdaeSystem explicitize(const DdaeSystem& sys);

/// f = phi - (e * A * chi + e * B * psi)(0).
Vector initial_offset(const DdaeSystem& sys, const InitialState& init);

/// |psi(0) - C chi - D psi|, evaluated with the simulator's quadrature.
double consistency_residual(const DdaeSystem& sys, const InitialState& init);

}  // namespace ddae
