#pragma once

// Finite spectrum assignment for the dead-time plant x'(t) = E x(t) + F u(t - T):
// closed loop x' = E x - F G y, y(t) = e^{TE} x(t - T) - int_0^T e^{theta E} F G y(t - theta).

#include <ddae/model.hpp>

#include <vector>

namespace ddae {

struct FsaPlant {
    RealMatrix e;  // n x n drift
    RealMatrix f;  // n x 1 input
    double t = 1.0;

    Index n() const { return e.rows(); }
    void validate() const;
};

DdaeSystem build_fsa(const FsaPlant& plant, const RealMatrix& gain);

/// Ackermann's formula for single-input pairs; desired must be closed under
/// conjugation. Throws Uncontrollable when the controllability matrix is rank
/// deficient (relative threshold 1e-8).
RealMatrix place_poles(const FsaPlant& plant, const std::vector<Complex>& desired);

/// Default sample set: a 10 x 10 grid over [-5, 5] x [-20, 20].
std::vector<Complex> default_identity_samples();

/// max |det Delta(s) - det(sI - E + FG)| / (1 + |det(sI - E + FG)|) over samples.
double verify_fsa_identity(const FsaPlant& plant, const RealMatrix& gain,
                           const std::vector<Complex>& samples = default_identity_samples(),
                           Execution exec = Execution::Parallel);

}  // namespace ddae
