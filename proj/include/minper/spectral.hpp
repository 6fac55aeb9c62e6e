#pragma once
#include <vector>

#include "minper/linalg.hpp"
#include "minper/norms.hpp"

namespace minper {

// Eigenvalues sorted by descending modulus; near-ties (1e-8 relative) are
// ordered by ascending argument in (-pi, pi] so indexing is deterministic.
struct SpectralInfo {
    std::vector<cplx> eigenvalues;
    double max_modulus = 0.0;
    std::vector<double> residuals; // |p(lambda)| relative to coefficient scale
    std::vector<cplx> char_poly;   // monic: lambda^n + c[0] lambda^(n-1) + ... + c[n-1]
};

SpectralInfo eigenvalues(const Matrix& a);

struct AttainmentResult {
    double induced = 0.0;
    double rho = 0.0;
    bool attained = false;
    double gap = 0.0; // induced - rho; never meaningfully negative
};

// Compares the induced operator norm with the spectral radius.  Equality
// (within tol, scaled by max(1, induced)) means a linear system with this
// matrix realizes the minimal normalized period after a unimodular rotation.
AttainmentResult check_attainment(const Matrix& a, const VectorNorm& norm,
                                  const OptimizerConfig& cfg = {},
                                  double attainment_tol = 1e-6);

// Multiplies A by the unimodular scalar e^{i(pi/2 - arg lambda_j)} so the
// j-th eigenvalue lands on the positive imaginary axis.  The norm must be
// invariant under unimodular complex scaling (probed numerically); both
// postconditions -- rotated spectrum contains i|lambda_j| and the induced
// norm is unchanged -- are verified before returning.
Matrix rotate_to_imaginary(const Matrix& a, std::size_t j,
                           const VectorNorm& norm = VectorNorm::l2());

} // namespace minper
