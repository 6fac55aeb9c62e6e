#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minper/linalg.hpp"

namespace minper {

// A vector norm on R^n or C^n.  Weighted means a weighted Euclidean norm
// sqrt(sum (w_j |x_j|)^2) with strictly positive weights.  Custom wraps an
// arbitrary callable; it is assumed (not checked) to satisfy the norm axioms.
struct VectorNorm {
    enum class Kind { Lp, LInf, Weighted, Custom };

    Kind kind = Kind::Lp;
    double p = 2.0;                       // Lp only; requires p >= 1
    std::vector<double> weights;          // Weighted only
    std::function<double(std::span<const double>)> custom;
    std::string name = "l2";
    Scalar scalar_field = Scalar::Complex; // field the norm is evaluated over

    static VectorNorm lp(double p);
    static VectorNorm linf();
    static VectorNorm l2() { return lp(2.0); }
    static VectorNorm weighted(std::vector<double> w);
    static VectorNorm custom_norm(std::function<double(std::span<const double>)> fn,
                                  std::string name);

    void validate(std::size_t dim) const;
};

// |x| in the given norm.  Scaled by the max component magnitude so large p
// does not overflow.  p > 64 and p = inf both take the max-magnitude route.
double norm_eval(const VectorNorm& norm, std::span<const double> x);

struct OptimizerConfig {
    int restarts = 64;
    int iterations = 500;
    std::uint64_t seed = 1;
    double power_tol = 1e-12;  // relative tolerance for the exact l2 route
    bool parallel = true;
    bool force_multistart = false; // skip the exact routes (used for cross-checks)
};

struct InducedNormResult {
    double value = 0.0;
    Storage witness;          // unit vector (in `norm`) achieving `value`
    bool exact = false;       // true for the closed-form l1/linf and l2 routes
    int restarts_used = 0;
    bool stalled = false;     // every restart stopped on step-size underflow
};

// Induced operator norm sup_{x != 0} |Ax| / |x|.  l1, l2 and linf have exact
// routes; any other norm is estimated from below by multistart hill climbing
// on the unit sphere of `norm`.
InducedNormResult induced_norm(const Matrix& a, const VectorNorm& norm,
                               const OptimizerConfig& cfg = {});

struct RotationInvarianceResult {
    bool invariant = false;
    double max_deviation = 0.0;
};

// Samples random vectors and compares |x| with the image of x under the
// quarter-turn (x1, x2) -> (-x2, x1) applied to the first two (complex)
// components.  Norms without this symmetry (e.g. unequal weights) come back
// non-invariant.
RotationInvarianceResult check_rotation_invariance(const VectorNorm& norm,
                                                   std::size_t dim,
                                                   int samples = 1000,
                                                   std::uint64_t seed = 1,
                                                   double tol = 1e-9,
                                                   bool parallel = true);

} // namespace minper
