#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minper/linalg.hpp"
#include "minper/norms.hpp"

namespace minper {

enum class Provenance { Exact, Declared, Estimated };

enum class SystemKind {
    General,
    Planar,
    ComplexDiagonal,
    Antisymmetric,
    AntiHermitian,
    RotatedNormal,
    SkewPair,
    Nonlinear,
};

// A vector field x -> f(x) with a Lipschitz constant L under the attached
// norm.  Provenance records how L was obtained: Exact (induced norm of a
// linear field, or a symmetry argument), Declared (caller's word), or
// Estimated (sampled lower bound).
struct LipschitzField {
    std::size_t dimension = 0;
    Scalar scalar_field = Scalar::Real;
    std::function<void(std::span<const double>, std::span<double>)> eval;
    double L = 0.0;
    Provenance provenance = Provenance::Declared;
    VectorNorm norm = VectorNorm::l2();
    SystemKind kind = SystemKind::Nonlinear;
};

struct LinearSystem {
    Matrix A;
    VectorNorm norm;
    double L = 0.0;
    LipschitzField field;
    SystemKind kind = SystemKind::General;
    // A starting state whose orbit realizes the norm: the unit witness of
    // induced_norm (dominant invariant subspace for the normal families),
    // so simulations from it produce clean periodic orbits.
    Storage default_x0;
};

// Axis-aligned sampling box over the interleaved storage coordinates.
struct Box {
    Storage lo, hi;
};

// The 2x2 rotation generator [[0, L], [-L, 0]].  For any norm invariant
// under the quarter turn the Lipschitz constant is exactly L.
LinearSystem planar_rotation(double L, const VectorNorm& norm = VectorNorm::l2());

struct ClosedFormSolution {
    double L = 0.0;
    std::vector<cplx> c;
    Storage at(double t) const; // c_k * e^{iLt}, interleaved
};

struct ComplexDiagonal {
    LinearSystem system;
    ClosedFormSolution solution;
};

// ẋ = iLx on C^n with amplitude vector c; the solution x_k(t) = c_k e^{iLt}
// is returned in closed form alongside.
ComplexDiagonal complex_diagonal(double L, std::size_t n, const std::vector<cplx>& c);

// A = S - S^T with S uniform in [-scale, scale]; anti-symmetry is exact at
// the bit level.  Attached norm l2, L from the exact induced-norm route.
LinearSystem random_antisymmetric(std::size_t n, double scale, std::uint64_t seed);

// A = M - M* with M uniform complex; anti-Hermitian exactly.
LinearSystem random_antihermitian(std::size_t n, double scale, std::uint64_t seed);

// Random normal matrix U D U* whose dominant eigenvalue is then rotated
// onto the positive imaginary axis.  The generated spectrum keeps every
// non-dominant modulus at most 95% of the dominant one and every
// non-dominant phase strictly inside the post-rotation decay sector, so the
// orbit from the norm witness has exactly one surviving oscillation mode.
LinearSystem random_rotated_normal(std::size_t n, std::uint64_t seed);

// [[0, a], [-b, 0]]: elliptic orbits with T = 2pi/sqrt(ab) and l2 Lipschitz
// constant max(a, b), hence normalized period 2pi * max(a,b)/sqrt(ab).
LinearSystem skew_pair(double a, double b);

// Wraps an arbitrary matrix; L from induced_norm (provenance Exact when a
// closed-form route applies, Estimated otherwise).
LinearSystem matrix_system(const Matrix& a, const VectorNorm& norm,
                           const OptimizerConfig& cfg = {});

// Wraps a nonlinear field.  L must be declared, or estimable from a sampling
// box; with neither, MissingL.
LipschitzField make_field(std::function<void(std::span<const double>, std::span<double>)> eval,
                          std::size_t n, Scalar scalar_field, const VectorNorm& norm,
                          std::optional<double> L_declared = std::nullopt,
                          std::optional<Box> box = std::nullopt, int pairs = 10000,
                          std::uint64_t seed = 1);

} // namespace minper
