#include "minper/systems.hpp"

#include <cmath>

#include "minper/rng.hpp"
#include "minper/spectral.hpp"
#include "minper/verify.hpp"

namespace minper {

namespace {

constexpr double kPi = 3.14159265358979323846;

LipschitzField field_from_matrix(const Matrix& a, const VectorNorm& norm, double L,
                                 Provenance prov, SystemKind kind) {
    LipschitzField f;
    f.dimension = a.n();
    f.scalar_field = a.field();
    f.eval = [a](std::span<const double> x, std::span<double> out) { a.apply(x, out); };
    f.L = L;
    f.provenance = prov;
    f.norm = norm;
    f.kind = kind;
    return f;
}

LinearSystem assemble(Matrix a, VectorNorm norm, double L, Provenance prov, SystemKind kind,
                      Storage x0) {
    LinearSystem s;
    s.field = field_from_matrix(a, norm, L, prov, kind);
    s.A = std::move(a);
    s.norm = std::move(norm);
    s.L = L;
    s.kind = kind;
    s.default_x0 = std::move(x0);
    return s;
}

} // namespace

LinearSystem planar_rotation(double L, const VectorNorm& norm) {
    if (!(L > 0.0)) throw NonpositiveL("planar rotation requires L > 0");
    Matrix a = Matrix::from_real(2, {0.0, L, -L, 0.0});
    InducedNormResult ind = induced_norm(a, norm);
    double value;
    Provenance prov;
    if (ind.exact) {
        value = ind.value;
        prov = Provenance::Exact;
    } else if (check_rotation_invariance(norm, 2).invariant) {
        // |Jx| = L |quarter-turn of x| = L |x| for quarter-turn-invariant
        // norms, so L is exact by symmetry even without a closed form.
        value = L;
        prov = Provenance::Exact;
    } else {
        value = ind.value;
        prov = Provenance::Estimated;
    }
    Storage x0(4, 0.0);
    x0[0] = 1.0;
    return assemble(std::move(a), norm, value, prov, SystemKind::Planar, std::move(x0));
}

Storage ClosedFormSolution::at(double t) const {
    Storage s(2 * c.size());
    cplx rot{std::cos(L * t), std::sin(L * t)};
    for (std::size_t k = 0; k < c.size(); ++k) set_c(s, k, c[k] * rot);
    return s;
}

ComplexDiagonal complex_diagonal(double L, std::size_t n, const std::vector<cplx>& c) {
    if (!(L > 0.0)) throw NonpositiveL("complex diagonal system requires L > 0");
    if (n < 1) throw DimensionTooSmall("dimension must be >= 1");
    if (c.size() != n) throw DimensionMismatch("amplitude vector length must equal n");
    Matrix a(n, Scalar::Complex);
    for (std::size_t j = 0; j < n; ++j) a.at(j, j) = cplx{0.0, L};

    VectorNorm norm = VectorNorm::l2();
    ComplexDiagonal out;
    out.solution.L = L;
    out.solution.c = c;
    out.system = assemble(std::move(a), norm, L, Provenance::Exact,
                          SystemKind::ComplexDiagonal, to_storage(c));
    return out;
}

LinearSystem random_antisymmetric(std::size_t n, double scale, std::uint64_t seed) {
    if (n < 2) throw DimensionTooSmall("anti-symmetric systems need n >= 2");
    if (!(scale > 0.0)) throw InvalidArgument("scale must be positive");
    Rng g = make_stream(seed, 0);
    std::vector<double> s(n * n);
    for (double& v : s) v = uniform(g, -scale, scale);
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = s[i * n + j] - s[j * n + i];
    Matrix m = Matrix::from_real(n, a);
    VectorNorm norm = VectorNorm::l2();
    norm.scalar_field = Scalar::Real;
    InducedNormResult ind = induced_norm(m, norm);
    return assemble(std::move(m), std::move(norm), ind.value, Provenance::Exact,
                    SystemKind::Antisymmetric, std::move(ind.witness));
}

LinearSystem random_antihermitian(std::size_t n, double scale, std::uint64_t seed) {
    if (n < 1) throw DimensionTooSmall("dimension must be >= 1");
    if (!(scale > 0.0)) throw InvalidArgument("scale must be positive");
    Rng g = make_stream(seed, 0);
    std::vector<cplx> mdat(n * n);
    for (auto& v : mdat) {
        double re = uniform(g, -scale, scale);
        double im = uniform(g, -scale, scale);
        v = cplx{re, im};
    }
    std::vector<cplx> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = mdat[i * n + j] - std::conj(mdat[j * n + i]);
    Matrix m = Matrix::from_complex(n, a);
    VectorNorm norm = VectorNorm::l2();
    InducedNormResult ind = induced_norm(m, norm);
    return assemble(std::move(m), std::move(norm), ind.value, Provenance::Exact,
                    SystemKind::AntiHermitian, std::move(ind.witness));
}

LinearSystem random_rotated_normal(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DimensionTooSmall("dimension must be >= 1");
    Rng g = make_stream(seed, 0);

    // Spectrum: dominant modulus r0, others at most 0.95 r0; non-dominant
    // phases offset into (0.3, pi - 0.3) ahead of the dominant phase, which
    // becomes the strict decay sector once the dominant eigenvalue is
    // rotated onto the positive imaginary axis.
    double r0 = uniform(g, 0.5, 2.0);
    double theta0 = uniform(g, -kPi, kPi);
    std::vector<cplx> lam(n);
    lam[0] = cplx{r0 * std::cos(theta0), r0 * std::sin(theta0)};
    for (std::size_t j = 1; j < n; ++j) {
        double r = r0 * uniform(g, 0.3, 0.95);
        double th = theta0 + uniform(g, 0.3, kPi - 0.3);
        lam[j] = cplx{r * std::cos(th), r * std::sin(th)};
    }

    // Random unitary by modified Gram-Schmidt on a complex Gaussian matrix
    // (columns).
    std::vector<std::vector<cplx>> q(n, std::vector<cplx>(n));
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) q[col][i] = cplx{gaussian(g), gaussian(g)};
        for (std::size_t prev = 0; prev < col; ++prev) {
            cplx proj{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) proj += std::conj(q[prev][i]) * q[col][i];
            for (std::size_t i = 0; i < n; ++i) q[col][i] -= proj * q[prev][i];
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q[col][i]);
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) q[col][i] /= nrm;
    }

    // M = U D U*.
    std::vector<cplx> mdat(n * n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                mdat[i * n + j] += q[k][i] * lam[k] * std::conj(q[k][j]);
    Matrix m = Matrix::from_complex(n, mdat);

    Matrix b = rotate_to_imaginary(m, 0);
    VectorNorm norm = VectorNorm::l2();
    InducedNormResult ind = induced_norm(b, norm);
    return assemble(std::move(b), std::move(norm), ind.value, Provenance::Exact,
                    SystemKind::RotatedNormal, std::move(ind.witness));
}

LinearSystem skew_pair(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("skew pair requires a, b > 0");
    Matrix m = Matrix::from_real(2, {0.0, a, -b, 0.0});
    VectorNorm norm = VectorNorm::l2();
    norm.scalar_field = Scalar::Real;
    InducedNormResult ind = induced_norm(m, norm);
    return assemble(std::move(m), std::move(norm), ind.value, Provenance::Exact,
                    SystemKind::SkewPair, std::move(ind.witness));
}

LinearSystem matrix_system(const Matrix& a, const VectorNorm& norm,
                           const OptimizerConfig& cfg) {
    InducedNormResult ind = induced_norm(a, norm, cfg);
    return assemble(a, norm, ind.value,
                    ind.exact ? Provenance::Exact : Provenance::Estimated,
                    SystemKind::General, std::move(ind.witness));
}

LipschitzField make_field(std::function<void(std::span<const double>, std::span<double>)> eval,
                          std::size_t n, Scalar scalar_field, const VectorNorm& norm,
                          std::optional<double> L_declared, std::optional<Box> box, int pairs,
                          std::uint64_t seed) {
    if (n < 1) throw DimensionTooSmall("dimension must be >= 1");
    LipschitzField f;
    f.dimension = n;
    f.scalar_field = scalar_field;
    f.eval = std::move(eval);
    f.norm = norm;
    f.kind = SystemKind::Nonlinear;
    if (L_declared) {
        if (*L_declared < 0.0) throw NonpositiveL("declared L must be nonnegative");
        f.L = *L_declared;
        f.provenance = Provenance::Declared;
    } else if (box) {
        f.L = estimate_lipschitz(f, *box, pairs, seed).estimate;
        f.provenance = Provenance::Estimated;
    } else {
        throw MissingL("no declared L and no sampling box to estimate one");
    }
    return f;
}

} // namespace minper
