#include "minper/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "minper/rng.hpp"

namespace minper {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Monic characteristic polynomial coefficients by the Faddeev-LeVerrier
// recurrence: M_1 = A, c_k = -tr(A M_k)/k ... expressed as
// M_k = A (M_{k-1} + c_{k-1} I).
std::vector<cplx> char_poly(const Matrix& a) {
    const std::size_t n = a.n();
    std::vector<cplx> c(n);
    Matrix m = a;
    c[0] = -m.trace();
    for (std::size_t k = 2; k <= n; ++k) {
        Matrix shifted = m;
        for (std::size_t i = 0; i < n; ++i) shifted.at(i, i) += c[k - 2];
        m = a.times(shifted);
        c[k - 1] = -m.trace() / cplx{double(k), 0.0};
    }
    return c;
}

cplx poly_eval(const std::vector<cplx>& c, cplx z) {
    cplx v{1.0, 0.0};
    for (const cplx& ck : c) v = v * z + ck;
    return v;
}

cplx poly_deriv_eval(const std::vector<cplx>& c, cplx z) {
    const std::size_t n = c.size();
    cplx v{double(n), 0.0};
    for (std::size_t k = 0; k + 1 < n; ++k)
        v = v * z + cplx{double(n - 1 - k), 0.0} * c[k];
    return v;
}

double arg_in_half_open(cplx z) {
    double a = std::arg(z);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

} // namespace

SpectralInfo eigenvalues(const Matrix& a) {
    const std::size_t n = a.n();
    if (n < 1) throw DimensionTooSmall("matrix must be at least 1x1");
    if (n > 16) throw DimensionTooLarge("eigenvalue solver is limited to n <= 16");

    SpectralInfo info;
    info.char_poly = char_poly(a);
    const std::vector<cplx>& c = info.char_poly;

    double coeff_scale = 1.0;
    for (const cplx& ck : c) coeff_scale = std::max(coeff_scale, std::abs(ck));

    // Durand-Kerner with in-place (Gauss-Seidel style) updates from a
    // non-symmetric starting circle.
    const double r = 1.0 + coeff_scale;
    std::vector<cplx> z(n);
    for (std::size_t j = 0; j < n; ++j) {
        double th = 2.0 * kPi * double(j) / double(n) + 0.4;
        z[j] = cplx{r * std::cos(th), r * std::sin(th)};
    }

    const double target = 1e-10 * coeff_scale;
    const double giveup = 1e-8 * coeff_scale;
    const int max_sweeps = 2000;
    double worst = 0.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double moved = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            cplx denom{1.0, 0.0};
            for (std::size_t m = 0; m < n; ++m)
                if (m != j) denom *= z[j] - z[m];
            if (denom == cplx{0.0, 0.0}) {
                // Collided approximants: nudge deterministically.
                z[j] += cplx{1e-6 * r, 1e-6 * r};
                moved = r;
                continue;
            }
            cplx step = poly_eval(c, z[j]) / denom;
            z[j] -= step;
            moved = std::max(moved, std::abs(step));
        }
        worst = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            worst = std::max(worst, std::abs(poly_eval(c, z[j])));
        if (worst <= target && moved <= 1e-13 * r) break;
    }
    if (worst > giveup)
        throw RootSolverDiverged("eigenvalue iteration residual above threshold");

    // One Newton polish per root, kept only when it improves the residual.
    for (std::size_t j = 0; j < n; ++j) {
        cplx p = poly_eval(c, z[j]);
        cplx dp = poly_deriv_eval(c, z[j]);
        if (dp == cplx{0.0, 0.0}) continue;
        cplx cand = z[j] - p / dp;
        if (std::abs(poly_eval(c, cand)) < std::abs(p)) z[j] = cand;
    }

    std::sort(z.begin(), z.end(), [](cplx a_, cplx b_) {
        double ma = std::abs(a_), mb = std::abs(b_);
        if (ma != mb) return ma > mb;
        return arg_in_half_open(a_) < arg_in_half_open(b_);
    });
    // Near-ties in modulus get argument ordering too, so the indexing does
    // not depend on last-bit noise in |lambda|.
    info.max_modulus = z.empty() ? 0.0 : std::abs(z[0]);
    const double tie = 1e-8 * std::max(info.max_modulus, 1e-300);
    std::size_t g0 = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        if (j == n || std::abs(std::abs(z[j]) - std::abs(z[g0])) > tie) {
            std::sort(z.begin() + g0, z.begin() + j, [](cplx a_, cplx b_) {
                return arg_in_half_open(a_) < arg_in_half_open(b_);
            });
            g0 = j;
        }
    }

    info.eigenvalues = std::move(z);
    info.residuals.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        info.residuals[j] = std::abs(poly_eval(c, info.eigenvalues[j])) / coeff_scale;
    return info;
}

AttainmentResult check_attainment(const Matrix& a, const VectorNorm& norm,
                                  const OptimizerConfig& cfg, double attainment_tol) {
    AttainmentResult r;
    r.induced = induced_norm(a, norm, cfg).value;
    r.rho = eigenvalues(a).max_modulus;
    r.gap = r.induced - r.rho;
    r.attained = r.gap <= attainment_tol * std::max(1.0, r.induced);
    return r;
}

namespace {

// A norm qualifies for unimodular rotation only if |alpha| = 1 implies
// norm(alpha x) = norm(x); probe on seeded samples.
void probe_complex_homogeneity(const VectorNorm& norm, std::size_t n) {
    const double phases[] = {0.7, 2.1, -1.3};
    Rng g = make_stream(0x9c0fULL, 0);
    for (int s = 0; s < 8; ++s) {
        Storage x(2 * n);
        for (double& v : x) v = gaussian(g);
        double nx = norm_eval(norm, x);
        if (!(nx > 0.0)) continue;
        for (double th : phases) {
            cplx alpha{std::cos(th), std::sin(th)};
            Storage y(2 * n);
            for (std::size_t j = 0; j < n; ++j) set_c(y, j, alpha * get_c(x, j));
            if (std::abs(norm_eval(norm, y) - nx) > 1e-9 * nx)
                throw NormNotComplexHomogeneous(
                    "norm is not invariant under unimodular complex scaling");
        }
    }
}

} // namespace

Matrix rotate_to_imaginary(const Matrix& a, std::size_t j, const VectorNorm& norm) {
    const std::size_t n = a.n();
    SpectralInfo info = eigenvalues(a);
    if (j >= n) throw InvalidArgument("eigenvalue index out of range");
    cplx lam = info.eigenvalues[j];
    double mod = std::abs(lam);
    if (mod <= 1e-12 * std::max(info.max_modulus, 1.0))
        throw ZeroEigenvalue("cannot rotate a zero eigenvalue onto the imaginary axis");

    probe_complex_homogeneity(norm, n);

    double mu = std::arg(lam);
    double th = kPi / 2.0 - mu;
    cplx factor{std::cos(th), std::sin(th)};
    Matrix b = a.scaled(factor).promoted();

    // Postcondition 1: the rotated spectrum contains i|lambda_j|.
    SpectralInfo rotated = eigenvalues(b);
    cplx want{0.0, mod};
    double bestdist = 1e300;
    for (const cplx& mu_k : rotated.eigenvalues)
        bestdist = std::min(bestdist, std::abs(mu_k - want));
    if (bestdist > 1e-6 * std::max(1.0, mod))
        throw VerificationFailed("rotated spectrum misses i|lambda|");

    // Postcondition 2: unimodular scaling preserved the induced norm.
    double na = induced_norm(a.promoted(), norm).value;
    double nb = induced_norm(b, norm).value;
    if (std::abs(na - nb) > 1e-6 * std::max(1.0, na))
        throw VerificationFailed("rotation changed the induced norm");

    return b;
}

} // namespace minper
