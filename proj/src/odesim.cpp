#include "minper/odesim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace minper {

namespace {

constexpr double kPi = 3.14159265358979323846;

// One classical RK4 step of size h from x into out (scratch k1..k4, tmp).
struct Rk4Scratch {
    Storage k1, k2, k3, k4, tmp;
    explicit Rk4Scratch(std::size_t len)
        : k1(len), k2(len), k3(len), k4(len), tmp(len) {}
};

void rk4_step(const LipschitzField& f, const Storage& x, double h, Storage& out,
              Rk4Scratch& s) {
    const std::size_t len = x.size();
    f.eval(x, s.k1);
    for (std::size_t i = 0; i < len; ++i) s.tmp[i] = x[i] + 0.5 * h * s.k1[i];
    f.eval(s.tmp, s.k2);
    for (std::size_t i = 0; i < len; ++i) s.tmp[i] = x[i] + 0.5 * h * s.k2[i];
    f.eval(s.tmp, s.k3);
    for (std::size_t i = 0; i < len; ++i) s.tmp[i] = x[i] + h * s.k3[i];
    f.eval(s.tmp, s.k4);
    for (std::size_t i = 0; i < len; ++i)
        out[i] = x[i] + h / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
}

bool all_finite(const Storage& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace

Trajectory integrate(const LipschitzField& field, const Storage& x0, double t_end, double h,
                     double step_tol) {
    if (field.dimension < 1 || x0.size() != 2 * field.dimension)
        throw DimensionMismatch("initial state does not match field dimension");
    if (!(h > 0.0)) throw InvalidArgument("step size must be positive");
    if (!(t_end >= h)) throw InvalidArgument("t_end must be at least one step");
    if (field.L > 0.0 && h > 0.01 / field.L * (1.0 + 1e-12))
        throw StepTooLarge("step size violates h <= 0.01/L");

    const std::size_t len = x0.size();
    const std::size_t steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));

    Trajectory traj;
    traj.h = h;
    traj.scalar_field = field.scalar_field;
    traj.field = field;
    traj.states.reserve(steps + 1);
    traj.states.push_back(x0);

    Rk4Scratch s(len);
    Storage full(len), half(len), half2(len);
    for (std::size_t m = 0; m < steps; ++m) {
        const Storage& x = traj.states.back();
        rk4_step(field, x, h, full, s);
        rk4_step(field, x, 0.5 * h, half, s);
        rk4_step(field, half, 0.5 * h, half2, s);

        double scale = 1.0;
        for (double v : x) scale = std::max(scale, std::abs(v));
        double err = 0.0;
        for (std::size_t i = 0; i < len; ++i)
            err = std::max(err, std::abs(full[i] - half2[i]));
        err /= scale;
        traj.max_step_error = std::max(traj.max_step_error, err);
        if (!all_finite(full)) throw NonfiniteState("integration produced a non-finite state");
        if (err > step_tol)
            throw NumericError("step-halving error estimate exceeds the integrator tolerance");
        traj.states.push_back(full);
    }
    return traj;
}

namespace {

// Windowed discrete Fourier magnitude of a complex signal at normalized
// frequency nu (cycles per sample).
double dft_mag(const std::vector<cplx>& w, double nu) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) {
        double ph = -2.0 * kPi * nu * double(i);
        acc += w[i] * cplx{std::cos(ph), std::sin(ph)};
    }
    return std::abs(acc);
}

// Dominant period of component 0 by discrete Fourier analysis: coarse bin
// scan on a decimated, Hann-windowed signal, then a local fine scan and a
// parabolic peak fit.  Returns 0 when no dominant line exists.
double fft_period(const Trajectory& traj) {
    const std::size_t total = traj.states.size();
    if (total < 8) return 0.0;
    const std::size_t stride = (total + 1023) / 1024;
    std::vector<cplx> sig;
    sig.reserve(total / stride + 1);
    for (std::size_t m = 0; m < total; m += stride)
        sig.push_back(get_c(traj.states[m], 0));
    const std::size_t ns = sig.size();
    const double hd = traj.h * double(stride);

    cplx mean{0.0, 0.0};
    for (const cplx& v : sig) mean += v;
    mean /= double(ns);
    std::vector<cplx> w(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        double hann = 0.5 * (1.0 - std::cos(2.0 * kPi * double(i) / double(ns - 1)));
        w[i] = (sig[i] - mean) * hann;
    }

    // Coarse scan over all nonzero bins (both frequency signs).
    double best_mag = -1.0;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k < ns; ++k) {
        double m = dft_mag(w, double(k) / double(ns));
        if (m > best_mag) {
            best_mag = m;
            best_k = k;
        }
    }
    if (best_mag <= 0.0) return 0.0;

    // Fine scan around the winning bin, then a parabola through the best
    // neighborhood on the fine grid.
    const int refine = 64;
    double lo = (double(best_k) - 1.0) / double(ns);
    double hi = (double(best_k) + 1.0) / double(ns);
    double dnu = (hi - lo) / double(refine);
    double fbest = -1.0, nubest = lo;
    for (int i = 0; i <= refine; ++i) {
        double nu = lo + dnu * double(i);
        double m = dft_mag(w, nu);
        if (m > fbest) {
            fbest = m;
            nubest = nu;
        }
    }
    double m_l = dft_mag(w, nubest - dnu);
    double m_r = dft_mag(w, nubest + dnu);
    double denom = m_l - 2.0 * fbest + m_r;
    double delta = (denom < 0.0) ? 0.5 * (m_l - m_r) / denom : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);
    double nu = nubest + delta * dnu;

    // Map to a signed frequency in cycles per sample: nu in (1/2, 1) is the
    // negative side.
    if (nu > 0.5) nu -= 1.0;
    if (nu == 0.0) return 0.0;
    return hd / std::abs(nu);
}

} // namespace

PeriodEstimate detect_period(const LipschitzField& field, const Storage& x0,
                             double search_horizon, const PeriodSettings& settings) {
    if (field.dimension < 1 || x0.size() != 2 * field.dimension)
        throw DimensionMismatch("initial state does not match field dimension");
    double h;
    if (field.L > 0.0) {
        if (search_horizon < 4.0 * kPi / field.L - 1e-12)
            throw HorizonTooShort("search horizon must cover at least 4pi/L");
        h = 2.0 * kPi / (field.L * settings.steps_per_period);
    } else {
        h = search_horizon / (4.0 * settings.steps_per_period);
    }

    Trajectory traj = integrate(field, x0, search_horizon, h);
    const std::size_t total = traj.states.size();
    const std::size_t n2 = x0.size();

    Storage diff(n2);
    std::vector<double> d(total);
    double state_scale = 0.0;
    double diam = 0.0;
    for (std::size_t m = 0; m < total; ++m) {
        const Storage& x = traj.states[m];
        state_scale = std::max(state_scale, norm_eval(field.norm, x));
        for (std::size_t i = 0; i < n2; ++i) diff[i] = x[i] - x0[i];
        d[m] = norm_eval(field.norm, diff);
        diam = std::max(diam, d[m]);
    }
    if (diam <= settings.amplitude_floor * std::max(state_scale, 1e-300))
        throw ConstantSolution("orbit diameter below the amplitude floor");

    const double tol = settings.period_tol_factor * state_scale;
    const double arm_level = settings.rearm_fraction * diam;

    PeriodEstimate est;
    est.grid_h = h;
    est.tol_used = tol;

    Rk4Scratch scratch(n2);
    Storage probe(n2);
    bool armed = false;
    bool found = false;
    for (std::size_t m = 1; m + 1 < total && !found; ++m) {
        if (!armed) {
            if (d[m] >= arm_level) armed = true;
            continue;
        }
        if (!(d[m] <= d[m - 1] && d[m] < d[m + 1])) continue;
        armed = false;

        // Parabola through d^2 (smooth near a close approach, unlike d).
        double a = d[m - 1] * d[m - 1], b = d[m] * d[m], c = d[m + 1] * d[m + 1];
        double denom = a - 2.0 * b + c;
        double delta = (denom > 0.0) ? 0.5 * (a - c) / denom * h : 0.0;
        delta = std::clamp(delta, -0.5 * h, 0.5 * h);

        double s_ref = traj.time_at(m) + delta;
        double residual;
        if (delta != 0.0) {
            rk4_step(field, traj.states[m], delta, probe, scratch);
            for (std::size_t i = 0; i < n2; ++i) diff[i] = probe[i] - x0[i];
            residual = norm_eval(field.norm, diff);
        } else {
            residual = d[m];
        }
        if (residual <= tol) {
            est.T = s_ref;
            est.residual = residual;
            est.method = PeriodEstimate::Method::ReturnMap;
            est.refined = delta != 0.0;
            found = true;
        }
    }
    if (!found) throw NoPeriodFound("no return below tolerance within the horizon");

    est.fft_T = fft_period(traj);
    if (est.fft_T > 0.0) {
        est.fft_rel_dev = std::abs(est.fft_T - est.T) / est.T;
        est.fft_disagrees = est.fft_rel_dev > settings.fft_disagree_tol;
    }
    return est;
}

std::optional<PeriodEstimate> analytic_period(const LinearSystem& system, const Storage& x0) {
    if (system.kind != SystemKind::Planar && system.kind != SystemKind::ComplexDiagonal)
        return std::nullopt;
    if (norm_eval(system.norm, x0) == 0.0)
        throw ConstantSolution("zero amplitude: only the constant solution");
    PeriodEstimate est;
    est.T = 2.0 * kPi / system.L;
    est.residual = 0.0;
    est.method = PeriodEstimate::Method::Analytic;
    est.refined = false;
    return est;
}

void export_csv(const Trajectory& traj, std::ostream& out) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states[0].size() / 2;
    out << "t";
    for (std::size_t j = 0; j < n; ++j) out << ",x_" << j << "_re,x_" << j << "_im";
    out << "\n";
    char buf[32];
    for (std::size_t m = 0; m < traj.states.size(); ++m) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.time_at(m));
        out << buf;
        for (double v : traj.states[m]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << "," << buf;
        }
        out << "\n";
    }
}

} // namespace minper
