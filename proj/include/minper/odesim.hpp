#pragma once
#include <iosfwd>
#include <optional>
#include <vector>

#include "minper/systems.hpp"

namespace minper {

// States on the uniform grid t0 + m*h, m = 0..N.  Immutable after
// construction.
struct Trajectory {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<Storage> states;
    Scalar scalar_field = Scalar::Real;
    LipschitzField field;
    double max_step_error = 0.0; // worst step-halving estimate, relative

    double time_at(std::size_t m) const { return t0 + h * double(m); }
};

// Classical fixed-step 4th-order Runge-Kutta.  Every step is compared with
// two half steps; the worst relative deviation is recorded and must stay
// under step_tol.  h must respect h <= 0.01/L.
Trajectory integrate(const LipschitzField& field, const Storage& x0, double t_end, double h,
                     double step_tol = 1e-9);

struct PeriodEstimate {
    enum class Method { ReturnMap, FFT, Analytic };
    double T = 0.0;
    double residual = 0.0; // norm(x(T) - x(0)) in the attached norm
    Method method = Method::ReturnMap;
    bool refined = false;
    double fft_T = 0.0;       // dominant-frequency cross-check
    double fft_rel_dev = 0.0; // |fft_T - T| / T
    bool fft_disagrees = false;
    double grid_h = 0.0;
    double tol_used = 0.0;
};

struct PeriodSettings {
    double steps_per_period = 4000.0; // grid resolution relative to 2pi/L
    double period_tol_factor = 1e-6;  // acceptance: residual <= factor * max state norm
    double fft_disagree_tol = 0.01;
    double rearm_fraction = 0.3;      // excursion required between return-map minima
    double amplitude_floor = 1e-12;   // relative diameter below which the orbit is constant
};

// Finds the smallest s where the orbit returns to x0: local minima of
// d(s) = norm(x(s) - x0), each refined by a parabola through d^2 on three
// grid points and re-evaluated by a partial integration step.  The result
// is cross-checked against the dominant frequency of component 0.
PeriodEstimate detect_period(const LipschitzField& field, const Storage& x0,
                             double search_horizon, const PeriodSettings& settings = {});

// T = 2pi/L in closed form for the two extremal constructions; nullopt for
// anything else.
std::optional<PeriodEstimate> analytic_period(const LinearSystem& system, const Storage& x0);

// Header `t,x_0_re,x_0_im,...`; one row per grid point, 17 significant
// digits.
void export_csv(const Trajectory& traj, std::ostream& out);

} // namespace minper
