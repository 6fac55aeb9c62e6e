#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "minper/odesim.hpp"
#include "minper/systems.hpp"

namespace minper {

// z_k(t_m) = x_k(t_m) - x_k(t_m + tau) on the grid of the source trajectory,
// restricted to one period [0, T].  zdot comes from field evaluations at the
// two states, never from finite differences of z.
struct ShiftedDifference {
    double tau = 0.0;           // grid-aligned shift actually used
    double tau_requested = 0.0; // caller's tau before rounding
    double h = 0.0;
    std::size_t component = 0;
    std::vector<cplx> z;
    std::vector<cplx> zdot;
    double max_abs = 0.0;           // max |z_m|
    double mean_abs = 0.0;          // |mean of z| over the period (endpoint excluded)
    std::size_t period_intervals = 0; // z has period_intervals + 1 points
    double state_scale = 0.0;       // max |x_k| seen, for the amplitude floor
};

ShiftedDifference shifted_difference(const Trajectory& traj, double T, double tau,
                                     std::size_t component);

struct Lemma1Report {
    double max_violation = 0.0; // max over grid of |zdot_m| - L |z_m|
    double rel_violation = 0.0; // max_violation / max |z|
    double tol = 0.0;
    bool passed = false;
    bool vacuous = false;
};

// Pointwise check of |zdot| <= L |z|.  The inequality is only guaranteed on
// the complex exponential equality family; elsewhere the margins are
// reported raw and a failure means the hypothesis did not apply, not that
// the code is wrong.
Lemma1Report check_lemma1(const ShiftedDifference& sd, double L, double lemma_tol = 1e-6);

struct WirtingerReport {
    double ratio = 0.0;      // integral |zdot|^2 / (L^2 integral |z|^2)
    double num = 0.0;        // integral |zdot|^2 dt
    double den = 0.0;        // integral |z|^2 dt
    double mean_rel = 0.0;   // |mean z| / max |z|
    bool zero_mean_ok = false;
    double budget = 0.0;
    bool passed = false;
};

// Composite-Simpson evaluation of the integral inequality over one period,
// plus the zero-mean premise it rests on.
WirtingerReport check_wirtinger(const ShiftedDifference& sd, double L, double T,
                                double quadrature_budget = 1e-6, double mean_tol = 1e-6);

struct CheckRecord {
    std::string name;
    bool asserted = false; // counts toward all_passed
    bool passed = false;
    bool vacuous = false;
    bool hypothesis_mismatch = false;
    double value = 0.0;
    double tol = 0.0;
};

struct SdSummary {
    double tau_frac = 0.0;
    double tau = 0.0;
    std::size_t component = 0;
    double amplitude = 0.0; // max |z|
    double lemma1_rel = 0.0;
    double wirtinger_ratio = 0.0;
    double mean_rel = 0.0;
    bool vacuous = false;
};

struct BoundSettings {
    double horizon_periods = 8.0;
    double scout_steps_per_period = 4000.0;
    std::size_t intervals_per_period = 4096; // fine grid, rounded to a multiple of 8
    std::vector<double> tau_fractions = {0.125, 0.25, 0.5};
    double report_tol = 1e-3;       // on the normalized-period margin
    double quadrature_budget = 1e-6;
    double lemma_tol = 1e-6;
    double mean_tol = 1e-6;
    double period_tol_factor = 1e-6;
    std::uint64_t seed = 0; // provenance echo only
};

struct BoundReport {
    bool vacuous = false;
    std::string note;
    double T = 0.0;
    double L = 0.0;
    double k = 0.0;      // normalized period T*L
    double margin = 0.0; // k - 2pi
    PeriodEstimate period;
    double lemma1_max_violation = 0.0; // max relative violation over all cuts
    double wirtinger_ratio = 0.0;      // max over all cuts
    double max_mean_rel = 0.0;
    std::vector<SdSummary> sds;
    std::vector<CheckRecord> checks;
    bool all_passed = false;
    double h_fine = 0.0;
    std::size_t intervals = 0;
    std::uint64_t seed = 0;
    std::string system_kind;
};

// Detects the period, re-integrates on a period-aligned grid, and runs the
// pointwise, integral, and zero-mean checks for every (tau, component) cut.
// A missing or constant orbit degrades to a vacuous report, not an error.
BoundReport bound_check(const LipschitzField& field, const Storage& x0,
                        const BoundSettings& settings = {});

struct LipschitzEstimate {
    double estimate = 0.0;
    int pairs_used = 0;
};

// Sampled lower bound: max over random pairs of norm(f(x')-f(x''))/norm(x'-x'').
LipschitzEstimate estimate_lipschitz(const LipschitzField& field, const Box& box, int pairs,
                                     std::uint64_t seed, bool parallel = true);

struct EnsembleSpec {
    enum class Family { Antisymmetric, AntiHermitian, RotatedNormal, Skew, Union };
    Family family = Family::Union;
    int n_min = 2, n_max = 6;   // anti-symmetric / anti-Hermitian dimensions
    int rn_min = 2, rn_max = 4; // rotated-normal dimensions
    double scale = 1.0;
    double ratio_min = 1.05, ratio_max = 3.0; // skew-pair frequency ratio
    double skew_a_min = 0.5, skew_a_max = 2.0;
};

struct DrawRecord {
    std::size_t index = 0;
    bool ok = false;
    std::string family;
    double k = 0.0, T = 0.0, L = 0.0, margin = 0.0;
    std::string error;
    std::string system_spec; // JSON, reproducible via the matrix system format
    BoundReport report;
};

struct SearchSummary {
    std::size_t count = 0, ok_count = 0, failed = 0;
    double min_k = 0.0;
    std::size_t argmin = 0;
    double q25 = 0.0, median = 0.0, q75 = 0.0, max_k = 0.0;
    double max_mean_rel = 0.0; // worst zero-mean deviation across all draws
    bool floor_violated = false;
    std::string offender_spec;
    std::vector<DrawRecord> draws;
};

// Seeded ensemble probe of the normalized-period floor: bound_check over
// `count` draws, merged by draw index (bit-identical serial or parallel).
SearchSummary search_min_k(const EnsembleSpec& ensemble, std::size_t count,
                           std::uint64_t seed, const BoundSettings& settings = {},
                           bool parallel = true);

} // namespace minper
