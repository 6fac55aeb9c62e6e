#include "minper/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "minper/json_io.hpp"
#include "minper/parallel.hpp"
#include "minper/rng.hpp"

namespace minper {

namespace {

constexpr double kPi = 3.14159265358979323846;

const char* kind_name(SystemKind k) {
    switch (k) {
        case SystemKind::General: return "general";
        case SystemKind::Planar: return "planar";
        case SystemKind::ComplexDiagonal: return "complex_diagonal";
        case SystemKind::Antisymmetric: return "antisymmetric";
        case SystemKind::AntiHermitian: return "antihermitian";
        case SystemKind::RotatedNormal: return "rotated_normal";
        case SystemKind::SkewPair: return "skew_pair";
        case SystemKind::Nonlinear: return "nonlinear";
    }
    return "unknown";
}

// Assembles a ShiftedDifference from precomputed field values along the
// grid.  fvals[m] = f(x(t_m)) for every m the cut touches.
ShiftedDifference make_sd(const Trajectory& traj, const std::vector<Storage>& fvals,
                          double T, double tau, std::size_t component, double state_scale) {
    const std::size_t n = traj.field.dimension;
    if (component >= n) throw ComponentOutOfRange("component index exceeds dimension");
    const double h = traj.h;
    const std::size_t K = static_cast<std::size_t>(std::llround(T / h));
    if (K < 2) throw InvalidArgument("period shorter than two grid steps");
    const std::size_t mt = static_cast<std::size_t>(std::llround(tau / h));
    if (K + mt >= traj.states.size())
        throw HorizonTooShort("trajectory does not cover one period plus the shift");

    ShiftedDifference sd;
    sd.tau = double(mt) * h;
    sd.tau_requested = tau;
    sd.h = h;
    sd.component = component;
    sd.period_intervals = K;
    sd.state_scale = state_scale;
    sd.z.resize(K + 1);
    sd.zdot.resize(K + 1);

    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m <= K; ++m) {
        cplx zm = get_c(traj.states[m], component) - get_c(traj.states[m + mt], component);
        sd.z[m] = zm;
        sd.zdot[m] = get_c(fvals[m], component) - get_c(fvals[m + mt], component);
        sd.max_abs = std::max(sd.max_abs, std::abs(zm));
        if (m < K) acc += zm;
    }
    sd.mean_abs = std::abs(acc) / double(K);
    return sd;
}

std::vector<Storage> eval_fields(const Trajectory& traj, std::size_t upto) {
    std::vector<Storage> fvals(upto + 1);
    const std::size_t len = 2 * traj.field.dimension;
    for (std::size_t m = 0; m <= upto; ++m) {
        fvals[m].resize(len);
        traj.field.eval(traj.states[m], fvals[m]);
    }
    return fvals;
}

double trajectory_scale(const Trajectory& traj, std::size_t upto) {
    double s = 0.0;
    for (std::size_t m = 0; m <= upto && m < traj.states.size(); ++m)
        s = std::max(s, norm_eval(traj.field.norm, traj.states[m]));
    return s;
}

} // namespace

ShiftedDifference shifted_difference(const Trajectory& traj, double T, double tau,
                                     std::size_t component) {
    if (component >= traj.field.dimension)
        throw ComponentOutOfRange("component index exceeds dimension");
    const double h = traj.h;
    const std::size_t K = static_cast<std::size_t>(std::llround(T / h));
    const std::size_t mt = static_cast<std::size_t>(std::llround(tau / h));
    if (K + mt >= traj.states.size())
        throw HorizonTooShort("trajectory does not cover one period plus the shift");
    std::vector<Storage> fvals = eval_fields(traj, K + mt);
    return make_sd(traj, fvals, T, tau, component, trajectory_scale(traj, K + mt));
}

Lemma1Report check_lemma1(const ShiftedDifference& sd, double L, double lemma_tol) {
    if (sd.max_abs <= 1e-12 * std::max(sd.state_scale, 1e-300))
        throw EmptyDifference("shifted difference below the amplitude floor");
    Lemma1Report r;
    r.tol = lemma_tol;
    for (std::size_t m = 0; m < sd.z.size(); ++m)
        r.max_violation = std::max(r.max_violation,
                                   std::abs(sd.zdot[m]) - L * std::abs(sd.z[m]));
    r.rel_violation = r.max_violation / sd.max_abs;
    r.passed = r.max_violation <= lemma_tol * sd.max_abs;
    return r;
}

WirtingerReport check_wirtinger(const ShiftedDifference& sd, double L, double T,
                                double quadrature_budget, double mean_tol) {
    const std::size_t M = sd.period_intervals;
    if (M % 2 != 0) throw OddGridCount("Simpson quadrature needs an even interval count");
    if (!(L > 0.0)) throw InvalidArgument("Lipschitz constant must be positive");

    auto simpson = [&](const std::vector<cplx>& v) {
        double s = std::norm(v[0]) + std::norm(v[M]);
        for (std::size_t m = 1; m < M; ++m)
            s += std::norm(v[m]) * ((m % 2 == 1) ? 4.0 : 2.0);
        return s * sd.h / 3.0;
    };

    WirtingerReport r;
    r.budget = quadrature_budget;
    r.num = simpson(sd.zdot);
    r.den = simpson(sd.z);
    double floor = 1e-12 * std::max(sd.state_scale, 1e-300);
    if (r.den <= floor * floor * T)
        throw ZeroDenominator("|z|^2 integrates to zero over the period");
    r.ratio = r.num / (L * L * r.den);
    r.mean_rel = (sd.max_abs > 0.0) ? sd.mean_abs / sd.max_abs : 0.0;
    r.zero_mean_ok = r.mean_rel <= mean_tol;
    r.passed = r.ratio <= 1.0 + quadrature_budget;
    return r;
}

namespace {

BoundReport vacuous_report(const LipschitzField& field, const BoundSettings& settings) {
    BoundReport rep;
    rep.vacuous = true;
    rep.note = "bound vacuously satisfied - no non-constant periodic solution found";
    rep.L = field.L;
    rep.seed = settings.seed;
    rep.system_kind = kind_name(field.kind);
    rep.all_passed = true;
    CheckRecord c;
    c.name = "period";
    c.asserted = false;
    c.passed = false;
    c.vacuous = true;
    rep.checks.push_back(std::move(c));
    return rep;
}

std::string frac_label(double frac) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", frac);
    return buf;
}

} // namespace

BoundReport bound_check(const LipschitzField& field, const Storage& x0,
                        const BoundSettings& settings) {
    if (field.provenance == Provenance::Estimated)
        throw InvalidArgument(
            "bound_check needs an exact or declared Lipschitz constant; an estimated "
            "lower bound cannot certify the normalized period");
    const double L = field.L;
    if (L <= 0.0) return vacuous_report(field, settings);

    PeriodSettings ps;
    ps.steps_per_period = settings.scout_steps_per_period;
    ps.period_tol_factor = settings.period_tol_factor;
    const double horizon = settings.horizon_periods * 2.0 * kPi / L;

    PeriodEstimate est;
    try {
        est = detect_period(field, x0, horizon, ps);
    } catch (const NoPeriodFound&) {
        return vacuous_report(field, settings);
    } catch (const ConstantSolution&) {
        return vacuous_report(field, settings);
    }

    const double T = est.T;
    BoundReport rep;
    rep.T = T;
    rep.L = L;
    rep.k = T * L;
    rep.margin = rep.k - 2.0 * kPi;
    rep.period = est;
    rep.seed = settings.seed;
    rep.system_kind = kind_name(field.kind);

    // Re-integrate on a grid aligned to the detected period so the cuts span
    // [0, T] exactly; sampled means of periodic modes then cancel to the
    // detection error instead of to a grid-misalignment bias.
    std::size_t M = settings.intervals_per_period;
    std::size_t m_stab = static_cast<std::size_t>(std::ceil(200.0 * T * L));
    M = std::max(M, m_stab);
    M = (M + 7) / 8 * 8;
    const double hf = T / double(M);
    rep.h_fine = hf;
    rep.intervals = M;

    double max_frac = 0.0;
    for (double f : settings.tau_fractions) max_frac = std::max(max_frac, f);
    const std::size_t mt_max =
        static_cast<std::size_t>(std::llround(max_frac * double(M)));
    const double t_end = hf * double(M + mt_max + 2);

    Trajectory fine = integrate(field, x0, t_end, hf);
    const std::size_t upto = std::min(M + mt_max + 1, fine.states.size() - 1);
    std::vector<Storage> fvals = eval_fields(fine, upto);
    const double scale = trajectory_scale(fine, upto);

    const bool lemma_asserted = field.kind == SystemKind::ComplexDiagonal;
    const bool wirt_asserted = field.kind != SystemKind::Nonlinear;

    {
        CheckRecord c;
        c.name = "bound_margin";
        c.asserted = true;
        c.value = rep.margin;
        c.tol = settings.report_tol;
        c.passed = rep.margin >= -settings.report_tol;
        rep.checks.push_back(std::move(c));
    }
    {
        CheckRecord c;
        c.name = "fft_agreement";
        c.asserted = false;
        c.value = est.fft_rel_dev;
        c.tol = 0.01;
        c.passed = !est.fft_disagrees;
        rep.checks.push_back(std::move(c));
    }

    for (double frac : settings.tau_fractions) {
        const double tau = double(static_cast<std::size_t>(std::llround(frac * double(M)))) * hf;
        for (std::size_t comp = 0; comp < field.dimension; ++comp) {
            SdSummary summary;
            summary.tau_frac = frac;
            summary.tau = tau;
            summary.component = comp;
            const std::string suffix =
                " tau=" + frac_label(frac) + "T comp=" + std::to_string(comp);
            try {
                ShiftedDifference sd = make_sd(fine, fvals, T, tau, comp, scale);
                summary.amplitude = sd.max_abs;

                Lemma1Report lem = check_lemma1(sd, L, settings.lemma_tol);
                summary.lemma1_rel = lem.rel_violation;
                rep.lemma1_max_violation =
                    std::max(rep.lemma1_max_violation, lem.rel_violation);
                CheckRecord cl;
                cl.name = "lemma1" + suffix;
                cl.asserted = lemma_asserted;
                cl.passed = lem.passed;
                cl.hypothesis_mismatch = !lem.passed && !lemma_asserted;
                cl.value = lem.rel_violation;
                cl.tol = settings.lemma_tol;
                rep.checks.push_back(std::move(cl));

                WirtingerReport w =
                    check_wirtinger(sd, L, T, settings.quadrature_budget, settings.mean_tol);
                summary.wirtinger_ratio = w.ratio;
                summary.mean_rel = w.mean_rel;
                rep.wirtinger_ratio = std::max(rep.wirtinger_ratio, w.ratio);
                rep.max_mean_rel = std::max(rep.max_mean_rel, w.mean_rel);
                CheckRecord cw;
                cw.name = "wirtinger" + suffix;
                cw.asserted = wirt_asserted;
                cw.passed = w.passed;
                cw.hypothesis_mismatch = !w.passed && !wirt_asserted;
                cw.value = w.ratio;
                cw.tol = 1.0 + settings.quadrature_budget;
                rep.checks.push_back(std::move(cw));

                CheckRecord cm;
                cm.name = "zero_mean" + suffix;
                cm.asserted = true;
                cm.passed = w.zero_mean_ok;
                cm.value = w.mean_rel;
                cm.tol = settings.mean_tol;
                rep.checks.push_back(std::move(cm));
            } catch (const EmptyDifference&) {
                summary.vacuous = true;
                CheckRecord cv;
                cv.name = "cut" + suffix;
                cv.asserted = false;
                cv.vacuous = true;
                rep.checks.push_back(std::move(cv));
            } catch (const ZeroDenominator&) {
                summary.vacuous = true;
                CheckRecord cv;
                cv.name = "wirtinger" + suffix;
                cv.asserted = false;
                cv.vacuous = true;
                rep.checks.push_back(std::move(cv));
            }
            rep.sds.push_back(std::move(summary));
        }
    }

    rep.all_passed = true;
    for (const CheckRecord& c : rep.checks)
        if (c.asserted && !c.passed) rep.all_passed = false;
    return rep;
}

LipschitzEstimate estimate_lipschitz(const LipschitzField& field, const Box& box, int pairs,
                                     std::uint64_t seed, bool parallel) {
    const std::size_t len = 2 * field.dimension;
    if (box.lo.size() != len || box.hi.size() != len)
        throw DimensionMismatch("box bounds must cover every storage coordinate");
    if (pairs < 1) throw InvalidArgument("need at least one sample pair");
    double total_width = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        double w = box.hi[i] - box.lo[i];
        if (w < 0.0) throw DegenerateBox("box has inverted bounds");
        total_width += w;
    }
    if (total_width <= 0.0) throw DegenerateBox("box has zero volume in every direction");
    if (field.scalar_field == Scalar::Real)
        for (std::size_t j = 0; j < field.dimension; ++j)
            if (box.lo[2 * j + 1] != 0.0 || box.hi[2 * j + 1] != 0.0)
                throw ScalarFieldMismatch(
                    "real field: imaginary coordinates must be pinned to zero");

    Storage widths(len);
    for (std::size_t i = 0; i < len; ++i) widths[i] = box.hi[i] - box.lo[i];
    const double denom_floor = 1e-14 * norm_eval(field.norm, widths);

    std::vector<double> ratio(pairs, -1.0);
    auto run_one = [&](int i) {
        Rng g = make_stream(seed, static_cast<std::uint64_t>(i));
        Storage xp(len), xq(len), fp(len), fq(len), d(len);
        for (std::size_t c = 0; c < len; ++c) xp[c] = uniform(g, box.lo[c], box.hi[c]);
        for (std::size_t c = 0; c < len; ++c) xq[c] = uniform(g, box.lo[c], box.hi[c]);
        for (std::size_t c = 0; c < len; ++c) d[c] = xp[c] - xq[c];
        double dn = norm_eval(field.norm, d);
        if (dn <= denom_floor) return;
        field.eval(xp, fp);
        field.eval(xq, fq);
        for (std::size_t c = 0; c < len; ++c) d[c] = fp[c] - fq[c];
        ratio[i] = norm_eval(field.norm, d) / dn;
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < pairs; ++i) run_one(i);
    } else {
        for (int i = 0; i < pairs; ++i) run_one(i);
    }

    LipschitzEstimate est;
    for (int i = 0; i < pairs; ++i) {
        if (ratio[i] < 0.0) continue;
        ++est.pairs_used;
        est.estimate = std::max(est.estimate, ratio[i]);
    }
    return est;
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    double idx = p * double(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double w = idx - double(lo);
    return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

} // namespace

SearchSummary search_min_k(const EnsembleSpec& ensemble, std::size_t count,
                           std::uint64_t seed, const BoundSettings& settings,
                           bool parallel) {
    SearchSummary sum;
    sum.count = count;
    sum.draws.resize(count);

    auto family_for = [&](std::size_t i) {
        if (ensemble.family != EnsembleSpec::Family::Union) return ensemble.family;
        switch (i % 3) {
            case 0: return EnsembleSpec::Family::Antisymmetric;
            case 1: return EnsembleSpec::Family::RotatedNormal;
            default: return EnsembleSpec::Family::Skew;
        }
    };

    auto run_one = [&](std::size_t i) {
        DrawRecord& rec = sum.draws[i];
        rec.index = i;
        const std::uint64_t sub = stream_seed(seed, i);
        try {
            LinearSystem sys;
            switch (family_for(i)) {
                case EnsembleSpec::Family::Antisymmetric: {
                    int span = ensemble.n_max - ensemble.n_min + 1;
                    int n = ensemble.n_min + int((i / 3) % std::size_t(std::max(span, 1)));
                    sys = random_antisymmetric(std::size_t(n), ensemble.scale, sub);
                    rec.family = "antisymmetric";
                    break;
                }
                case EnsembleSpec::Family::AntiHermitian: {
                    int span = ensemble.n_max - ensemble.n_min + 1;
                    int n = ensemble.n_min + int((i / 3) % std::size_t(std::max(span, 1)));
                    sys = random_antihermitian(std::size_t(n), ensemble.scale, sub);
                    rec.family = "antihermitian";
                    break;
                }
                case EnsembleSpec::Family::RotatedNormal: {
                    int span = ensemble.rn_max - ensemble.rn_min + 1;
                    int n = ensemble.rn_min + int((i / 3) % std::size_t(std::max(span, 1)));
                    sys = random_rotated_normal(std::size_t(n), sub);
                    rec.family = "rotated_normal";
                    break;
                }
                case EnsembleSpec::Family::Skew: {
                    Rng g = make_stream(seed, i);
                    double a = uniform(g, ensemble.skew_a_min, ensemble.skew_a_max);
                    double r = uniform(g, ensemble.ratio_min, ensemble.ratio_max);
                    bool up = uniform01(g) < 0.5;
                    sys = skew_pair(a, up ? a * r : a / r);
                    rec.family = "skew";
                    break;
                }
                case EnsembleSpec::Family::Union:
                    break; // unreachable
            }
            BoundSettings bs = settings;
            bs.seed = sub;
            rec.report = bound_check(sys.field, sys.default_x0, bs);
            rec.system_spec = system_spec_json(sys.A, sys.norm, sys.default_x0);
            if (rec.report.vacuous) {
                rec.error = "vacuous: " + rec.report.note;
                return;
            }
            rec.ok = true;
            rec.k = rec.report.k;
            rec.T = rec.report.T;
            rec.L = rec.report.L;
            rec.margin = rec.report.margin;
        } catch (const Error& e) {
            rec.error = e.what();
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < long(count); ++i) run_one(std::size_t(i));
    } else {
        for (std::size_t i = 0; i < count; ++i) run_one(i);
    }

    std::vector<double> ks;
    bool first = true;
    for (const DrawRecord& rec : sum.draws) {
        if (!rec.ok) {
            ++sum.failed;
            continue;
        }
        ++sum.ok_count;
        ks.push_back(rec.k);
        sum.max_mean_rel = std::max(sum.max_mean_rel, rec.report.max_mean_rel);
        if (first || rec.k < sum.min_k) {
            sum.min_k = rec.k;
            sum.argmin = rec.index;
            first = false;
        }
    }
    std::sort(ks.begin(), ks.end());
    sum.q25 = quantile(ks, 0.25);
    sum.median = quantile(ks, 0.5);
    sum.q75 = quantile(ks, 0.75);
    sum.max_k = ks.empty() ? 0.0 : ks.back();
    if (sum.ok_count > 0 && sum.min_k < 2.0 * kPi - settings.report_tol) {
        sum.floor_violated = true;
        sum.offender_spec = sum.draws[sum.argmin].system_spec;
    }
    return sum;
}

} // namespace minper
