// Command-line front end.  Every subcommand reads JSON specs (inline or from
// file), writes JSON/CSV with 17 significant digits, and is deterministic
// given the same inputs and seeds.
//
// Exit codes: 0 success, 1 a verification check failed, 2 input error,
// 3 internal numeric error.
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "minper/json_io.hpp"
#include "minper/parallel.hpp"

using namespace minper;

namespace {

// Accepts either inline JSON (first non-space char '{' or '[') or a path.
njson arg_json(const std::string& s) {
    std::size_t i = s.find_first_not_of(" \t\n\r");
    if (i != std::string::npos && (s[i] == '{' || s[i] == '['))
        return parse_json(s);
    return load_json_file(s);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file: " + path);
    out << text;
}

template <class Fn>
void with_stream(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file: " + path);
    fn(out);
}

struct LoadedSystem {
    LinearSystem sys;
    Storage x0;
};

LoadedSystem load_system(const std::string& spec_arg, const std::string& x0_arg) {
    ParsedSystem ps = parse_system(arg_json(spec_arg));
    Storage x0 = ps.x0 ? *ps.x0 : ps.system.default_x0;
    if (!x0_arg.empty()) {
        ParsedVector v = parse_vector(arg_json(x0_arg));
        if (v.field == Scalar::Complex && ps.system.field.scalar_field == Scalar::Real)
            throw ScalarFieldMismatch("x0 has complex entries but the system is real");
        if (dim_of(v.data) != ps.system.field.dimension)
            throw DimensionMismatch("x0 length differs from the system dimension");
        x0 = std::move(v.data);
    }
    return {std::move(ps.system), std::move(x0)};
}

// Period-aligned fine grid shared by the lemma1 / wirtinger commands; the
// same construction verify-bound uses internally.
struct FineCut {
    Trajectory traj;
    double T = 0.0;
};

FineCut fine_trajectory(const LinearSystem& sys, const Storage& x0, double tau_frac,
                        double horizon_periods, std::size_t intervals_per_period) {
    const double L = sys.field.L;
    if (L <= 0.0)
        throw ConstantSolution("system has Lipschitz constant 0: only constant solutions");
    PeriodEstimate scout = detect_period(sys.field, x0, horizon_periods * 2.0 * M_PI / L);
    const double T = scout.T;
    std::size_t M = std::max<std::size_t>(intervals_per_period,
                                          std::size_t(std::ceil(200.0 * T * L)));
    M = (M + 7) / 8 * 8;
    const double hf = T / double(M);
    const auto mt = std::llround(tau_frac * T / hf);
    const double t_end = hf * double(M + mt + 2);
    return {integrate(sys.field, x0, t_end, hf), T};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal-period verification toolkit for Lipschitz ODE systems"};
    app.require_subcommand(1);
    int code = 0;

    // ---- norm ----
    std::string n_vec, n_norm, n_out;
    auto* c_norm = app.add_subcommand("norm", "Evaluate a vector norm");
    c_norm->add_option("--vec", n_vec, "vector (JSON file or inline array)")->required();
    c_norm->add_option("--norm", n_norm, "norm spec (JSON file or inline object)")->required();
    c_norm->add_option("--out", n_out, "output path (default stdout)");
    c_norm->callback([&] {
        ParsedVector v = parse_vector(arg_json(n_vec));
        VectorNorm norm = parse_norm(arg_json(n_norm));
        norm.scalar_field = v.field;
        emit(g17(norm_eval(norm, v.data)) + "\n", n_out);
    });

    // ---- induced ----
    std::string i_mat, i_norm, i_out;
    OptimizerConfig i_cfg;
    bool i_serial = false;
    auto* c_ind = app.add_subcommand("induced", "Induced operator norm of a matrix");
    c_ind->add_option("--matrix", i_mat, "matrix (JSON file or inline rows)")->required();
    c_ind->add_option("--norm", i_norm, "norm spec")->required();
    c_ind->add_option("--out", i_out, "output path (default stdout)");
    c_ind->add_option("--restarts", i_cfg.restarts, "multistart restarts");
    c_ind->add_option("--iters", i_cfg.iterations, "iterations per restart");
    c_ind->add_option("--seed", i_cfg.seed, "rng seed");
    c_ind->add_flag("--force-multistart", i_cfg.force_multistart,
                    "skip the exact l1/l2/linf routes");
    c_ind->add_flag("--serial", i_serial, "disable the parallel restart fan-out");
    c_ind->callback([&] {
        Matrix a = parse_matrix(arg_json(i_mat));
        VectorNorm norm = parse_norm(arg_json(i_norm));
        if (a.field() == Scalar::Real) norm.scalar_field = Scalar::Real;
        i_cfg.parallel = !i_serial;
        emit(induced_json(induced_norm(a, norm, i_cfg)), i_out);
    });

    // ---- spectrum ----
    std::string s_mat, s_out;
    auto* c_spec = app.add_subcommand("spectrum", "Eigenvalues sorted by modulus");
    c_spec->add_option("--matrix", s_mat, "matrix (JSON file or inline rows)")->required();
    c_spec->add_option("--out", s_out, "output path (default stdout)");
    c_spec->callback([&] { emit(spectral_json(eigenvalues(parse_matrix(arg_json(s_mat)))), s_out); });

    // ---- attainment ----
    std::string a_mat, a_norm, a_out;
    OptimizerConfig a_cfg;
    bool a_serial = false;
    double a_tol = 1e-6;
    auto* c_att = app.add_subcommand("attainment",
                                     "Compare induced norm with spectral radius");
    c_att->add_option("--matrix", a_mat, "matrix (JSON file or inline rows)")->required();
    c_att->add_option("--norm", a_norm, "norm spec")->required();
    c_att->add_option("--out", a_out, "output path (default stdout)");
    c_att->add_option("--restarts", a_cfg.restarts, "multistart restarts");
    c_att->add_option("--iters", a_cfg.iterations, "iterations per restart");
    c_att->add_option("--seed", a_cfg.seed, "rng seed");
    c_att->add_option("--tol-attain", a_tol, "equality tolerance");
    c_att->add_flag("--serial", a_serial, "disable the parallel restart fan-out");
    c_att->callback([&] {
        Matrix a = parse_matrix(arg_json(a_mat));
        VectorNorm norm = parse_norm(arg_json(a_norm));
        if (a.field() == Scalar::Real) norm.scalar_field = Scalar::Real;
        a_cfg.parallel = !a_serial;
        emit(attainment_json(check_attainment(a, norm, a_cfg, a_tol)), a_out);
    });

    // ---- simulate ----
    std::string sim_sys, sim_x0, sim_out;
    double sim_tend = 0.0, sim_h = 0.0, sim_steptol = 1e-9;
    auto* c_sim = app.add_subcommand("simulate", "Integrate a system; trajectory CSV");
    c_sim->add_option("--system", sim_sys, "system spec (JSON file or inline)")->required();
    c_sim->add_option("--x0", sim_x0, "initial state (overrides the spec)");
    c_sim->add_option("--t-end", sim_tend, "integration horizon (default two periods 4pi/L)");
    c_sim->add_option("--step", sim_h, "step size (default 0.005/L)");
    c_sim->add_option("--tol-step", sim_steptol, "step-halving error tolerance");
    c_sim->add_option("--out", sim_out, "output CSV path (default stdout)");
    c_sim->callback([&] {
        LoadedSystem ls = load_system(sim_sys, sim_x0);
        const double L = ls.sys.field.L;
        double t_end = sim_tend, h = sim_h;
        if (t_end <= 0.0) {
            if (L <= 0.0) throw InvalidArgument("--t-end is required when L = 0");
            t_end = 4.0 * M_PI / L;
        }
        if (h <= 0.0) {
            if (L <= 0.0) throw InvalidArgument("--h is required when L = 0");
            h = 0.005 / L;
        }
        Trajectory traj = integrate(ls.sys.field, ls.x0, t_end, h, sim_steptol);
        with_stream(sim_out, [&](std::ostream& os) { export_csv(traj, os); });
    });

    // ---- period ----
    std::string p_sys, p_x0, p_out;
    double p_horizon = 0.0;
    PeriodSettings p_set;
    auto* c_per = app.add_subcommand("period", "Detect the orbit period");
    c_per->add_option("--system", p_sys, "system spec (JSON file or inline)")->required();
    c_per->add_option("--x0", p_x0, "initial state (overrides the spec)");
    c_per->add_option("--horizon", p_horizon, "search horizon (default 16pi/L)");
    c_per->add_option("--steps-per-period", p_set.steps_per_period, "grid resolution");
    c_per->add_option("--tol-period", p_set.period_tol_factor,
                      "residual acceptance factor");
    c_per->add_option("--out", p_out, "output path (default stdout)");
    c_per->callback([&] {
        LoadedSystem ls = load_system(p_sys, p_x0);
        double horizon = p_horizon;
        if (horizon <= 0.0) {
            if (ls.sys.field.L <= 0.0)
                throw InvalidArgument("--horizon is required when L = 0");
            horizon = 16.0 * M_PI / ls.sys.field.L;
        }
        emit(period_json(detect_period(ls.sys.field, ls.x0, horizon, p_set)), p_out);
    });

    // ---- verify-bound ----
    std::string vb_sys, vb_x0, vb_out, vb_traj;
    BoundSettings vb_set;
    std::vector<double> vb_taus;
    auto* c_vb = app.add_subcommand("verify-bound",
                                    "Period detection plus the full check battery");
    c_vb->add_option("--system", vb_sys, "system spec (JSON file or inline)")->required();
    c_vb->add_option("--x0", vb_x0, "initial state (overrides the spec)");
    c_vb->add_option("--horizon", vb_set.horizon_periods,
                     "search horizon in multiples of 2pi/L");
    c_vb->add_option("--intervals", vb_set.intervals_per_period,
                     "fine-grid intervals per period");
    c_vb->add_option("--tau", vb_taus, "shift fractions of T (repeatable)");
    c_vb->add_option("--tol-report", vb_set.report_tol, "margin report tolerance");
    c_vb->add_option("--tol-quadrature", vb_set.quadrature_budget,
                     "integral-ratio budget");
    c_vb->add_option("--tol-lemma", vb_set.lemma_tol, "pointwise check tolerance");
    c_vb->add_option("--tol-mean", vb_set.mean_tol, "zero-mean tolerance");
    c_vb->add_option("--tol-period", vb_set.period_tol_factor,
                     "period residual factor");
    c_vb->add_option("--seed", vb_set.seed, "seed echoed into the report");
    c_vb->add_option("--out", vb_out, "report path (default stdout)");
    c_vb->add_option("--traj", vb_traj, "also write the fine trajectory CSV here");
    c_vb->callback([&] {
        LoadedSystem ls = load_system(vb_sys, vb_x0);
        if (!vb_taus.empty()) vb_set.tau_fractions = vb_taus;
        BoundReport rep = bound_check(ls.sys.field, ls.x0, vb_set);
        emit(bound_report_json(rep), vb_out);
        if (rep.vacuous) {
            std::cerr << "warning: " << rep.note << "\n";
        } else if (!vb_traj.empty()) {
            Trajectory traj =
                integrate(ls.sys.field, ls.x0, rep.h_fine * double(rep.intervals), rep.h_fine);
            with_stream(vb_traj, [&](std::ostream& os) { export_csv(traj, os); });
        }
        if (!rep.all_passed) code = 1;
    });

    // ---- lemma1 ----
    std::string l1_sys, l1_x0, l1_out;
    double l1_frac = 0.5, l1_tol = 1e-6;
    std::size_t l1_comp = 0;
    auto* c_l1 = app.add_subcommand("lemma1",
                                    "Pointwise |dz/dt| <= L|z| on one shifted difference");
    c_l1->add_option("--system", l1_sys, "system spec (JSON file or inline)")->required();
    c_l1->add_option("--x0", l1_x0, "initial state (overrides the spec)");
    c_l1->add_option("--tau-frac", l1_frac, "shift as a fraction of T (default 0.5)");
    c_l1->add_option("--component", l1_comp, "state component index");
    c_l1->add_option("--tol-lemma", l1_tol, "violation tolerance");
    c_l1->add_option("--out", l1_out, "output path (default stdout)");
    c_l1->callback([&] {
        LoadedSystem ls = load_system(l1_sys, l1_x0);
        FineCut fc = fine_trajectory(ls.sys, ls.x0, l1_frac, 8.0, 4096);
        ShiftedDifference sd =
            shifted_difference(fc.traj, fc.T, l1_frac * fc.T, l1_comp);
        Lemma1Report rep = check_lemma1(sd, ls.sys.field.L, l1_tol);
        // The pointwise inequality is a theorem only on the complex-diagonal
        // equality family; elsewhere a failure is a hypothesis mismatch, not
        // an error.
        const bool asserted = ls.sys.kind == SystemKind::ComplexDiagonal;
        emit(lemma1_json(rep, sd, asserted), l1_out);
        if (asserted && !rep.passed) code = 1;
    });

    // ---- wirtinger ----
    std::string w_sys, w_x0, w_out;
    double w_frac = 0.5, w_budget = 1e-6, w_meantol = 1e-6;
    std::size_t w_comp = 0;
    auto* c_w = app.add_subcommand("wirtinger",
                                   "Integral inequality on one shifted difference");
    c_w->add_option("--system", w_sys, "system spec (JSON file or inline)")->required();
    c_w->add_option("--x0", w_x0, "initial state (overrides the spec)");
    c_w->add_option("--tau-frac", w_frac, "shift as a fraction of T (default 0.5)");
    c_w->add_option("--component", w_comp, "state component index");
    c_w->add_option("--tol-quadrature", w_budget, "ratio budget above 1");
    c_w->add_option("--tol-mean", w_meantol, "zero-mean tolerance");
    c_w->add_option("--out", w_out, "output path (default stdout)");
    c_w->callback([&] {
        LoadedSystem ls = load_system(w_sys, w_x0);
        FineCut fc = fine_trajectory(ls.sys, ls.x0, w_frac, 8.0, 4096);
        ShiftedDifference sd = shifted_difference(fc.traj, fc.T, w_frac * fc.T, w_comp);
        WirtingerReport rep = check_wirtinger(sd, ls.sys.field.L, fc.T, w_budget, w_meantol);
        const bool asserted = ls.sys.kind != SystemKind::Nonlinear;
        emit(wirtinger_json(rep, sd, asserted), w_out);
        if ((asserted && !rep.passed) || !rep.zero_mean_ok) code = 1;
    });

    // ---- lipschitz-est ----
    std::string le_sys, le_box, le_out;
    int le_pairs = 10000;
    std::uint64_t le_seed = 1;
    bool le_serial = false;
    auto* c_le = app.add_subcommand("lipschitz-est",
                                    "Sampled lower bound on the Lipschitz constant");
    c_le->add_option("--system", le_sys, "system spec (JSON file or inline)")->required();
    c_le->add_option("--box", le_box, "sampling box {lo, hi} (default [-1,1]^n)");
    c_le->add_option("--pairs", le_pairs, "sample pairs");
    c_le->add_option("--seed", le_seed, "rng seed");
    c_le->add_flag("--serial", le_serial, "disable the parallel sampling fan-out");
    c_le->add_option("--out", le_out, "output path (default stdout)");
    c_le->callback([&] {
        LoadedSystem ls = load_system(le_sys, "");
        const std::size_t n = ls.sys.field.dimension;
        Box box;
        if (!le_box.empty()) {
            box = parse_box(arg_json(le_box), n);
        } else {
            box.lo.assign(2 * n, 0.0);
            box.hi.assign(2 * n, 0.0);
            const bool cx = ls.sys.field.scalar_field == Scalar::Complex;
            for (std::size_t j = 0; j < n; ++j) {
                box.lo[2 * j] = -1.0;
                box.hi[2 * j] = 1.0;
                if (cx) {
                    box.lo[2 * j + 1] = -1.0;
                    box.hi[2 * j + 1] = 1.0;
                }
            }
        }
        LipschitzEstimate est =
            estimate_lipschitz(ls.sys.field, box, le_pairs, le_seed, !le_serial);
        emit(lipschitz_json(est, ls.sys.field.L), le_out);
    });

    // ---- search ----
    std::string se_spec, se_out, se_csv, se_format = "json";
    std::size_t se_count = 200;
    std::uint64_t se_seed = 1;
    bool se_serial = false;
    BoundSettings se_set;
    auto* c_se = app.add_subcommand("search",
                                    "Normalized-period floor over a seeded ensemble");
    c_se->add_option("--ensemble", se_spec, "ensemble spec (JSON file or inline, default union)");
    c_se->add_option("--count", se_count, "number of draws");
    c_se->add_option("--seed", se_seed, "master seed");
    c_se->add_option("--tol-report", se_set.report_tol, "floor tolerance on min k");
    c_se->add_option("--format", se_format, "primary output: json summary or csv draws")
        ->check(CLI::IsMember({"json", "csv"}));
    c_se->add_option("--out", se_out, "primary output path (default stdout)");
    c_se->add_option("--csv", se_csv, "also write the per-draw CSV here");
    c_se->add_flag("--serial", se_serial, "disable the parallel draw fan-out");
    c_se->callback([&] {
        EnsembleSpec ens =
            se_spec.empty() ? EnsembleSpec{} : parse_ensemble(arg_json(se_spec));
        SearchSummary sum = search_min_k(ens, se_count, se_seed, se_set, !se_serial);
        if (se_format == "csv")
            with_stream(se_out, [&](std::ostream& os) { draws_csv(sum.draws, os); });
        else
            emit(search_summary_json(sum), se_out);
        if (!se_csv.empty())
            with_stream(se_csv, [&](std::ostream& os) { draws_csv(sum.draws, os); });
        if (sum.floor_violated) code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int c = app.exit(e);
        return c == 0 ? 0 : 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return code;
}
