// Compares the OpenMP fan-outs against the serial reference path.  The two
// must agree bit for bit (identical per-index RNG streams, order-fixed
// reductions), so besides timing this doubles as a determinism gate: exit 1
// on any mismatch.  --quick shrinks the workloads for CI smoke runs.
#include <cstdio>
#include <cstring>
#include <string>

#include "minper/json_io.hpp"
#include "minper/parallel.hpp"

using namespace minper;

namespace {

bool g_all_identical = true;

template <class Fn>
double timed(Fn&& fn) {
    const double t0 = omp_get_wtime();
    fn();
    return omp_get_wtime() - t0;
}

void row(const char* name, double serial_s, double parallel_s, bool identical) {
    if (!identical) g_all_identical = false;
    std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name, serial_s, parallel_s,
                serial_s / (parallel_s > 0 ? parallel_s : 1e-12),
                identical ? "identical" : "MISMATCH");
}

bool same(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

void bench_induced(bool quick) {
    // Multistart hill climbing is the heaviest per-matrix kernel; force it
    // even though l2 has an exact route so the serial/parallel comparison
    // exercises the restart fan-out.
    LinearSystem sys = random_antisymmetric(6, 1.0, 42);
    OptimizerConfig cfg;
    cfg.force_multistart = true;
    cfg.restarts = quick ? 8 : 64;
    cfg.iterations = quick ? 100 : 500;
    InducedNormResult rs, rp;
    cfg.parallel = false;
    const double ts = timed([&] { rs = induced_norm(sys.A, sys.norm, cfg); });
    cfg.parallel = true;
    const double tp = timed([&] { rp = induced_norm(sys.A, sys.norm, cfg); });
    row("induced multistart", ts, tp, same(rs.value, rp.value) && rs.witness == rp.witness);
}

void bench_invariance(bool quick) {
    const int samples = quick ? 2000 : 200000;
    const VectorNorm norm = VectorNorm::lp(3.0);
    RotationInvarianceResult rs, rp;
    const double ts =
        timed([&] { rs = check_rotation_invariance(norm, 4, samples, 1, 1e-9, false); });
    const double tp =
        timed([&] { rp = check_rotation_invariance(norm, 4, samples, 1, 1e-9, true); });
    row("rotation invariance", ts, tp,
        rs.invariant == rp.invariant && same(rs.max_deviation, rp.max_deviation));
}

void bench_lipschitz(bool quick) {
    LinearSystem sys = random_antisymmetric(5, 1.0, 7);
    Box box;
    box.lo.assign(10, 0.0);
    box.hi.assign(10, 0.0);
    for (std::size_t j = 0; j < 5; ++j) {
        box.lo[2 * j] = -1.0;
        box.hi[2 * j] = 1.0;
    }
    const int pairs = quick ? 5000 : 400000;
    LipschitzEstimate es, ep;
    const double ts = timed([&] { es = estimate_lipschitz(sys.field, box, pairs, 3, false); });
    const double tp = timed([&] { ep = estimate_lipschitz(sys.field, box, pairs, 3, true); });
    row("lipschitz sampling", ts, tp, same(es.estimate, ep.estimate));
}

void bench_search(bool quick) {
    EnsembleSpec ens;
    const std::size_t count = quick ? 4 : 40;
    SearchSummary ss, sp;
    const double ts = timed([&] { ss = search_min_k(ens, count, 11, {}, false); });
    const double tp = timed([&] { sp = search_min_k(ens, count, 11, {}, true); });
    bool ok = ss.ok_count == sp.ok_count && same(ss.min_k, sp.min_k) &&
              same(ss.median, sp.median) && same(ss.max_mean_rel, sp.max_mean_rel);
    for (std::size_t i = 0; ok && i < count; ++i)
        ok = same(ss.draws[i].k, sp.draws[i].k) && ss.draws[i].ok == sp.draws[i].ok;
    row("ensemble verification", ts, tp, ok);
}

} // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--quick") quick = true;
    std::printf("threads: %d%s\n\n", omp_get_max_threads(), quick ? "  (quick mode)" : "");
    std::printf("%-28s %11s %11s %9s   %s\n", "kernel", "serial", "parallel", "speedup",
                "result");
    bench_induced(quick);
    bench_invariance(quick);
    bench_lipschitz(quick);
    bench_search(quick);
    if (!g_all_identical) {
        std::printf("\nserial and parallel paths disagree\n");
        return 1;
    }
    return 0;
}
