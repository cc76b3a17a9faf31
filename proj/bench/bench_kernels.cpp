// Timing comparison between the serial reference kernels and the OpenMP
// kernels (Wigner raster and parameter scan).  The two paths must produce
// byte-identical results; this tool reports wall times and the speedup.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oal/analytic.hpp"
#include "oal/config.hpp"
#include "oal/fock.hpp"
#include "oal/measures.hpp"
#include "oal/params.hpp"
#include "oal/scan.hpp"

namespace {

template <typename F>
double best_seconds(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, s);
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    using namespace oal;

    int nx = 101;
    int points = 400;
    int reps = 2;
    for (int i = 1; i + 1 < argc; i += 2) {
        if (std::strcmp(argv[i], "--nx") == 0)
            nx = std::atoi(argv[i + 1]);
        else if (std::strcmp(argv[i], "--points") == 0)
            points = std::atoi(argv[i + 1]);
        else if (std::strcmp(argv[i], "--reps") == 0)
            reps = std::atoi(argv[i + 1]);
    }

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP: disabled at build time (both paths run serially)\n");
#endif

    // --- Wigner raster ------------------------------------------------------
    const SystemParams p = SystemParams::dimensionless(1.0, 50.0);
    const double extent = 3.0;
    const CatState cat = conditional_state(0.5 * p.t0(), p, Branch::plus, Ordering::with_ordering);
    const int dim = coherent_dim_for(2.0 * p.r() + extent * std::sqrt(2.0));
    const FockVector state = cat_to_fock(cat, dim);

    WignerGrid gs, gp;
    const double ts = best_seconds(reps, [&] {
        gs = wigner_grid(state, -extent, extent, -extent, extent, nx, nx, Execution::serial);
    });
    const double tp = best_seconds(reps, [&] {
        gp = wigner_grid(state, -extent, extent, -extent, extent, nx, nx, Execution::parallel);
    });
    const bool wig_match = gs.values.size() == gp.values.size() &&
                           std::memcmp(gs.values.data(), gp.values.data(),
                                       gs.values.size() * sizeof(double)) == 0;
    std::printf("wigner %dx%d (dim %d): serial %.3f s, parallel %.3f s, speedup %.2fx, results %s\n",
                nx, nx, dim, ts, tp, ts / tp, wig_match ? "identical" : "DIFFER");

    // --- parameter scan -----------------------------------------------------
    ScenarioConfig c;
    c.r = 0.5;
    c.ratio = 50.0;
    c.t_start = 0.0;
    c.t_end = 1.0;
    c.n_points = points;
    std::vector<ResultRow> rs, rp;
    const double ss = best_seconds(reps, [&] { rs = run_scan(c, Execution::serial); });
    const double sp = best_seconds(reps, [&] { rp = run_scan(c, Execution::parallel); });
    std::ostringstream os, op;
    write_csv(os, c, rs);
    write_csv(op, c, rp);
    const bool scan_match = os.str() == op.str();
    std::printf("scan %d points (%zu rows): serial %.3f s, parallel %.3f s, speedup %.2fx, results %s\n",
                points, rp.size(), ss, sp, ss / sp, scan_match ? "identical" : "DIFFER");

    return wig_match && scan_match ? 0 : 1;
}
