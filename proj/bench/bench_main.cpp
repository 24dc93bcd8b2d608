// Serial vs OpenMP timing for the data-parallel kernels: the batched
// collision-cone check and the multi-seed engagement sweep.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "ais/runner/scenario_runs.hpp"
#include "ais/safety/collision_cone.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void bench_cone(std::size_t n) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(0.5, 60.0), vel(-8.0, 8.0);
    std::vector<double> r0(n), vr(n), vt(n), vp(n);
    for (std::size_t i = 0; i < n; ++i) {
        r0[i] = dist(rng);
        vr[i] = vel(rng);
        vt[i] = vel(rng);
        vp[i] = vel(rng);
    }
    std::vector<char> serial(n), parallel(n);

    const double t0 = now_s();
    ais::safety::cone_flags_serial(r0, vr, vt, vp, 3.0, serial);
    const double t1 = now_s();
    ais::safety::cone_flags_parallel(r0, vr, vt, vp, 3.0, parallel);
    const double t2 = now_s();

    std::size_t mismatch = 0;
    for (std::size_t i = 0; i < n; ++i) mismatch += serial[i] != parallel[i];
    std::printf("cone check, n=%zu      serial %8.3f ms   parallel %8.3f ms   "
                "speedup %.2fx   mismatches %zu\n",
                n, 1e3 * (t1 - t0), 1e3 * (t2 - t1), (t1 - t0) / (t2 - t1), mismatch);
}

void bench_sweep(int seeds) {
    auto cfg = ais::runner::default_scenario();
    cfg.world.sensing.sigma_px = 2.0;
    std::vector<std::uint64_t> seed_list;
    for (int i = 0; i < seeds; ++i) seed_list.push_back(100 + i);

    const double t0 = now_s();
    const auto serial = ais::runner::run_grab_sweep(cfg, seed_list, 60.0, false);
    const double t1 = now_s();
    const auto parallel = ais::runner::run_grab_sweep(cfg, seed_list, 60.0, true);
    const double t2 = now_s();

    int mismatch = 0;
    for (int i = 0; i < seeds; ++i)
        mismatch += serial[i].success != parallel[i].success ||
                    std::abs(serial[i].grab_time - parallel[i].grab_time) > 1e-12;
    std::printf("grab sweep, seeds=%d   serial %8.3f ms   parallel %8.3f ms   "
                "speedup %.2fx   mismatches %d\n",
                seeds, 1e3 * (t1 - t0), 1e3 * (t2 - t1), (t1 - t0) / (t2 - t1),
                mismatch);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; parallel paths run serially\n");
#endif
    bench_cone(10'000'000);
    bench_sweep(8);
    return 0;
}
