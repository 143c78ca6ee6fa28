// Serial vs OpenMP timings for the hot kernels, plus the frontier engine against
// the step-by-step reference. Usage: bench_kernels [n] [reps]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "bootperc/oracle.hpp"
#include "bootperc/sampler.hpp"

using namespace bootperc;

namespace {

double best_of(int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* what, double serial, double parallel) {
    std::printf("%-34s %10.4f %10.4f %8.2fx\n", what, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 1024;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
    std::printf("threads=%d n=%d reps=%d (seconds, best of reps)\n", omp_get_max_threads(), n, reps);
    std::printf("%-34s %10s %10s %9s\n", "kernel", "serial", "parallel", "speedup");

    const auto s = LatticeShape::make(2, n, Boundary::Torus);
    const ProcessParams pp{s, 2};
    const auto a = bernoulli_field(s, 0.1, 1);
    SiteSet sink;
    row("evolve_step d=2 p=0.1",
        best_of(reps, [&] { sink = evolve_step(a, pp, Exec::Serial); }),
        best_of(reps, [&] { sink = evolve_step(a, pp, Exec::Parallel); }));

    const TrialPlan plan{LatticeShape::make(2, 128, Boundary::Torus), 2, 0.1, 64, 7};
    row("estimate_percolation n=128 x64",
        best_of(reps, [&] { estimate_percolation(plan, Exec::Serial); }),
        best_of(reps, [&] { estimate_percolation(plan, Exec::Parallel); }));
    row("estimate_eta d=3 m=8 x2000",
        best_of(reps, [&] { estimate_eta(8, 3, 0.35, 2000, 3, 0, Exec::Serial); }),
        best_of(reps, [&] { estimate_eta(8, 3, 0.35, 2000, 3, 0, Exec::Parallel); }));
    const auto o4 = LatticeShape::make(2, 4, Boundary::Open);
    row("oracle polynomial 4x4 open",
        best_of(reps, [&] { oracle::exact_percolation_polynomial(o4, 2, 0.0, Exec::Serial); }),
        best_of(reps, [&] { oracle::exact_percolation_polynomial(o4, 2, 0.0, Exec::Parallel); }));

    std::printf("\n%-34s %10s %10s %9s\n", "engine", "naive", "frontier", "speedup");
    for (int m : {128, 256, n}) {
        const auto sh = LatticeShape::make(2, m, Boundary::Torus);
        const auto init = bernoulli_field(sh, 0.1, 2);
        char label[64];
        std::snprintf(label, sizeof label, "fixation d=2 n=%d p=0.1", m);
        const double fast = best_of(reps, [&] { evolve_until_fixation(init, {sh, 2}); });
        const double slow = best_of(m > 256 ? 1 : reps, [&] { evolve_naive(init, {sh, 2}); });
        row(label, slow, fast);
    }
    return 0;
}
