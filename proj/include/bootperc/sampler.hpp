#pragma once

// Seeded Bernoulli initial sets and Monte Carlo estimators built on them.
// Every estimator is a pure function of its arguments: the trial seeds are
// derived from the master seed, so the thread count never changes a result.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bootperc/engine.hpp"

namespace bootperc {

struct TrialPlan {
    LatticeShape shape;
    int r = 2;
    double p = 0.5;
    int trials = 1;
    std::uint64_t master_seed = 0;

    void validate() const;
};

struct EstimateResult {
    double point = 0;
    double ci_low = 0;
    double ci_high = 0;
    long trials = 0;
    long successes = 0;

    // Half-width of the 95% Wilson interval divided by z.
    double std_error() const;
};

inline constexpr double kZ95 = 1.959963984540054;

EstimateResult wilson_estimate(long successes, long trials);

SiteSet bernoulli_field(const LatticeShape& shape, double p, std::uint64_t seed);

EstimateResult estimate_percolation(const TrialPlan& plan, Exec exec = Exec::Parallel);

// P([m]^d is bad) with threshold r (defaults to d). m = 2 is never bad.
EstimateResult estimate_eta(int m, int d, double p, int trials, std::uint64_t seed, int r = 0,
                            Exec exec = Exec::Parallel);

// Percolation time of every trial (nullopt when the trial does not percolate).
std::vector<std::optional<int>> trial_times(const TrialPlan& plan, Exec exec = Exec::Parallel);

struct TimeQuantiles {
    std::vector<std::pair<double, double>> values;  // (q, T_q); empty if nothing percolated
    int percolating = 0;
    int non_percolating = 0;
};

// Lower empirical quantile: the ceil(q N)-th smallest value.
double empirical_quantile(std::vector<int> sorted_values, double q);

TimeQuantiles time_quantiles(const TrialPlan& plan, std::span<const double> quantiles,
                             Exec exec = Exec::Parallel);

struct PcProbe {
    double p;
    EstimateResult estimate;
};

struct PcEstimate {
    double pc = 0;
    double bracket_low = 0;
    double bracket_high = 1;
    std::vector<PcProbe> probes;
};

// Bisection of the estimated percolation probability against 1/2. Every probe
// reuses the same trial seeds, so the empirical curve is monotone in p.
PcEstimate estimate_pc_detailed(const LatticeShape& shape, int r, int trials_per_probe, double tol,
                                std::uint64_t seed);
double estimate_pc(const LatticeShape& shape, int r, int trials_per_probe, double tol, std::uint64_t seed);

}  // namespace bootperc
