#include "bootperc/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "bootperc/error.hpp"
#include "bootperc/rng.hpp"
#include "parallel.hpp"

namespace bootperc {

void TrialPlan::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
    if (trials < 1) throw InputError("trials must be >= 1");
}

double EstimateResult::std_error() const { return (ci_high - ci_low) / (2.0 * kZ95); }

EstimateResult wilson_estimate(long successes, long trials) {
    if (trials < 1) throw InputError("trials must be >= 1");
    if (successes < 0 || successes > trials) throw InputError("successes out of range");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    EstimateResult e;
    e.point = phat;
    e.ci_low = std::clamp(center - half, 0.0, phat);
    e.ci_high = std::clamp(center + half, phat, 1.0);
    e.trials = trials;
    e.successes = successes;
    return e;
}

SiteSet bernoulli_field(const LatticeShape& shape, double p, std::uint64_t seed) {
    SiteSet s(shape);
    if (p <= 0.0) return s;
    if (p >= 1.0) return SiteSet::full(shape);
    const std::size_t v = shape.volume();
    auto& words = s.words();
    for (std::size_t k = 0; k < words.size(); ++k) {
        std::uint64_t w = 0;
        const std::size_t end = std::min(v, k * 64 + 64);
        for (std::size_t i = k * 64; i < end; ++i)
            if (counter_uniform(seed, i) < p) w |= std::uint64_t{1} << (i - k * 64);
        words[k] = w;
    }
    return s;
}

namespace {

// Number of trials k in [0, trials) for which body(k) is true.
template <class Body>
long count_trials(int trials, Exec exec, Body&& body) {
    std::vector<char> hit(static_cast<std::size_t>(trials), 0);
    detail::parallel_for(trials, exec, [&](std::int64_t k) { hit[static_cast<std::size_t>(k)] = body(static_cast<int>(k)) ? 1 : 0; }, 4);
    return static_cast<long>(std::count(hit.begin(), hit.end(), 1));
}

}  // namespace

EstimateResult estimate_percolation(const TrialPlan& plan, Exec exec) {
    plan.validate();
    const ProcessParams params{plan.shape, plan.r};
    const long hits = count_trials(plan.trials, exec, [&](int k) {
        const auto field = bernoulli_field(plan.shape, plan.p, derive_seed(plan.master_seed, static_cast<std::uint64_t>(k)));
        return evolve_until_fixation(field, params).percolates();
    });
    return wilson_estimate(hits, plan.trials);
}

EstimateResult estimate_eta(int m, int d, double p, int trials, std::uint64_t seed, int r, Exec exec) {
    if (m < 2) throw InputError("eta needs m >= 2");
    if (d < 2) throw InputError("eta needs d >= 2");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
    if (trials < 1) throw InputError("trials must be >= 1");
    if (r == 0) r = d;
    const auto shape = LatticeShape::make(d, m, Boundary::Open);
    const Region cube(std::vector<AxisSpec>(static_cast<std::size_t>(d), AxisSpec::Interval(1, m)));
    const long bad = count_trials(trials, exec, [&](int k) {
        const auto field = bernoulli_field(shape, p, derive_seed(seed, static_cast<std::uint64_t>(k)));
        return classify_cube(cube, field, r) == CubeClass::Bad;
    });
    return wilson_estimate(bad, trials);
}

std::vector<std::optional<int>> trial_times(const TrialPlan& plan, Exec exec) {
    plan.validate();
    const ProcessParams params{plan.shape, plan.r};
    std::vector<std::optional<int>> out(static_cast<std::size_t>(plan.trials));
    auto body = [&](int k) {
        const auto field = bernoulli_field(plan.shape, plan.p, derive_seed(plan.master_seed, static_cast<std::uint64_t>(k)));
        out[static_cast<std::size_t>(k)] = percolation_time(field, params);
    };
    detail::parallel_for(plan.trials, exec, [&](std::int64_t k) { body(static_cast<int>(k)); });
    return out;
}

double empirical_quantile(std::vector<int> values, double q) {
    if (values.empty()) throw InputError("quantile of an empty sample");
    if (!(q > 0.0 && q < 1.0)) throw InputError("quantile level must lie in (0, 1)");
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

TimeQuantiles time_quantiles(const TrialPlan& plan, std::span<const double> quantiles, Exec exec) {
    for (double q : quantiles)
        if (!(q > 0.0 && q < 1.0)) throw InputError("quantile level must lie in (0, 1)");
    TimeQuantiles out;
    std::vector<int> times;
    for (const auto& t : trial_times(plan, exec)) {
        if (t) {
            times.push_back(*t);
            ++out.percolating;
        } else {
            ++out.non_percolating;
        }
    }
    if (times.empty()) return out;
    std::sort(times.begin(), times.end());
    for (double q : quantiles) out.values.emplace_back(q, empirical_quantile(times, q));
    return out;
}

PcEstimate estimate_pc_detailed(const LatticeShape& shape, int r, int trials_per_probe, double tol, std::uint64_t seed) {
    if (!(tol > 0.0)) throw InputError("tol must be > 0");
    if (trials_per_probe < 1) throw InputError("trials_per_probe must be >= 1");
    PcEstimate est;
    auto probe = [&](double p) {
        const auto e = estimate_percolation(TrialPlan{shape, r, p, trials_per_probe, seed});
        est.probes.push_back({p, e});
        return e.point;
    };
    double lo = 0.0, hi = 1.0;
    if (probe(lo) > 0.5 || probe(hi) <= 0.5)
        throw InputError("percolation probability does not cross 1/2 on [0, 1]; no bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid) <= 0.5)
            lo = mid;
        else
            hi = mid;
    }
    est.bracket_low = lo;
    est.bracket_high = hi;
    est.pc = 0.5 * (lo + hi);
    return est;
}

double estimate_pc(const LatticeShape& shape, int r, int trials_per_probe, double tol, std::uint64_t seed) {
    return estimate_pc_detailed(shape, r, trials_per_probe, tol, seed).pc;
}

}  // namespace bootperc
