#include "bootperc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "bootperc/error.hpp"
#include "bootperc/rng.hpp"
#include "parallel.hpp"

namespace bootperc::oracle {

namespace {

constexpr std::int64_t kBlock = 4096;

int checked_sites(const LatticeShape& shape) {
    if (shape.volume() > static_cast<std::size_t>(kMaxEnumerationSites))
        throw CapacityError("exhaustive enumeration is capped at " + std::to_string(kMaxEnumerationSites) +
                            " sites; shape has " + std::to_string(shape.volume()));
    return static_cast<int>(shape.volume());
}

SiteSet from_mask(const LatticeShape& shape, std::uint64_t mask) {
    SiteSet s(shape);
    if (!s.words().empty()) s.words()[0] = mask;
    return s;
}

// Tallies predicate(mask) by popcount over all 2^N masks, in fixed blocks so
// the merge order never depends on scheduling.
template <class Predicate>
std::vector<std::uint64_t> tally(int sites, Exec exec, Predicate&& predicate) {
    const std::int64_t total = std::int64_t{1} << sites;
    const std::size_t width = static_cast<std::size_t>(sites) + 1;
    const std::int64_t blocks = (total + kBlock - 1) / kBlock;
    std::vector<std::uint64_t> per_block(static_cast<std::size_t>(blocks) * width, 0);
    detail::parallel_for(blocks, exec, [&](std::int64_t blk) {
        auto* local = per_block.data() + static_cast<std::size_t>(blk) * width;
        const std::int64_t end = std::min(total, (blk + 1) * kBlock);
        for (std::int64_t mask = blk * kBlock; mask < end; ++mask) {
            const auto m = static_cast<std::uint64_t>(mask);
            if (predicate(m)) ++local[std::popcount(m)];
        }
    });
    std::vector<std::uint64_t> counts(width, 0);
    for (std::int64_t blk = 0; blk < blocks; ++blk)
        for (std::size_t k = 0; k < width; ++k) counts[k] += per_block[static_cast<std::size_t>(blk) * width + k];
    return counts;
}

}  // namespace

double CountPolynomial::evaluate(double p) const {
    double sum = 0;
    for (int k = 0; k <= vertex_count; ++k) {
        const auto c = counts[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        sum += static_cast<double>(c) * std::pow(p, k) * std::pow(1.0 - p, vertex_count - k);
    }
    return sum;
}

PercPolynomial exact_percolation_polynomial(const LatticeShape& shape, int r, double crosscheck_fraction, Exec exec) {
    const int sites = checked_sites(shape);
    const ProcessParams params{shape, r};
    PercPolynomial poly;
    poly.vertex_count = sites;
    poly.counts = tally(sites, exec, [&](std::uint64_t mask) {
        const auto initial = from_mask(shape, mask);
        const auto schedule = evolve_until_fixation(initial, params);
        if (crosscheck_fraction > 0 && counter_uniform(0x0c0ffee, mask) < crosscheck_fraction) {
            const auto reference = evolve_naive(initial, params);
            if (reference.times() != schedule.times())
                throw InternalFault("engine disagrees with the naive evolver on mask " + std::to_string(mask));
        }
        return schedule.percolates();
    });
    return poly;
}

CountPolynomial exact_bad_polynomial(int m, int d, int r, Exec exec) {
    if (m < 2) throw InputError("eta needs m >= 2");
    if (r == 0) r = d;
    const auto shape = LatticeShape::make(d, m, Boundary::Open);
    const int sites = checked_sites(shape);
    const Region cube(std::vector<AxisSpec>(static_cast<std::size_t>(d), AxisSpec::Interval(1, m)));
    CountPolynomial poly;
    poly.vertex_count = sites;
    poly.counts = tally(sites, exec, [&](std::uint64_t mask) {
        return classify_cube(cube, from_mask(shape, mask), r) == CubeClass::Bad;
    });
    return poly;
}

double exact_eta(int m, int d, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
    return exact_bad_polynomial(m, d).evaluate(p);
}

int exact_max_percolation_time(const LatticeShape& shape, int r, Exec exec) {
    const int sites = checked_sites(shape);
    const ProcessParams params{shape, r};
    const std::int64_t total = std::int64_t{1} << sites;
    const std::int64_t blocks = (total + kBlock - 1) / kBlock;
    std::vector<int> block_best(static_cast<std::size_t>(blocks), -1);
    detail::parallel_for(blocks, exec, [&](std::int64_t blk) {
        int local = -1;
        const std::int64_t end = std::min(total, (blk + 1) * kBlock);
        for (std::int64_t mask = blk * kBlock; mask < end; ++mask) {
            const auto t = percolation_time(from_mask(shape, static_cast<std::uint64_t>(mask)), params);
            if (t) local = std::max(local, *t);
        }
        block_best[static_cast<std::size_t>(blk)] = local;
    });
    const int best = *std::max_element(block_best.begin(), block_best.end());
    if (best < 0) throw InputError("no initial set percolates on this shape");
    return best;
}

int exact_extremal(int d, int r, int t) {
    if (d < 1 || t < 0) throw InputError("exact_extremal: need d >= 1, t >= 0");
    // Window [-(t+1), t+1]^d: the ball plus one infected layer is all that
    // can influence the origin within t steps.
    const int n = 2 * t + 3;
    const auto shape = LatticeShape::make(d, n, Boundary::Open);
    const Site center(std::vector<int>(static_cast<std::size_t>(d), t + 2));
    std::vector<std::size_t> ball_sites;
    for (std::size_t idx = 0; idx < shape.volume(); ++idx) {
        const auto x = site_at(idx, shape);
        int norm = 0;
        for (int i = 0; i < d; ++i) norm += std::abs(x[i] - center[i]);
        if (norm <= t) ball_sites.push_back(idx);
    }
    const int b = static_cast<int>(ball_sites.size());
    if (b > kMaxBallSites)
        throw CapacityError("ball B_" + std::to_string(t) + " has " + std::to_string(b) + " sites; cap is " +
                            std::to_string(kMaxBallSites));
    const std::size_t center_idx = site_index(center, shape);
    const auto center_bit = static_cast<std::size_t>(
        std::find(ball_sites.begin(), ball_sites.end(), center_idx) - ball_sites.begin());
    const ProcessParams params{shape, r};
    const SiteSet all = SiteSet::full(shape);
    for (int k = 1; k <= b; ++k) {
        // Gosper's hack over k-subsets of the ball.
        std::uint64_t mask = (std::uint64_t{1} << k) - 1;
        const std::uint64_t limit = std::uint64_t{1} << b;
        while (mask < limit) {
            if ((mask >> center_bit) & 1u) {
                SiteSet initial = all;
                for (int j = 0; j < b; ++j)
                    if ((mask >> j) & 1u) initial.erase(ball_sites[static_cast<std::size_t>(j)]);
                if (evolve_until_fixation(initial, params).time(center_idx) > t) return k;
            }
            const std::uint64_t c = mask & (~mask + 1);
            const std::uint64_t rr = mask + c;
            mask = (((rr ^ mask) >> 2) / c) | rr;
        }
    }
    throw InternalFault("no uninfected subset of the ball protects the origin");
}

}  // namespace bootperc::oracle
