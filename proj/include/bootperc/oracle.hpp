#pragma once

// Exact answers on tiny instances by exhaustive enumeration. These are the
// ground truth the estimators and the optimized engine are tested against.

#include <cstdint>
#include <vector>

#include "bootperc/engine.hpp"

namespace bootperc::oracle {

inline constexpr int kMaxEnumerationSites = 24;
inline constexpr int kMaxBallSites = 20;

// counts[k] = number of k-subsets with the counted property.
struct CountPolynomial {
    int vertex_count = 0;
    std::vector<std::uint64_t> counts;

    // sum_k c_k p^k (1-p)^{N-k}
    double evaluate(double p) const;
};

using PercPolynomial = CountPolynomial;

// Every initial set of the shape, tallied by size when it percolates. A
// sample (crosscheck_fraction) of configurations is replayed through the
// naive evolver; any disagreement raises InternalFault.
PercPolynomial exact_percolation_polynomial(const LatticeShape& shape, int r, double crosscheck_fraction = 0.01,
                                            Exec exec = Exec::Parallel);

// Initial sets of [m]^d for which the cube is bad (threshold r, default d).
CountPolynomial exact_bad_polynomial(int m, int d, int r = 0, Exec exec = Exec::Parallel);

double exact_eta(int m, int d, double p);

// max over percolating initial sets of their percolation time.
int exact_max_percolation_time(const LatticeShape& shape, int r, Exec exec = Exec::Parallel);

// min |B_t(0) \ A_0| such that the origin is still uninfected at time t,
// with everything outside the ball infected.
int exact_extremal(int d, int r, int t);

}  // namespace bootperc::oracle
