#pragma once

// Closed-form bound calculators. Values are returned raw: a bound may exceed
// 1. Unknown absolute constants (C, B, lambda away from d = r = 2, p0) are
// always explicit arguments.

#include <cstdint>
#include <optional>

namespace bootperc::bounds {

struct BoundValue {
    double value = 0;
    bool overflow = false;  // value saturated to +inf

    double clamped() const { return value < 0 ? 0 : (value > 1 ? 1 : value); }
};

inline constexpr double kLambda2D = 9.869604401089358 / 18.0;  // pi^2 / 18
inline constexpr double kDefaultP0 = 0.1;

// lambda(d, r) where it is known in closed form (d = r = 2 only).
std::optional<double> default_lambda(int d, int r);

// |{x in B_t(0) : x_{d-r+2}, ..., x_d in {0,1}}| on Z^d.
std::uint64_t p_count(int d, int r, int t);

// Upper bound on P(T <= t) from tiling [n]^d with [2t]^d-volume boxes:
// (1 - (1-p)^{2^d t})^{n^d / (2^d t)}.
double lower_tail_bound(double n, int d, double p, int t);

// floor(d ln n / (2^d ln(1/(1-p)))); nullopt when p = 0.
std::optional<long> lower_time_threshold(double n, int d, double p);

// exp iterated d-1 times at 2 lambda / min(p, p0).
BoundValue k_of_p(double p, int d, double lambda, double p0);

// 16 K^3 ln(1/(1-p))^2 / ln(1/delta)^2.
BoundValue l_threshold_from_k(double k, double p, double delta);
BoundValue l_threshold(double p, double delta, int d, double lambda, double p0);

// K (4 K ln(1/(1-p)) / ln(1/delta))^{log_{3/2} 2}.
BoundValue l_threshold_proof_form_from_k(double k, double p, double delta);
BoundValue l_threshold_proof_form(double p, double delta, int d, double lambda, double p0);

// B L^{d-1} (1-p)^{2L-8}.
double eta_upper_bound(double L, int d, double p, double B);

// C eta_m^3 + B m^{d-1} (1-p)^{4m-8}.
double recursion_rhs(double m, int d, double p, double eta_m, double C, double B);

// C (1-p)^{t-t'} / p.
double origin_tail_bound(double t, double t_prime, double p, double C);

// n^d (1-p)^{t-t'} / p.
double upper_tail_bound(double n, int d, double p, double t, double t_prime);

// B L^d (1-p)^{-8}.
double g_of_p(double L, int d, double p, double B);

}  // namespace bootperc::bounds
