#include "bootperc/bounds.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "bootperc/error.hpp"

namespace bootperc::bounds {

namespace {

void require_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(what) + ": p must lie in [0, 1]");
}

void require_open_prob(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) throw InputError(std::string(what) + ": p must lie in (0, 1)");
}

BoundValue checked(double v) {
    if (std::isinf(v) || std::isnan(v)) return {std::numeric_limits<double>::infinity(), true};
    return {v, false};
}

}  // namespace

std::optional<double> default_lambda(int d, int r) {
    if (d == 2 && r == 2) return kLambda2D;
    return std::nullopt;
}

std::uint64_t p_count(int d, int r, int t) {
    if (d < 1) throw InputError("p_count: d must be >= 1");
    if (r < 2 || r > d) throw InputError("p_count: need 2 <= r <= d");
    if (t < 0) throw InputError("p_count: t must be >= 0");
    // Coordinates d-r+2..d (1-based) are restricted to {0, 1}.
    const int free_axes = d - r + 1;
    std::uint64_t total = 0;
    std::vector<int> x(static_cast<std::size_t>(d), 0);
    std::vector<int> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        lo[static_cast<std::size_t>(i)] = i < free_axes ? -t : 0;
        hi[static_cast<std::size_t>(i)] = i < free_axes ? t : std::min(1, t);
        x[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
    }
    while (true) {
        long norm = 0;
        for (int v : x) norm += std::abs(v);
        if (norm <= t) ++total;
        int i = 0;
        for (; i < d; ++i) {
            auto k = static_cast<std::size_t>(i);
            if (x[k] < hi[k]) {
                ++x[k];
                break;
            }
            x[k] = lo[k];
        }
        if (i == d) break;
    }
    return total;
}

double lower_tail_bound(double n, int d, double p, int t) {
    require_prob(p, "lower_tail_bound");
    if (t < 1) throw InputError("lower_tail_bound: t must be >= 1");
    const double box = std::ldexp(static_cast<double>(t), d);  // 2^d t
    const double boxes = std::pow(n, d) / box;
    const double nonempty = 1.0 - std::pow(1.0 - p, box);
    return std::pow(nonempty, boxes);
}

std::optional<long> lower_time_threshold(double n, int d, double p) {
    require_prob(p, "lower_time_threshold");
    if (n < 1) throw InputError("lower_time_threshold: n must be >= 1");
    if (p == 0.0) return std::nullopt;
    if (p == 1.0) return 0;
    const double v = d * std::log(n) / (std::ldexp(1.0, d) * -std::log1p(-p));
    return static_cast<long>(std::floor(v));
}

BoundValue k_of_p(double p, int d, double lambda, double p0) {
    if (!(p > 0.0) || !(p0 > 0.0)) throw InputError("k_of_p: p and p0 must be > 0");
    if (d < 1) throw InputError("k_of_p: d must be >= 1");
    double k = 2.0 * lambda / (p <= p0 ? p : p0);
    for (int i = 0; i < d - 1; ++i) {
        k = std::exp(k);
        if (std::isinf(k)) return {std::numeric_limits<double>::infinity(), true};
    }
    return checked(k);
}

BoundValue l_threshold_from_k(double k, double p, double delta) {
    require_open_prob(p, "l_threshold");
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("l_threshold: delta must lie in (0, 1)");
    const double lp = -std::log1p(-p);
    const double ld = -std::log(delta);
    return checked(16.0 * k * k * k * lp * lp / (ld * ld));
}

BoundValue l_threshold(double p, double delta, int d, double lambda, double p0) {
    const auto k = k_of_p(p, d, lambda, p0);
    if (k.overflow) return k;
    return l_threshold_from_k(k.value, p, delta);
}

BoundValue l_threshold_proof_form_from_k(double k, double p, double delta) {
    require_open_prob(p, "l_threshold_proof_form");
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("l_threshold_proof_form: delta must lie in (0, 1)");
    const double exponent = std::log(2.0) / std::log(1.5);
    const double base = 4.0 * k * -std::log1p(-p) / -std::log(delta);
    return checked(k * std::pow(base, exponent));
}

BoundValue l_threshold_proof_form(double p, double delta, int d, double lambda, double p0) {
    const auto k = k_of_p(p, d, lambda, p0);
    if (k.overflow) return k;
    return l_threshold_proof_form_from_k(k.value, p, delta);
}

double eta_upper_bound(double L, int d, double p, double B) {
    require_prob(p, "eta_upper_bound");
    if (L < 5) throw InputError("eta_upper_bound: L must be >= 5");
    return B * std::pow(L, d - 1) * std::pow(1.0 - p, 2.0 * L - 8.0);
}

double recursion_rhs(double m, int d, double p, double eta_m, double C, double B) {
    require_prob(p, "recursion_rhs");
    if (!(eta_m >= 0.0 && eta_m <= 1.0)) throw InputError("recursion_rhs: eta_m must lie in [0, 1]");
    return C * eta_m * eta_m * eta_m + B * std::pow(m, d - 1) * std::pow(1.0 - p, 4.0 * m - 8.0);
}

double origin_tail_bound(double t, double t_prime, double p, double C) {
    require_open_prob(p, "origin_tail_bound");
    if (!(t >= t_prime && t_prime >= 0)) throw InputError("origin_tail_bound: need t >= t' >= 0");
    return C * std::pow(1.0 - p, t - t_prime) / p;
}

double upper_tail_bound(double n, int d, double p, double t, double t_prime) {
    require_open_prob(p, "upper_tail_bound");
    if (!(t >= t_prime && t_prime >= 0)) throw InputError("upper_tail_bound: need t >= t' >= 0");
    return std::pow(n, d) * std::pow(1.0 - p, t - t_prime) / p;
}

double g_of_p(double L, int d, double p, double B) {
    if (!(p >= 0.0 && p < 1.0)) throw InputError("g_of_p: p must lie in [0, 1)");
    if (L < 1) throw InputError("g_of_p: L must be >= 1");
    return B * std::pow(L, d) * std::pow(1.0 - p, -8.0);
}

}  // namespace bootperc::bounds
