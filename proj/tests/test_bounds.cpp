#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bootperc/bounds.hpp"
#include "bootperc/error.hpp"

using namespace bootperc;
using namespace bootperc::bounds;

namespace {

// relative agreement to 12 significant digits
bool sig12(double got, double want) {
    if (want == 0) return std::abs(got) < 1e-300;
    return std::abs(got - want) <= 5e-13 * std::abs(want);
}

// count lattice points of the l1 ball with the last r-1 coordinates in {0,1}
long brute_p_count(int d, int r, int t) {
    long c = 0;
    std::vector<int> x(static_cast<std::size_t>(d), -t);
    while (true) {
        int l1 = 0;
        bool ok = true;
        for (int i = 0; i < d; ++i) {
            l1 += std::abs(x[static_cast<std::size_t>(i)]);
            if (i >= d - r + 1 && x[static_cast<std::size_t>(i)] != 0 && x[static_cast<std::size_t>(i)] != 1) ok = false;
        }
        if (ok && l1 <= t) ++c;
        int a = 0;
        while (a < d && x[static_cast<std::size_t>(a)] == t) x[static_cast<std::size_t>(a++)] = -t;
        if (a == d) break;
        ++x[static_cast<std::size_t>(a)];
    }
    return c;
}

}  // namespace

TEST_CASE("extremal counts") {
    CHECK(p_count(2, 2, 0) == 1);
    CHECK(p_count(3, 2, 0) == 1);
    CHECK(p_count(2, 2, 1) == 4);
    CHECK(p_count(2, 2, 2) == 8);
    CHECK(p_count(3, 3, 1) == 5);
    for (int d = 2; d <= 4; ++d)
        for (int r = 2; r <= d; ++r)
            for (int t = 0; t <= 5; ++t) CHECK(p_count(d, r, t) == static_cast<std::uint64_t>(brute_p_count(d, r, t)));
    CHECK_THROWS_AS(p_count(2, 3, 1), InputError);
    CHECK_THROWS_AS(p_count(2, 1, 1), InputError);
}

TEST_CASE("lower tail") {
    CHECK(sig12(lower_tail_bound(4, 2, 0.5, 1), 50625.0 / 65536.0));  // (15/16)^4
    CHECK(sig12(lower_tail_bound(4, 2, 0.5, 1), std::pow(1 - std::pow(0.5, 4), 4)));
    CHECK(lower_tail_bound(100, 2, 1 - 1e-12, 1) == doctest::Approx(1.0));
    double prev = 0;
    for (int t = 1; t <= 30; ++t) {
        const double v = lower_tail_bound(200, 2, 0.1, t);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(lower_time_threshold(256, 2, 0.5) == 4);
    CHECK(lower_time_threshold(1, 2, 0.5) == 0);
    CHECK_FALSE(lower_time_threshold(256, 2, 0.0).has_value());
    long last = 0;
    for (int n = 1; n <= 5000; n += 37) {
        const long v = *lower_time_threshold(n, 3, 0.05);
        CHECK(v >= last);
        last = v;
    }
}

TEST_CASE("K(p)") {
    const double lam = std::numbers::pi * std::numbers::pi / 18;
    CHECK(sig12(kLambda2D, lam));
    CHECK(default_lambda(2, 2).value() == kLambda2D);
    CHECK_FALSE(default_lambda(3, 3).has_value());
    const double p = lam;  // 2*lam/p = 2
    CHECK(sig12(k_of_p(p, 2, lam, p).value, std::exp(2.0)));
    CHECK(sig12(k_of_p(0.3, 1, lam, 0.5).value, 2 * lam / 0.3));
    CHECK(k_of_p(0.6, 2, lam, 0.5).value == k_of_p(0.9, 2, lam, 0.5).value);
    const auto huge = k_of_p(0.001, 3, lam, 0.1);
    CHECK(huge.overflow);
    CHECK(std::isinf(huge.value));
    CHECK_FALSE(k_of_p(0.2, 3, lam, 0.5).overflow);
}

TEST_CASE("L thresholds") {
    const double p = 1 - std::exp(-1.0), delta = std::exp(-1.0);
    CHECK(sig12(l_threshold_from_k(1, p, delta).value, 16.0));
    CHECK(sig12(l_threshold_proof_form_from_k(1, p, delta).value, std::pow(4.0, std::log(2.0) / std::log(1.5))));
    CHECK(std::abs(l_threshold_proof_form_from_k(1, p, delta).value - 10.70) < 0.01);
    CHECK(l_threshold_proof_form_from_k(3, p, delta).value > l_threshold_proof_form_from_k(2, p, delta).value);

    // below p0, K(p) = exp(2 lambda / p) dominates and the threshold falls with p;
    // above p0, K is frozen and only the log factor moves, so it rises
    double prev = std::numeric_limits<double>::infinity();
    for (double q = 0.01; q <= 0.1 + 1e-12; q += 0.01) {
        const auto v = l_threshold(q, 0.01, 2, kLambda2D, 0.1);
        CHECK(v.value < prev);
        prev = v.value;
    }
    prev = 0;
    for (double q = 0.1; q < 0.95; q += 0.05) {
        const auto v = l_threshold(q, 0.01, 2, kLambda2D, 0.1);
        CHECK(v.value > prev);
        prev = v.value;
    }
    // the stated threshold dominates the one the proof needs
    for (double q = 0.01; q <= 0.1 + 1e-12; q += 0.005) {
        const auto a = l_threshold(q, 0.01, 2, kLambda2D, 0.1);
        const auto b = l_threshold_proof_form(q, 0.01, 2, kLambda2D, 0.1);
        CHECK((a.overflow || (!b.overflow && a.value >= b.value)));
    }
    CHECK_THROWS_AS(l_threshold(0.05, 1.5, 2, kLambda2D, 0.1), InputError);
}

TEST_CASE("eta bound and recursion") {
    CHECK(sig12(eta_upper_bound(10, 3, 0.5, 1), 0.0244140625));
    CHECK(eta_upper_bound(10, 3, 1.0, 1) == 0.0);
    const double p = 0.3;
    const double knee = 2.0 / (2 * std::log(1 / (1 - p)));
    double prev = eta_upper_bound(std::ceil(std::max(5.0, knee)), 3, p, 1);
    for (int L = static_cast<int>(std::ceil(std::max(5.0, knee))) + 1; L < 60; ++L) {
        const double v = eta_upper_bound(L, 3, p, 1);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(eta_upper_bound(4, 3, 0.5, 1), InputError);

    CHECK(sig12(recursion_rhs(4, 3, 0.5, 0.1, 1, 1), 0.0635));
    CHECK(recursion_rhs(4, 3, 1.0, 0.0, 1, 1) == 0.0);
    for (double e : {0.0, 0.2, 0.7, 1.0}) CHECK(recursion_rhs(6, 3, 0.2, e, 2.5, 1) >= 2.5 * e * e * e);
    CHECK_THROWS_AS(recursion_rhs(4, 3, 0.5, 1.5, 1, 1), InputError);
}

TEST_CASE("upper tails") {
    CHECK(sig12(origin_tail_bound(3, 3, 0.5, 1), 2.0));
    CHECK(sig12(origin_tail_bound(10, 0, 0.5, 1), 0.001953125));
    for (int t = 1; t < 20; ++t) CHECK(origin_tail_bound(t + 1, 0, 0.3, 1) < origin_tail_bound(t, 0, 0.3, 1));
    CHECK(sig12(upper_tail_bound(10, 2, 0.5, 10, 0), 0.1953125));
    CHECK(sig12(upper_tail_bound(10, 2, 0.5, 4, 4), 200.0));
    // crossover
    const double n = 50, q = 0.2;
    const double cross = (2 * std::log(n) + std::log(1 / q)) / std::log(1 / (1 - q));
    CHECK(upper_tail_bound(n, 2, q, std::ceil(cross) + 1, 0) < 1.0);
    CHECK_THROWS_AS(origin_tail_bound(1, 2, 0.5, 1), InputError);
}

TEST_CASE("g(p)") {
    CHECK(sig12(g_of_p(2, 3, 0.0, 1), 8.0));
    CHECK(sig12(g_of_p(10, 2, 0.5, 1), 25600.0));
    CHECK(g_of_p(4, 2, 0.3, 1) < g_of_p(4, 2, 0.4, 1));
}

TEST_CASE("clamped companion") {
    CHECK(BoundValue{2.0, false}.clamped() == 1.0);
    CHECK(BoundValue{0.25, false}.clamped() == 0.25);
}
