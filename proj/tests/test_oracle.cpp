#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "bootperc/bounds.hpp"
#include "bootperc/error.hpp"
#include "bootperc/oracle.hpp"
#include "bootperc/sampler.hpp"

using namespace bootperc;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& name) {
    std::ifstream in(std::string(GOLDEN_DIR) + "/" + name);
    REQUIRE(in);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("3x3 open grid polynomial matches the golden table") {
    const auto s = LatticeShape::make(2, 3, Boundary::Open);
    const auto poly = oracle::exact_percolation_polynomial(s, 2);
    const auto golden = read_csv("perc_poly_d2_n3_open_r2.csv");
    REQUIRE(poly.counts.size() == golden.size());
    for (const auto& row : golden) CHECK(poly.counts[std::stoul(row[0])] == std::stoull(row[1]));
    CHECK(poly.vertex_count == 9);
    CHECK(poly.counts[0] == 0);
    CHECK(poly.counts[1] == 0);
    CHECK(poly.counts[9] == 1);
    // serial enumeration gives the same table
    CHECK(oracle::exact_percolation_polynomial(s, 2, 1.0, Exec::Serial).counts == poly.counts);
}

TEST_CASE("polynomial basics") {
    const auto p2 = oracle::exact_percolation_polynomial(LatticeShape::make(1, 2, Boundary::Torus), 1);
    CHECK(p2.counts == std::vector<std::uint64_t>{0, 2, 1});
    for (double p : {0.0, 0.25, 0.7, 1.0}) CHECK(p2.evaluate(p) == doctest::Approx(1 - (1 - p) * (1 - p)));
    for (int n = 1; n <= 4; ++n) {
        const auto s = LatticeShape::make(2, n, Boundary::Torus);
        const auto poly = oracle::exact_percolation_polynomial(s, 1);
        CHECK(poly.evaluate(1.0) == 1.0);
        for (std::size_t k = 0; k < poly.counts.size(); ++k)
            CHECK(static_cast<double>(poly.counts[k]) <= binom(poly.vertex_count, static_cast<int>(k)));
    }
    const auto poly = oracle::exact_percolation_polynomial(LatticeShape::make(2, 4, Boundary::Open), 2);
    double prev = 0;
    for (int i = 0; i <= 100; ++i) {
        const double v = poly.evaluate(i / 100.0);
        CHECK(v >= prev - 1e-12);
        CHECK(v <= 1.0 + 1e-12);
        prev = v;
    }
    CHECK_THROWS_AS(oracle::exact_percolation_polynomial(LatticeShape::make(2, 5, Boundary::Open), 2), CapacityError);
}

TEST_CASE("exact eta") {
    for (const auto& row : read_csv("eta_exact_m3_d2.csv")) {
        const double p = std::stod(row[2]);
        CHECK(oracle::exact_eta(3, 2, p) == doctest::Approx(std::stod(row[3])).epsilon(1e-12));
    }
    CHECK(oracle::exact_eta(3, 2, 1.0) == 0.0);
    CHECK(oracle::exact_eta(3, 2, 0.0) == 1.0);
    CHECK(oracle::exact_eta(2, 3, 0.3) == 0.0);
    CHECK_THROWS_AS(oracle::exact_eta(5, 2, 0.3), CapacityError);
    const auto bad = oracle::exact_bad_polynomial(4, 2);
    CHECK(bad.vertex_count == 16);
    CHECK(bad.counts[0] == 1);
}

TEST_CASE("exact eta agrees with sampling") {
    for (auto [m, d, p] : {std::tuple{3, 2, 0.2}, std::tuple{4, 2, 0.3}, std::tuple{2, 4, 0.1}}) {
        const auto e = estimate_eta(m, d, p, 5000, 77);
        const double exact = oracle::exact_eta(m, d, p);
        CHECK(std::abs(e.point - exact) <= 3 * e.std_error() + 1e-12);
    }
}

TEST_CASE("maximal percolation time") {
    CHECK(oracle::exact_max_percolation_time(LatticeShape::make(1, 1, Boundary::Torus), 1) == 0);
    CHECK(oracle::exact_max_percolation_time(LatticeShape::make(1, 4, Boundary::Torus), 1) == 2);
    const auto golden = read_csv("max_time.csv");
    CHECK(oracle::exact_max_percolation_time(LatticeShape::make(2, 3, Boundary::Open), 2) == std::stoi(golden[0][4]));
    CHECK(oracle::exact_max_percolation_time(LatticeShape::make(2, 3, Boundary::Open), 2, Exec::Serial) ==
          std::stoi(golden[0][4]));
    // a path: max over single seeds of the eccentricity = n - 1
    CHECK(oracle::exact_max_percolation_time(LatticeShape::make(1, 9, Boundary::Open), 1) == 8);
}

TEST_CASE("extremal sets") {
    CHECK(oracle::exact_extremal(2, 2, 0) == 1);
    CHECK(oracle::exact_extremal(3, 3, 0) == 1);
    CHECK(oracle::exact_extremal(2, 2, 1) == 4);
    CHECK(oracle::exact_extremal(3, 3, 1) == 5);
    CHECK(oracle::exact_extremal(2, 2, 2) == 8);
    CHECK(oracle::exact_extremal(3, 2, 1) == static_cast<int>(bounds::p_count(3, 2, 1)));
    CHECK_THROWS_AS(oracle::exact_extremal(2, 2, 3), CapacityError);
}
