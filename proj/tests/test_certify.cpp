#include <doctest.h>

#include <random>
#include <tuple>

#include "bootperc/bounds.hpp"
#include "bootperc/certify.hpp"
#include "bootperc/error.hpp"
#include "bootperc/sampler.hpp"

using namespace bootperc;
using namespace bootperc::certify;

namespace {

SiteSet random_set(const LatticeShape& s, double p, std::mt19937_64& g) {
    std::bernoulli_distribution b(p);
    SiteSet a(s);
    for (std::size_t i = 0; i < s.volume(); ++i)
        if (b(g)) a.insert(i);
    return a;
}

// checks every property a staircase must have, using the schedule only
bool valid_staircase(const std::vector<Site>& path, const Site& x, int t, const InfectionSchedule& sch,
                     const SiteSet& initial) {
    const int n = sch.shape().n;
    if (path.size() != static_cast<std::size_t>(t + 1) || path.front() != x) return false;
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (initial.contains(path[k])) return false;
        if (!uninfected_at(path[k], t - static_cast<int>(k), sch)) return false;
        if (k == 0) continue;
        int moved = 0;
        for (int a = 0; a < x.dim(); ++a) {
            const int prev = path[k - 1][a], cur = path[k][a];
            if (cur == prev) continue;
            if (cur != prev % n + 1) return false;
            ++moved;
        }
        if (moved != 1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("planted rectangles") {
    const auto s = LatticeShape::make(2, 11, Boundary::Torus);
    const auto a = plant_rectangle(s, 2, Site{3, 4}, 1);
    CHECK(a.count() == 121 - 10);
    CHECK(percolation_time(a, {s, 2}) == 3);
    const auto s3 = LatticeShape::make(3, 9, Boundary::Torus);
    const auto a3 = plant_rectangle(s3, 1, Site{2, 2, 2}, 2);
    CHECK(a3.count() == 729 - 12);
    CHECK(percolation_time(a3, {s3, 3}).value_or(1000) > 1);
    for (int d : {2, 3}) {
        const auto sh = LatticeShape::make(d, 5, Boundary::Open);
        const auto z = plant_rectangle(sh, 0, Site(std::vector<int>(static_cast<std::size_t>(d), 1)), 1);
        CHECK(percolation_time(z, {sh, d}).value_or(1000) >= 1);
    }
    CHECK(rectangle_region(2, 2, Site{3, 4}, 2) == Region{AxisSpec::Interval(3, 4), AxisSpec::Interval(4, 8)});
    CHECK_THROWS_AS(plant_rectangle(s, 2, Site{8, 1}, 1), InputError);
    CHECK_THROWS_AS(plant_rectangle(s, 6, Site{1, 1}, 1), InputError);
}

TEST_CASE("finding empty rectangles") {
    const auto s = LatticeShape::make(2, 11, Boundary::Torus);
    CHECK_FALSE(find_empty_rectangle(SiteSet::full(s), 2).has_value());
    const auto any = find_empty_rectangle(SiteSet::empty(s), 2);
    REQUIRE(any.has_value());
    CHECK(any->region == Region{AxisSpec::Interval(1, 5), AxisSpec::Interval(1, 2)});

    std::mt19937_64 g(4);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 2 + static_cast<int>(g() % 2);
        const int t = 1 + static_cast<int>(g() % 3);
        const int n = 2 * t + 1 + static_cast<int>(g() % 4);
        const auto sh = LatticeShape::make(d, n, (g() & 1) ? Boundary::Torus : Boundary::Open);
        const int axis = 1 + static_cast<int>(g() % static_cast<unsigned>(d));
        Site corner(std::vector<int>(static_cast<std::size_t>(d), 1));
        for (int a = 0; a < d; ++a) {
            const int len = (a + 1 == axis) ? 2 * t + 1 : 2;
            corner[a] = 1 + static_cast<int>(g() % static_cast<unsigned>(n - len + 1));
        }
        const auto a0 = plant_rectangle(sh, t, corner, axis);
        const auto cert = find_empty_rectangle(a0, t);
        REQUIRE(cert.has_value());
        CHECK(cert->region == rectangle_region(d, t, corner, axis));
        CHECK(verify_lower_certificate(a0, {sh, d}, *cert));
    }
}

TEST_CASE("every certificate found on a random field verifies") {
    std::mt19937_64 g(8);
    for (int rep = 0; rep < 300; ++rep) {
        const int d = 2 + static_cast<int>(g() % 2);
        const auto sh = LatticeShape::make(d, d == 2 ? 12 : 7, (g() & 1) ? Boundary::Torus : Boundary::Open);
        const auto a0 = random_set(sh, std::uniform_real_distribution<double>(0.05, 0.6)(g), g);
        for (int t = 1; t <= 3; ++t) {
            const auto cert = find_empty_rectangle(a0, t);
            if (!cert) continue;
            for (const auto& x : enumerate_region(cert->region, sh)) CHECK_FALSE(a0.contains(x));
            CHECK(verify_lower_certificate(a0, {sh, d}, *cert));
        }
    }
}

TEST_CASE("certificate preconditions") {
    const auto s = LatticeShape::make(2, 9, Boundary::Torus);
    const RectangleCertificate bogus{rectangle_region(2, 1, Site{1, 1}, 1), 1, 1};
    CHECK_THROWS_AS(verify_lower_certificate(SiteSet::full(s), {s, 2}, bogus), InputError);
    auto one_hole = SiteSet::full(s);
    one_hole.erase(Site{4, 4});
    const RectangleCertificate t0{Region{AxisSpec::Fixed(4), AxisSpec::Fixed(4)}, 0, 1};
    CHECK(verify_lower_certificate(one_hole, {s, 2}, t0));
}

TEST_CASE("extremal protecting sets") {
    const auto s = LatticeShape::make(2, 9, Boundary::Torus);
    const auto p1 = p_set(2, 2, 1, Site{5, 5}, s);
    CHECK(p1 == SiteSet::from_sites(s, {{5, 5}, {4, 5}, {6, 5}, {5, 6}}));
    CHECK(p_set(2, 2, 0, Site{5, 5}, s) == SiteSet::from_sites(s, {{5, 5}}));
    for (auto [d, r, t] : {std::tuple{2, 2, 1}, std::tuple{2, 2, 3}, std::tuple{3, 3, 2}, std::tuple{3, 2, 2}}) {
        const auto sh = LatticeShape::make(d, 2 * t + 3, Boundary::Torus);
        CHECK(p_set(d, r, t, lattice_center(sh), sh).count() == bounds::p_count(d, r, t));
        CHECK(verify_extremal(d, r, t, sh));
    }
    CHECK(verify_extremal(2, 2, 0, LatticeShape::make(2, 3, Boundary::Torus)));
    CHECK_THROWS_AS(p_set(2, 2, 3, Site{4, 4}, LatticeShape::make(2, 7, Boundary::Torus)), InputError);
    CHECK(lattice_center(LatticeShape::make(2, 7, Boundary::Torus)) == Site{4, 4});
}

TEST_CASE("exhaustive extremal check") {
    CHECK(exhaustive_extremal_check(2, 2, 1) == 4);
    CHECK(exhaustive_extremal_check(2, 2, 2) == 8);
    CHECK(exhaustive_extremal_check(3, 3, 1) == 5);
    CHECK_THROWS_AS(exhaustive_extremal_check(3, 3, 2), CapacityError);
}

TEST_CASE("staircase paths") {
    const auto s = LatticeShape::make(2, 11, Boundary::Torus);
    const auto a0 = plant_rectangle(s, 2, Site{4, 5}, 1);
    const ProcessParams pp{s, 2};
    const Site x{6, 5};
    const auto path = extract_staircase(a0, x, 2, pp);
    CHECK(path == std::vector<Site>{{6, 5}, {7, 5}, {8, 5}});
    CHECK(extract_staircase(a0, x, 0, pp) == std::vector<Site>{x});
    CHECK_THROWS_AS(extract_staircase(a0, x, 3, pp), InputError);
    CHECK_THROWS_AS(extract_staircase(a0, x, 1, ProcessParams{s, 1}), InputError);
    const auto open = LatticeShape::make(2, 11, Boundary::Open);
    CHECK_THROWS_AS(extract_staircase(plant_rectangle(open, 2, Site{4, 5}, 1), x, 1, ProcessParams{open, 2}), InputError);

    std::mt19937_64 g(21);
    int checked = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + static_cast<int>(g() % 2);
        const auto sh = LatticeShape::make(d, d == 2 ? 12 : 6, Boundary::Torus);
        const auto init = random_set(sh, 0.3 + 0.2 * static_cast<double>(g() % 2), g);
        const auto sch = evolve_until_fixation(init, {sh, d});
        for (int probe = 0; probe < 10; ++probe) {
            const Site y = site_at(g() % sh.volume(), sh);
            for (int t = 0; t <= 6; ++t) {
                if (!uninfected_at(y, t, sch)) break;
                const auto p = extract_staircase(sch, y, t, d);
                CHECK(valid_staircase(p, y, t, sch, init));
                ++checked;
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("seam events on [2m]^3") {
    const int m = 3;
    const auto s = LatticeShape::make(3, 2 * m, Boundary::Open);
    const auto full = seam_events_d3(m, SiteSet::full(s));
    for (const auto& p : full.primitives) CHECK(p.occurs);
    for (int i = 1; i <= 10; ++i) CHECK(full.b[static_cast<std::size_t>(i)]);
    CHECK(full.b_all);
    CHECK(full.a);
    CHECK(full.e);

    const auto empty = seam_events_d3(m, SiteSet::empty(s));
    for (const auto& p : empty.primitives) CHECK_FALSE(p.occurs);
    CHECK_FALSE(empty.b_all);
    CHECK(empty.bad_subcubes == 8);
    CHECK_FALSE(empty.a);
    CHECK_FALSE(empty.e);

    // knock out the four segments of B(m,m,(m+1,2m)): only B_3 fails
    const auto& target = full.primitive("B(m,m,(m+1,2m))");
    CHECK(target.segments.size() == 4);
    auto a0 = SiteSet::full(s);
    for (const auto& seg : target.segments)
        for (const auto& x : enumerate_region(seg, s)) a0.erase(x);
    const auto rep = seam_events_d3(m, a0);
    CHECK_FALSE(rep.b[3]);
    for (int i : {1, 2, 4, 5, 6, 7}) CHECK(rep.b[static_cast<std::size_t>(i)]);
    CHECK_FALSE(rep.b_all);

    CHECK_THROWS_AS(seam_events_d3(m, SiteSet::full(LatticeShape::make(3, 2 * m, Boundary::Torus))), InputError);
    CHECK_THROWS_AS(full.primitive("B(nope)"), InputError);
}

TEST_CASE("seam report is reproducible from membership alone") {
    std::mt19937_64 g(2);
    const int m = 4;
    const auto s = LatticeShape::make(3, 2 * m, Boundary::Open);
    for (int rep = 0; rep < 30; ++rep) {
        const auto a0 = random_set(s, 0.1, g);
        const auto r = seam_events_d3(m, a0);
        for (const auto& p : r.primitives) {
            bool any = false;
            for (const auto& seg : p.segments) {
                CHECK(seg.is_line_segment());
                for (const auto& x : enumerate_region(seg, s)) any = any || a0.contains(x);
            }
            CHECK(any == p.occurs);
        }
        CHECK(r.b_all == (r.b[1] && r.b[2] && r.b[3] && r.b[4] && r.b[5] && r.b[6] && r.b[7]));
        const auto parts = subcube_partition(m, 3);
        int bad = 0;
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(r.subcubes[i] == classify_cube(parts[i], a0, 3));
            bad += r.subcubes[i] == CubeClass::Bad;
        }
        CHECK(r.bad_subcubes == bad);
        CHECK(r.a == (bad == 0));
        CHECK(r.e == is_good(classify_cube(Region{AxisSpec::Interval(1, 2 * m), AxisSpec::Interval(1, 2 * m),
                                                  AxisSpec::Interval(1, 2 * m)},
                                           a0, 3)));
    }
}

TEST_CASE("audit of the A and B implies E statement") {
    CHECK(audit_lemma_AB(3, 1.0, 20, 1).counterexamples == 0);
    const auto zero = audit_lemma_AB(3, 0.0, 20, 1);
    CHECK(zero.counterexamples == 0);
    for (const auto& row : zero.rows) CHECK_FALSE(row.a);
    const auto a = audit_lemma_AB(4, 0.3, 200, 5, Exec::Parallel);
    const auto b = audit_lemma_AB(4, 0.3, 200, 5, Exec::Serial);
    REQUIRE(a.rows.size() == 200);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].trial_seed == b.rows[i].trial_seed);
        CHECK(a.rows[i].e == b.rows[i].e);
        CHECK(a.rows[i].counterexample == (a.rows[i].a && a.rows[i].b && !a.rows[i].e));
    }
    CHECK_THROWS_AS(audit_lemma_AB(2, 0.3, 10, 1), InputError);
}
