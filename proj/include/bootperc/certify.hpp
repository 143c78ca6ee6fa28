#pragma once

// Certificates that can be checked by replaying the engine: empty
// rectangles that delay percolation, extremal protecting sets, staircase
// paths of initially uninfected sites, and the seam-event audit on [2m]^3.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bootperc/engine.hpp"

namespace bootperc::certify {

// A [2t+1] x [2]^{d-1} box, long side along `axis` (1-based).
struct RectangleCertificate {
    Region region;
    int t = 0;
    int axis = 1;
};

Region rectangle_region(int d, int t, const Site& corner, int axis);

// Everything infected except the box with lowest corner `corner`.
SiteSet plant_rectangle(const LatticeShape& shape, int t, const Site& corner, int axis);

// First fully uninfected box, scanning axes 1..d and then corners in site
// order. Placements never wrap around the torus.
std::optional<RectangleCertificate> find_empty_rectangle(const SiteSet& initial, int t);

// True iff percolation does not happen by time cert.t. The box must be empty
// in `initial` (InputError otherwise).
bool verify_lower_certificate(const SiteSet& initial, const ProcessParams& params, const RectangleCertificate& cert);

// Translate of {x in B_t(0) : x_{d-r+2..d} in {0,1}} anchored at center.
SiteSet p_set(int d, int r, int t, const Site& center, const LatticeShape& shape);

// Centre site ((n+1)/2, ...) used by verify_extremal.
Site lattice_center(const LatticeShape& shape);

// Uninfect exactly p_set around the centre and confirm the centre is still
// uninfected at time t.
bool verify_extremal(int d, int r, int t, const LatticeShape& shape);

int exhaustive_extremal_check(int d, int r, int t);

// v_0 = x, ..., v_t with v_{k+1} = v_k + e_i (smallest such axis i) and v_k
// uninfected at time t-k. Torus only, n >= 3, r = d.
std::vector<Site> extract_staircase(const SiteSet& initial, const Site& x, int t, const ProcessParams& params);
std::vector<Site> extract_staircase(const InfectionSchedule& schedule, const Site& x, int t, int r);

// ---- seam events on [2m]^3 ----------------------------------------------

struct SeamPrimitive {
    std::string name;
    std::vector<Region> segments;
    bool occurs = false;  // some segment holds an initially infected site
};

struct SeamEventReport {
    int m = 0;
    std::vector<SeamPrimitive> primitives;
    std::array<bool, 11> b{};  // b[1..10]
    bool b_all = false;        // B = B_1 and ... and B_7
    bool d_x1 = false, d_y1 = false, d_z1 = false;
    std::array<CubeClass, 8> subcubes{};
    int bad_subcubes = 0;
    bool a = false;   // all subcubes good
    bool a1 = false;  // exactly one bad
    bool a2 = false;  // exactly two bad
    bool e = false;   // [2m]^3 good

    const SeamPrimitive& primitive(const std::string& name) const;
};

// initial must live on the OPEN shape (3, 2m); threshold 3.
SeamEventReport seam_events_d3(int m, const SiteSet& initial);

struct AuditRow {
    std::uint64_t trial_seed = 0;
    bool a = false;
    bool b = false;
    bool e = false;
    bool counterexample = false;
};

struct AuditResult {
    int m = 0;
    double p = 0;
    std::vector<AuditRow> rows;
    long counterexamples = 0;
    std::vector<SiteSet> counterexample_sets;
};

// Samples Bernoulli(p) fields on [2m]^3 and counts A and B and not E.
AuditResult audit_lemma_AB(int m, double p, int trials, std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace bootperc::certify
