#pragma once

// r-neighbour bootstrap dynamics: A_t = A_{t-1} plus every site with at
// least r neighbours in A_{t-1}.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bootperc/lattice.hpp"
#include "bootperc/site_set.hpp"

namespace bootperc {

enum class Exec { Serial, Parallel };

struct ProcessParams {
    LatticeShape shape;
    int r = 2;

    // r outside [1, 2d] is allowed but degenerate.
    bool threshold_in_range() const { return r >= 1 && r <= 2 * shape.d; }
};

inline constexpr std::int32_t kNever = std::numeric_limits<std::int32_t>::max();

// Per-site infection time; kNever for sites outside the span.
class InfectionSchedule {
public:
    InfectionSchedule(LatticeShape shape, std::vector<std::int32_t> times);

    const LatticeShape& shape() const { return shape_; }
    std::int32_t time(std::size_t index) const { return times_[index]; }
    std::int32_t time(const Site& x) const { return times_[site_index(x, shape_)]; }
    const std::vector<std::int32_t>& times() const { return times_; }

    // A_t.
    SiteSet level_set(int t) const;
    SiteSet span() const;
    // Last step that infected something (0 if nothing beyond A_0).
    int fixation_step() const;
    bool percolates() const;
    std::optional<int> percolation_time() const;

private:
    LatticeShape shape_;
    std::vector<std::int32_t> times_;
};

// One synchronous update. The parallel path splits the site range across
// OpenMP threads; both paths give identical results.
SiteSet evolve_step(const SiteSet& infected, const ProcessParams& params, Exec exec = Exec::Parallel);

// Frontier algorithm with incremental neighbour counters, O(|V| d).
InfectionSchedule evolve_until_fixation(const SiteSet& initial, const ProcessParams& params);

// Reference evolver for differential tests: recounts every neighbourhood
// each step via the serial evolve_step.
InfectionSchedule evolve_naive(const SiteSet& initial, const ProcessParams& params);

SiteSet span(const SiteSet& initial, const ProcessParams& params);
std::optional<int> percolation_time(const SiteSet& initial, const ProcessParams& params);

enum class CubeClass { StronglyGood, SemiGood, Bad };

inline bool is_good(CubeClass c) { return c != CubeClass::Bad; }
std::string to_string(CubeClass c);

// Dynamics restricted to the box `box` (open boundary inside the box, same r).
// Returns the span of initial ∩ box as a set on the OPEN box shape.
InfectionSchedule evolve_inside(const Region& box, const SiteSet& initial, int r);

// box ⊆ [box ∩ initial] with the restricted dynamics.
bool is_internally_spanned(const Region& box, const SiteSet& initial, int r);

CubeClass classify_cube(const Region& cube, const SiteSet& initial, int r);

// time(x) > t; never-infected sites are uninfected at every t.
bool uninfected_at(const Site& x, int t, const InfectionSchedule& schedule);

// CSV: site_index,x1..xd,time with "never" for the sentinel.
std::string schedule_csv(const InfectionSchedule& schedule);

}  // namespace bootperc
