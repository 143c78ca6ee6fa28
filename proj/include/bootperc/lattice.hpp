#pragma once

// Lattice geometry: shapes, 1-based sites, axis-aligned regions and the
// cube bookkeeping (sides, interior, permutation orbits, buffers, partitions).

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bootperc {

class SiteSet;

enum class Boundary { Torus, Open };

std::string to_string(Boundary b);
Boundary parse_boundary(std::string_view text);

struct LatticeShape {
    int d = 1;
    int n = 1;
    Boundary boundary = Boundary::Torus;

    // Throws InputError unless d >= 1, n >= 1 and n^d fits a size_t index.
    static LatticeShape make(int d, int n, Boundary boundary);

    std::size_t volume() const;
    bool operator==(const LatticeShape&) const = default;
};

// A point of [n]^d, coordinates 1-based.
class Site {
public:
    Site() = default;
    explicit Site(std::vector<int> coords) : coords_(std::move(coords)) {}
    Site(std::initializer_list<int> coords) : coords_(coords) {}

    int dim() const { return static_cast<int>(coords_.size()); }
    int operator[](int axis) const { return coords_[static_cast<std::size_t>(axis)]; }
    int& operator[](int axis) { return coords_[static_cast<std::size_t>(axis)]; }
    const std::vector<int>& coords() const { return coords_; }

    auto operator<=>(const Site&) const = default;

private:
    std::vector<int> coords_;
};

bool is_valid_site(const Site& x, const LatticeShape& shape);
// Row-major with axis 1 fastest.
std::size_t site_index(const Site& x, const LatticeShape& shape);
Site site_at(std::size_t index, const LatticeShape& shape);

// Fixed(a) pins one coordinate; Interval(a, b) spans a..b inclusive.
struct AxisSpec {
    int lo = 1;
    int hi = 1;
    bool fixed = true;

    static AxisSpec Fixed(int a) { return {a, a, true}; }
    static AxisSpec Interval(int a, int b) { return {a, b, false}; }

    int length() const { return hi - lo + 1; }
    bool contains(int c) const { return lo <= c && c <= hi; }
    auto operator<=>(const AxisSpec&) const = default;
};

class Region {
public:
    Region() = default;
    explicit Region(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {}
    Region(std::initializer_list<AxisSpec> axes) : axes_(axes) {}

    int dim() const { return static_cast<int>(axes_.size()); }
    const AxisSpec& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
    const std::vector<AxisSpec>& axes() const { return axes_; }

    std::size_t size() const;
    int interval_count() const;
    bool is_subcube() const { return interval_count() == dim(); }
    bool is_subgrid() const { return interval_count() == dim() - 1; }
    bool is_line_segment() const { return interval_count() == 1; }
    // Every axis is an interval of the same length.
    bool is_cube() const;
    bool contains(const Site& x) const;
    bool fits(const LatticeShape& shape) const;

    auto operator<=>(const Region&) const = default;

private:
    std::vector<AxisSpec> axes_;
};

// "[(1,5),(3),(2,4)]" and "(1,2,3)"; whitespace-insensitive, exact otherwise.
Region parse_region(std::string_view text);
Site parse_site(std::string_view text);
std::string format_region(const Region& r);
std::string format_site(const Site& x);

// Distinct neighbours; duplicates from wraparound at n <= 2 are collapsed.
std::vector<Site> neighbors(const Site& x, const LatticeShape& shape);

// Lexicographic order with axis 1 fastest (matches site_index).
std::vector<Site> enumerate_region(const Region& r, const LatticeShape& shape);

// The 2^{d-1} d boundary line segments of [m]^d.
std::vector<Region> sides(int m, int d);

// [m]^d minus its sides, as a subset of the OPEN shape (d, m).
SiteSet interior(int m, int d);

std::vector<Region> perm_orbit(const Region& r);

// l1 ball; wrapped per-coordinate distance on the torus.
SiteSet ball(int t, const Site& center, const LatticeShape& shape);

// The d-1 buffers of cube `cube` for one of its sides. Regions may poke one
// layer outside the lattice; they are not clipped.
std::vector<Region> buffers(const Region& cube, const Region& side);

// 2^d subcubes of [2m]^d; part b has a_i = m+1 iff bit (i-1) of b is set.
std::vector<Region> subcube_partition(int m, int d);

// Translate a region so that its lowest corner moves by `offset` (per axis).
Region translate(const Region& r, const std::vector<int>& offset);

}  // namespace bootperc
