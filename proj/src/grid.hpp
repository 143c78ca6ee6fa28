#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bootperc/lattice.hpp"

namespace bootperc::detail {

// Index arithmetic for a box of per-axis extents (axis 1 fastest).
struct Grid {
    std::vector<int> extent;
    std::vector<std::size_t> stride;
    Boundary boundary = Boundary::Open;
    std::size_t volume = 1;

    static Grid of(const LatticeShape& shape);
    static Grid box(const std::vector<int>& extents, Boundary boundary);

    int max_degree() const { return 2 * static_cast<int>(extent.size()); }

    // Calls f(j) once for every distinct neighbour j of site i.
    template <class F>
    void for_each_neighbor(std::size_t i, F&& f) const {
        const std::size_t dims = extent.size();
        for (std::size_t a = 0; a < dims; ++a) {
            const auto n = static_cast<std::size_t>(extent[a]);
            const std::size_t s = stride[a];
            const std::size_t c = (i / s) % n;
            if (boundary == Boundary::Open) {
                if (c > 0) f(i - s);
                if (c + 1 < n) f(i + s);
            } else {
                if (n == 1) continue;
                const std::size_t down = (c > 0) ? i - s : i + (n - 1) * s;
                const std::size_t up = (c + 1 < n) ? i + s : i - (n - 1) * s;
                f(down);
                if (up != down) f(up);
            }
        }
    }
};

// Frontier evolution over a grid; `initial` is a bitmap of grid.volume bits.
std::vector<std::int32_t> infection_times(const Grid& grid, const std::vector<std::uint64_t>& initial, int r);

}  // namespace bootperc::detail
