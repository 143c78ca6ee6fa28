#include "bootperc/engine.hpp"

#include <algorithm>
#include <sstream>

#include "bootperc/error.hpp"
#include "grid.hpp"

namespace bootperc {

namespace detail {

Grid Grid::of(const LatticeShape& shape) { return box(std::vector<int>(static_cast<std::size_t>(shape.d), shape.n), shape.boundary); }

Grid Grid::box(const std::vector<int>& extents, Boundary boundary) {
    Grid g;
    g.extent = extents;
    g.boundary = boundary;
    g.stride.resize(extents.size());
    std::size_t s = 1;
    for (std::size_t a = 0; a < extents.size(); ++a) {
        g.stride[a] = s;
        s *= static_cast<std::size_t>(extents[a]);
    }
    g.volume = s;
    return g;
}

std::vector<std::int32_t> infection_times(const Grid& grid, const std::vector<std::uint64_t>& initial, int r) {
    const std::size_t v = grid.volume;
    std::vector<std::int32_t> time(v, kNever);
    std::vector<std::uint8_t> count(v, 0);
    std::vector<std::size_t> frontier, next;
    frontier.reserve(v / 4 + 1);
    for (std::size_t k = 0; k < initial.size(); ++k) {
        std::uint64_t w = initial[k];
        while (w) {
            const std::size_t i = k * 64 + static_cast<std::size_t>(std::countr_zero(w));
            w &= w - 1;
            time[i] = 0;
            frontier.push_back(i);
        }
    }
    // r <= 0 infects everything at step 1; r above the degree never fires.
    if (r <= 0) {
        for (auto& t : time)
            if (t == kNever) t = 1;
        return time;
    }
    if (r > grid.max_degree()) return time;
    const auto threshold = static_cast<std::uint8_t>(r);
    std::int32_t step = 0;
    while (!frontier.empty()) {
        ++step;
        next.clear();
        for (std::size_t i : frontier) {
            grid.for_each_neighbor(i, [&](std::size_t j) {
                if (time[j] != kNever) return;
                if (++count[j] == threshold) next.push_back(j);
            });
        }
        for (std::size_t j : next) time[j] = step;
        frontier.swap(next);
    }
    return time;
}

}  // namespace detail

InfectionSchedule::InfectionSchedule(LatticeShape shape, std::vector<std::int32_t> times)
    : shape_(shape), times_(std::move(times)) {
    if (times_.size() != shape_.volume()) throw InputError("schedule length does not match the lattice");
}

SiteSet InfectionSchedule::level_set(int t) const {
    SiteSet s(shape_);
    for (std::size_t i = 0; i < times_.size(); ++i)
        if (times_[i] <= t) s.insert(i);
    return s;
}

SiteSet InfectionSchedule::span() const { return level_set(kNever - 1); }

int InfectionSchedule::fixation_step() const {
    int last = 0;
    for (auto t : times_)
        if (t != kNever) last = std::max(last, static_cast<int>(t));
    return last;
}

bool InfectionSchedule::percolates() const {
    return std::none_of(times_.begin(), times_.end(), [](std::int32_t t) { return t == kNever; });
}

std::optional<int> InfectionSchedule::percolation_time() const {
    if (!percolates()) return std::nullopt;
    return fixation_step();
}

SiteSet evolve_step(const SiteSet& infected, const ProcessParams& params, Exec exec) {
    if (!(infected.shape() == params.shape)) throw InputError("infected set lives on a different lattice");
    const auto grid = detail::Grid::of(params.shape);
    SiteSet out = infected;
    const auto& in = infected.words();
    auto& words = out.words();
    const auto nwords = static_cast<std::ptrdiff_t>(words.size());
    const int r = params.r;
    // Each thread owns whole 64-bit words of the output, so writes never race.
    auto word_kernel = [&](std::ptrdiff_t k) {
        std::uint64_t add = 0;
        const std::size_t base = static_cast<std::size_t>(k) * 64;
        const std::size_t end = std::min(grid.volume, base + 64);
        for (std::size_t i = base; i < end; ++i) {
            if ((in[i >> 6] >> (i & 63)) & 1u) continue;
            int c = 0;
            grid.for_each_neighbor(i, [&](std::size_t j) { c += static_cast<int>((in[j >> 6] >> (j & 63)) & 1u); });
            if (c >= r) add |= std::uint64_t{1} << (i - base);
        }
        words[static_cast<std::size_t>(k)] |= add;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < nwords; ++k) word_kernel(k);
    } else {
        for (std::ptrdiff_t k = 0; k < nwords; ++k) word_kernel(k);
    }
    return out;
}

InfectionSchedule evolve_until_fixation(const SiteSet& initial, const ProcessParams& params) {
    if (!(initial.shape() == params.shape)) throw InputError("initial set lives on a different lattice");
    return {params.shape, detail::infection_times(detail::Grid::of(params.shape), initial.words(), params.r)};
}

InfectionSchedule evolve_naive(const SiteSet& initial, const ProcessParams& params) {
    if (!(initial.shape() == params.shape)) throw InputError("initial set lives on a different lattice");
    std::vector<std::int32_t> time(params.shape.volume(), kNever);
    SiteSet cur = initial;
    for (auto i : cur.indices()) time[i] = 0;
    for (std::int32_t t = 1;; ++t) {
        SiteSet nxt = evolve_step(cur, params, Exec::Serial);
        if (nxt == cur) break;
        for (auto i : nxt.indices())
            if (time[i] == kNever) time[i] = t;
        cur = std::move(nxt);
    }
    return {params.shape, std::move(time)};
}

SiteSet span(const SiteSet& initial, const ProcessParams& params) { return evolve_until_fixation(initial, params).span(); }

std::optional<int> percolation_time(const SiteSet& initial, const ProcessParams& params) {
    return evolve_until_fixation(initial, params).percolation_time();
}

std::string to_string(CubeClass c) {
    switch (c) {
        case CubeClass::StronglyGood: return "strongly_good";
        case CubeClass::SemiGood: return "semi_good";
        case CubeClass::Bad: return "bad";
    }
    return "?";
}

namespace {

struct BoxRun {
    detail::Grid grid;
    std::vector<std::int32_t> time;
};

BoxRun run_in_box(const Region& box, const SiteSet& initial, int r) {
    if (!box.is_subcube()) throw InputError("region " + format_region(box) + " is not a subcube");
    if (!box.fits(initial.shape())) throw InputError("region " + format_region(box) + " is outside the lattice");
    std::vector<int> extents;
    for (const auto& a : box.axes()) extents.push_back(a.length());
    auto grid = detail::Grid::box(extents, Boundary::Open);
    const auto& shape = initial.shape();
    std::vector<std::uint64_t> local((grid.volume + 63) / 64, 0);
    std::vector<int> c(extents.size());
    for (std::size_t li = 0; li < grid.volume; ++li) {
        std::size_t gi = 0;
        std::size_t rest = li;
        std::size_t mul = 1;
        for (std::size_t a = 0; a < extents.size(); ++a) {
            const auto off = rest % static_cast<std::size_t>(extents[a]);
            rest /= static_cast<std::size_t>(extents[a]);
            gi += (static_cast<std::size_t>(box.axis(static_cast<int>(a)).lo - 1) + off) * mul;
            mul *= static_cast<std::size_t>(shape.n);
        }
        if (initial.contains(gi)) local[li >> 6] |= std::uint64_t{1} << (li & 63);
    }
    auto time = detail::infection_times(grid, local, r);
    return {std::move(grid), std::move(time)};
}

}  // namespace

InfectionSchedule evolve_inside(const Region& box, const SiteSet& initial, int r) {
    if (!box.is_cube()) throw InputError("evolve_inside needs a cube region");
    auto run = run_in_box(box, initial, r);
    return {LatticeShape::make(box.dim(), box.axis(0).length(), Boundary::Open), std::move(run.time)};
}

bool is_internally_spanned(const Region& box, const SiteSet& initial, int r) {
    auto run = run_in_box(box, initial, r);
    return std::none_of(run.time.begin(), run.time.end(), [](std::int32_t t) { return t == kNever; });
}

CubeClass classify_cube(const Region& cube, const SiteSet& initial, int r) {
    if (!cube.is_cube()) throw InputError("region " + format_region(cube) + " is not a cube");
    const int m = cube.axis(0).length();
    if (m < 2) throw InputError("classification needs side length m >= 2");
    if (cube.dim() < 2) throw InputError("classification needs d >= 2");
    const auto schedule = evolve_inside(cube, initial, r);
    if (schedule.percolates()) return CubeClass::StronglyGood;
    const SiteSet inner = interior(m, cube.dim());
    return inner.subset_of(schedule.span()) ? CubeClass::SemiGood : CubeClass::Bad;
}

bool uninfected_at(const Site& x, int t, const InfectionSchedule& schedule) {
    if (t < 0) throw InputError("time must be >= 0");
    return schedule.time(x) > t;
}

std::string schedule_csv(const InfectionSchedule& schedule) {
    const auto& shape = schedule.shape();
    std::ostringstream out;
    out << "site_index";
    for (int i = 1; i <= shape.d; ++i) out << ",x" << i;
    out << ",time\n";
    for (std::size_t idx = 0; idx < shape.volume(); ++idx) {
        out << idx;
        const Site x = site_at(idx, shape);
        for (int c : x.coords()) out << ',' << c;
        const auto t = schedule.time(idx);
        out << ',';
        if (t == kNever)
            out << "never";
        else
            out << t;
        out << '\n';
    }
    return out.str();
}

}  // namespace bootperc
