#include "bootperc/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "bootperc/error.hpp"
#include "bootperc/site_set.hpp"

namespace bootperc {

std::string to_string(Boundary b) { return b == Boundary::Torus ? "torus" : "open"; }

Boundary parse_boundary(std::string_view text) {
    if (text == "torus") return Boundary::Torus;
    if (text == "open") return Boundary::Open;
    throw InputError("boundary must be 'torus' or 'open', got '" + std::string(text) + "'");
}

LatticeShape LatticeShape::make(int d, int n, Boundary boundary) {
    if (d < 1) throw InputError("dimension must be >= 1");
    if (n < 1) throw InputError("side length must be >= 1");
    std::size_t v = 1;
    for (int i = 0; i < d; ++i) {
        if (v > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(n))
            throw CapacityError("n^d does not fit the site index");
        v *= static_cast<std::size_t>(n);
    }
    return LatticeShape{d, n, boundary};
}

std::size_t LatticeShape::volume() const {
    std::size_t v = 1;
    for (int i = 0; i < d; ++i) v *= static_cast<std::size_t>(n);
    return v;
}

bool is_valid_site(const Site& x, const LatticeShape& shape) {
    if (x.dim() != shape.d) return false;
    for (int i = 0; i < shape.d; ++i)
        if (x[i] < 1 || x[i] > shape.n) return false;
    return true;
}

std::size_t site_index(const Site& x, const LatticeShape& shape) {
    if (!is_valid_site(x, shape)) throw InputError("site " + format_site(x) + " is not in the lattice");
    std::size_t idx = 0;
    for (int i = shape.d - 1; i >= 0; --i) idx = idx * static_cast<std::size_t>(shape.n) + static_cast<std::size_t>(x[i] - 1);
    return idx;
}

Site site_at(std::size_t index, const LatticeShape& shape) {
    if (index >= shape.volume()) throw InputError("site index out of range");
    std::vector<int> c(static_cast<std::size_t>(shape.d));
    for (auto& v : c) {
        v = static_cast<int>(index % static_cast<std::size_t>(shape.n)) + 1;
        index /= static_cast<std::size_t>(shape.n);
    }
    return Site(std::move(c));
}

std::size_t Region::size() const {
    std::size_t s = 1;
    for (const auto& a : axes_) s *= static_cast<std::size_t>(std::max(0, a.length()));
    return s;
}

int Region::interval_count() const {
    return static_cast<int>(std::count_if(axes_.begin(), axes_.end(), [](const AxisSpec& a) { return !a.fixed; }));
}

bool Region::is_cube() const {
    if (axes_.empty() || !is_subcube()) return false;
    return std::all_of(axes_.begin(), axes_.end(), [&](const AxisSpec& a) { return a.length() == axes_[0].length(); });
}

bool Region::contains(const Site& x) const {
    if (x.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (!axis(i).contains(x[i])) return false;
    return true;
}

bool Region::fits(const LatticeShape& shape) const {
    if (dim() != shape.d) return false;
    return std::all_of(axes_.begin(), axes_.end(),
                       [&](const AxisSpec& a) { return 1 <= a.lo && a.lo <= a.hi && a.hi <= shape.n; });
}

namespace {

class Scanner {
public:
    explicit Scanner(std::string_view text) {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    }
    bool done() const { return pos_ == s_.size(); }
    char peek() const { return done() ? '\0' : s_[pos_]; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    int integer() {
        std::size_t start = pos_;
        if (peek() == '-') ++pos_;
        while (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_ || (s_[start] == '-' && pos_ == start + 1)) fail("expected integer");
        return std::stoi(s_.substr(start, pos_ - start));
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("cannot parse '" + s_ + "' at offset " + std::to_string(pos_) + ": " + what);
    }

private:
    std::string s_;
    std::size_t pos_ = 0;
};

std::vector<int> parse_tuple(Scanner& sc) {
    std::vector<int> v;
    sc.expect('(');
    v.push_back(sc.integer());
    while (sc.accept(',')) v.push_back(sc.integer());
    sc.expect(')');
    return v;
}

}  // namespace

Region parse_region(std::string_view text) {
    Scanner sc(text);
    std::vector<AxisSpec> axes;
    sc.expect('[');
    do {
        auto v = parse_tuple(sc);
        if (v.size() == 1)
            axes.push_back(AxisSpec::Fixed(v[0]));
        else if (v.size() == 2) {
            if (v[0] > v[1]) sc.fail("interval with lo > hi");
            axes.push_back(AxisSpec::Interval(v[0], v[1]));
        } else
            sc.fail("axis spec must have one or two entries");
    } while (sc.accept(','));
    sc.expect(']');
    if (!sc.done()) sc.fail("trailing characters");
    return Region(std::move(axes));
}

Site parse_site(std::string_view text) {
    Scanner sc(text);
    auto v = parse_tuple(sc);
    if (!sc.done()) sc.fail("trailing characters");
    return Site(std::move(v));
}

std::string format_region(const Region& r) {
    std::ostringstream out;
    out << '[';
    for (int i = 0; i < r.dim(); ++i) {
        if (i) out << ',';
        const auto& a = r.axis(i);
        if (a.fixed)
            out << '(' << a.lo << ')';
        else
            out << '(' << a.lo << ',' << a.hi << ')';
    }
    out << ']';
    return out.str();
}

std::string format_site(const Site& x) {
    std::ostringstream out;
    out << '(';
    for (int i = 0; i < x.dim(); ++i) out << (i ? "," : "") << x[i];
    out << ')';
    return out.str();
}

std::vector<Site> neighbors(const Site& x, const LatticeShape& shape) {
    if (!is_valid_site(x, shape)) throw InputError("site " + format_site(x) + " is not in the lattice");
    std::vector<Site> out;
    for (int i = 0; i < shape.d; ++i) {
        for (int step : {-1, +1}) {
            int c = x[i] + step;
            if (c < 1 || c > shape.n) {
                if (shape.boundary == Boundary::Open) continue;
                c = (c < 1) ? shape.n : 1;
            }
            if (c == x[i]) continue;  // n == 1 on the torus
            Site y = x;
            y[i] = c;
            if (std::find(out.begin(), out.end(), y) == out.end()) out.push_back(std::move(y));
        }
    }
    return out;
}

std::vector<Site> enumerate_region(const Region& r, const LatticeShape& shape) {
    if (!r.fits(shape)) throw InputError("region " + format_region(r) + " is outside the lattice");
    std::vector<Site> out;
    out.reserve(r.size());
    std::vector<int> c(static_cast<std::size_t>(r.dim()));
    for (int i = 0; i < r.dim(); ++i) c[static_cast<std::size_t>(i)] = r.axis(i).lo;
    while (true) {
        out.emplace_back(c);
        int i = 0;
        for (; i < r.dim(); ++i) {
            auto& ci = c[static_cast<std::size_t>(i)];
            if (ci < r.axis(i).hi) {
                ++ci;
                break;
            }
            ci = r.axis(i).lo;
        }
        if (i == r.dim()) break;
    }
    return out;
}

std::vector<Region> sides(int m, int d) {
    if (m < 2) throw InputError("sides need m >= 2");
    if (d < 1) throw InputError("dimension must be >= 1");
    std::vector<Region> out;
    for (int j = 0; j < d; ++j) {
        const int others = d - 1;
        for (unsigned mask = 0; mask < (1u << others); ++mask) {
            std::vector<AxisSpec> axes;
            int bit = 0;
            for (int i = 0; i < d; ++i) {
                if (i == j) {
                    axes.push_back(AxisSpec::Interval(1, m));
                } else {
                    axes.push_back(AxisSpec::Fixed((mask >> bit) & 1u ? m : 1));
                    ++bit;
                }
            }
            out.emplace_back(std::move(axes));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SiteSet interior(int m, int d) {
    if (m < 2) throw InputError("interior needs m >= 2");
    if (d < 2) throw InputError("interior needs d >= 2");
    const auto shape = LatticeShape::make(d, m, Boundary::Open);
    SiteSet s = SiteSet::full(shape);
    for (const auto& side : sides(m, d))
        for (const auto& x : enumerate_region(side, shape)) s.erase(x);
    return s;
}

std::vector<Region> perm_orbit(const Region& r) {
    std::vector<int> perm(static_cast<std::size_t>(r.dim()));
    std::iota(perm.begin(), perm.end(), 0);
    std::set<Region> orbit;
    do {
        std::vector<AxisSpec> axes;
        for (int i : perm) axes.push_back(r.axis(i));
        orbit.emplace(std::move(axes));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {orbit.begin(), orbit.end()};
}

SiteSet ball(int t, const Site& center, const LatticeShape& shape) {
    if (t < 0) throw InputError("ball radius must be >= 0");
    if (!is_valid_site(center, shape)) throw InputError("ball center is not in the lattice");
    SiteSet s(shape);
    const std::size_t v = shape.volume();
    for (std::size_t idx = 0; idx < v; ++idx) {
        const Site y = site_at(idx, shape);
        long dist = 0;
        for (int i = 0; i < shape.d && dist <= t; ++i) {
            int delta = std::abs(y[i] - center[i]);
            if (shape.boundary == Boundary::Torus) delta = std::min(delta, shape.n - delta);
            dist += delta;
        }
        if (dist <= t) s.insert(idx);
    }
    return s;
}

std::vector<Region> buffers(const Region& cube, const Region& side) {
    if (!cube.is_cube()) throw InputError("buffers need a cube");
    const int m = cube.axis(0).length();
    if (m < 3) throw InputError("buffers need side length m >= 3");
    if (side.dim() != cube.dim() || !side.is_line_segment())
        throw InputError("region " + format_region(side) + " is not a side of " + format_region(cube));
    int k = 0;
    for (int i = 0; i < side.dim(); ++i) {
        const auto& s = side.axis(i);
        const auto& c = cube.axis(i);
        if (!s.fixed) {
            k = i;
            if (s.lo != c.lo || s.hi != c.hi) throw InputError("side interval does not span the cube");
        } else if (s.lo != c.lo && s.lo != c.hi) {
            throw InputError("region " + format_region(side) + " is not a side of " + format_region(cube));
        }
    }
    std::vector<Region> out;
    for (int j = 0; j < side.dim(); ++j) {
        if (j == k) continue;
        std::vector<AxisSpec> axes = side.axes();
        axes[static_cast<std::size_t>(k)] = AxisSpec::Interval(cube.axis(k).lo + 1, cube.axis(k).hi - 1);
        const int a = side.axis(j).lo;
        axes[static_cast<std::size_t>(j)] =
            (a == cube.axis(j).lo) ? AxisSpec::Interval(a - 1, a) : AxisSpec::Interval(a, a + 1);
        out.emplace_back(std::move(axes));
    }
    return out;
}

std::vector<Region> subcube_partition(int m, int d) {
    if (m < 1) throw InputError("subcube partition needs m >= 1");
    std::vector<Region> out;
    for (unsigned b = 0; b < (1u << d); ++b) {
        std::vector<AxisSpec> axes;
        for (int i = 0; i < d; ++i) {
            const int a = ((b >> i) & 1u) ? m + 1 : 1;
            axes.push_back(AxisSpec::Interval(a, a + m - 1));
        }
        out.emplace_back(std::move(axes));
    }
    return out;
}

Region translate(const Region& r, const std::vector<int>& offset) {
    if (static_cast<int>(offset.size()) != r.dim()) throw InputError("offset dimension mismatch");
    std::vector<AxisSpec> axes = r.axes();
    for (std::size_t i = 0; i < axes.size(); ++i) {
        axes[i].lo += offset[i];
        axes[i].hi += offset[i];
    }
    return Region(std::move(axes));
}

}  // namespace bootperc
