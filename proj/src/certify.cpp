#include "bootperc/certify.hpp"

#include <algorithm>
#include <map>

#include "bootperc/error.hpp"
#include "bootperc/oracle.hpp"
#include "bootperc/rng.hpp"
#include "bootperc/sampler.hpp"
#include "parallel.hpp"

namespace bootperc::certify {

Region rectangle_region(int d, int t, const Site& corner, int axis) {
    if (t < 0) throw InputError("rectangle needs t >= 0");
    if (axis < 1 || axis > d) throw InputError("rectangle axis must lie in 1..d");
    if (corner.dim() != d) throw InputError("rectangle corner has the wrong dimension");
    std::vector<AxisSpec> axes;
    for (int i = 0; i < d; ++i) {
        const int len = (i == axis - 1) ? 2 * t + 1 : 2;
        axes.push_back(AxisSpec::Interval(corner[i], corner[i] + len - 1));
    }
    return Region(std::move(axes));
}

SiteSet plant_rectangle(const LatticeShape& shape, int t, const Site& corner, int axis) {
    const Region box = rectangle_region(shape.d, t, corner, axis);
    if (!box.fits(shape)) throw InputError("rectangle " + format_region(box) + " does not fit the lattice");
    SiteSet initial = SiteSet::full(shape);
    for (const auto& x : enumerate_region(box, shape)) initial.erase(x);
    return initial;
}

std::optional<RectangleCertificate> find_empty_rectangle(const SiteSet& initial, int t) {
    if (t < 0) throw InputError("rectangle needs t >= 0");
    const auto& shape = initial.shape();
    const int d = shape.d;
    for (int axis = 1; axis <= d; ++axis) {
        std::vector<int> len(static_cast<std::size_t>(d), 2);
        len[static_cast<std::size_t>(axis - 1)] = 2 * t + 1;
        if (std::any_of(len.begin(), len.end(), [&](int l) { return l > shape.n; })) continue;
        // Offsets of the box's sites relative to its corner index.
        std::vector<std::size_t> offsets;
        {
            const Region box = rectangle_region(d, t, Site(std::vector<int>(static_cast<std::size_t>(d), 1)), axis);
            for (const auto& x : enumerate_region(box, shape)) offsets.push_back(site_index(x, shape));
        }
        for (std::size_t idx = 0; idx < shape.volume(); ++idx) {
            if (initial.contains(idx)) continue;
            const Site corner = site_at(idx, shape);
            bool fits = true;
            for (int i = 0; i < d && fits; ++i) fits = corner[i] + len[static_cast<std::size_t>(i)] - 1 <= shape.n;
            if (!fits) continue;
            const bool empty =
                std::none_of(offsets.begin(), offsets.end(), [&](std::size_t off) { return initial.contains(idx + off); });
            if (empty) return RectangleCertificate{rectangle_region(d, t, corner, axis), t, axis};
        }
    }
    return std::nullopt;
}

bool verify_lower_certificate(const SiteSet& initial, const ProcessParams& params, const RectangleCertificate& cert) {
    for (const auto& x : enumerate_region(cert.region, initial.shape()))
        if (initial.contains(x)) throw InputError("certificate box " + format_region(cert.region) + " is not empty");
    const auto time = percolation_time(initial, params);
    return !time || *time > cert.t;
}

SiteSet p_set(int d, int r, int t, const Site& center, const LatticeShape& shape) {
    if (shape.d != d || !is_valid_site(center, shape)) throw InputError("p_set centre is not in the lattice");
    if (r < 2 || r > d) throw InputError("p_set needs 2 <= r <= d");
    if (t < 0) throw InputError("p_set needs t >= 0");
    if (shape.boundary == Boundary::Torus && shape.n < 2 * t + 2)
        throw InputError("ball of radius t wraps around a torus with n < 2t + 2");
    const int free_axes = d - r + 1;
    SiteSet s(shape);
    std::vector<int> off(static_cast<std::size_t>(d), -t);
    while (true) {
        int norm = 0;
        bool allowed = true;
        for (int i = 0; i < d; ++i) {
            const int v = off[static_cast<std::size_t>(i)];
            norm += std::abs(v);
            if (i >= free_axes && v != 0 && v != 1) allowed = false;
        }
        if (allowed && norm <= t) {
            Site y = center;
            for (int i = 0; i < d; ++i) {
                int c = center[i] + off[static_cast<std::size_t>(i)];
                if (shape.boundary == Boundary::Torus) c = ((c - 1) % shape.n + shape.n) % shape.n + 1;
                if (c < 1 || c > shape.n) throw InputError("p_set leaves the open lattice");
                y[i] = c;
            }
            s.insert(y);
        }
        int i = 0;
        for (; i < d; ++i) {
            auto& v = off[static_cast<std::size_t>(i)];
            if (v < t) {
                ++v;
                break;
            }
            v = -t;
        }
        if (i == d) break;
    }
    return s;
}

Site lattice_center(const LatticeShape& shape) {
    return Site(std::vector<int>(static_cast<std::size_t>(shape.d), (shape.n + 1) / 2));
}

bool verify_extremal(int d, int r, int t, const LatticeShape& shape) {
    const Site center = lattice_center(shape);
    const SiteSet initial = p_set(d, r, t, center, shape).complement();
    const auto schedule = evolve_until_fixation(initial, ProcessParams{shape, r});
    return uninfected_at(center, t, schedule);
}

int exhaustive_extremal_check(int d, int r, int t) { return oracle::exact_extremal(d, r, t); }

std::vector<Site> extract_staircase(const InfectionSchedule& schedule, const Site& x, int t, int r) {
    const auto& shape = schedule.shape();
    if (shape.boundary != Boundary::Torus) throw InputError("staircase extraction needs a torus");
    if (shape.n < 3) throw InputError("staircase extraction needs n >= 3");
    if (r != shape.d) throw InputError("staircase extraction needs r = d");
    if (t < 0) throw InputError("time must be >= 0");
    if (!uninfected_at(x, t, schedule))
        throw InputError("site " + format_site(x) + " is infected by time " + std::to_string(t));
    std::vector<Site> path{x};
    Site v = x;
    for (int k = 0; k < t; ++k) {
        const int deadline = t - k - 1;  // the next site must be uninfected at this time
        bool found = false;
        for (int i = 0; i < shape.d && !found; ++i) {
            Site w = v;
            w[i] = w[i] % shape.n + 1;
            if (uninfected_at(w, deadline, schedule)) {
                v = std::move(w);
                found = true;
            }
        }
        if (!found)
            throw InternalFault("no uninfected forward neighbour of " + format_site(v) + " at time " +
                                std::to_string(deadline));
        path.push_back(v);
    }
    return path;
}

std::vector<Site> extract_staircase(const SiteSet& initial, const Site& x, int t, const ProcessParams& params) {
    return extract_staircase(evolve_until_fixation(initial, params), x, t, params.r);
}

// ---- seam events ----------------------------------------------------------

namespace {

// One coordinate slot of a B(., ., .) event. `Mid` is the symbol m of the
// event name, standing for the pair of seam coordinates {m, m+1}.
struct Slot {
    enum Kind { Mid, Fixed, Interval } kind;
    int lo = 0, hi = 0;
};

Slot mid() { return {Slot::Mid}; }
Slot at(int v) { return {Slot::Fixed, v, v}; }
Slot span_of(int a, int b) { return {Slot::Interval, a, b}; }

class SeamEvaluator {
public:
    SeamEvaluator(int m, const SiteSet& initial) : m_(m), initial_(initial) {}

    std::string sym(int v) const {
        if (v == 1) return "1";
        if (v == m_) return "m";
        if (v == m_ + 1) return "m+1";
        if (v == 2 * m_) return "2m";
        return std::to_string(v);
    }

    std::string name(const std::array<Slot, 3>& slots) const {
        std::string s = "B(";
        for (std::size_t i = 0; i < 3; ++i) {
            if (i) s += ',';
            const auto& sl = slots[i];
            if (sl.kind == Slot::Mid)
                s += "m";
            else if (sl.kind == Slot::Fixed)
                s += "[" + sym(sl.lo) + "]";
            else
                s += "(" + sym(sl.lo) + "," + sym(sl.hi) + ")";
        }
        return s + ")";
    }

    // At least one of the event's line segments holds an infected site.
    bool event(const std::array<Slot, 3>& slots) {
        const std::string key = name(slots);
        if (auto it = index_.find(key); it != index_.end()) return prims_[it->second].occurs;
        std::vector<std::vector<AxisSpec>> partial{{}};
        for (const auto& sl : slots) {
            std::vector<std::vector<AxisSpec>> next;
            for (const auto& pre : partial) {
                if (sl.kind == Slot::Mid) {
                    for (int v : {m_, m_ + 1}) {
                        auto a = pre;
                        a.push_back(AxisSpec::Fixed(v));
                        next.push_back(std::move(a));
                    }
                } else {
                    auto a = pre;
                    a.push_back(sl.kind == Slot::Fixed ? AxisSpec::Fixed(sl.lo) : AxisSpec::Interval(sl.lo, sl.hi));
                    next.push_back(std::move(a));
                }
            }
            partial = std::move(next);
        }
        SeamPrimitive prim;
        prim.name = key;
        for (auto& axes : partial) prim.segments.emplace_back(std::move(axes));
        prim.occurs = std::any_of(prim.segments.begin(), prim.segments.end(), [&](const Region& r) { return nonempty(r); });
        index_.emplace(key, prims_.size());
        prims_.push_back(std::move(prim));
        return prims_.back().occurs;
    }

    bool nonempty(const Region& r) const {
        const auto sites = enumerate_region(r, initial_.shape());
        return std::any_of(sites.begin(), sites.end(), [&](const Site& x) { return initial_.contains(x); });
    }

    std::vector<SeamPrimitive> take() { return std::move(prims_); }

private:
    int m_;
    const SiteSet& initial_;
    std::vector<SeamPrimitive> prims_;
    std::map<std::string, std::size_t> index_;
};

}  // namespace

const SeamPrimitive& SeamEventReport::primitive(const std::string& name) const {
    for (const auto& p : primitives)
        if (p.name == name) return p;
    throw InputError("no seam primitive named " + name);
}

SeamEventReport seam_events_d3(int m, const SiteSet& initial) {
    if (m < 2) throw InputError("seam events need m >= 2");
    if (!(initial.shape() == LatticeShape::make(3, 2 * m, Boundary::Open)))
        throw InputError("seam events need an initial set on the open lattice [2m]^3");
    SeamEvaluator ev(m, initial);
    const Slot whole = span_of(1, 2 * m);
    const Slot low = span_of(1, m);
    const Slot high = span_of(m + 1, 2 * m);

    SeamEventReport rep;
    rep.m = m;
    auto& b = rep.b;
    b[1] = b[2] = true;
    for (int a3 : {2 * m, m + 1, m, 1}) {
        b[1] = ev.event({mid(), whole, at(a3)}) && b[1];
        b[2] = ev.event({whole, mid(), at(a3)}) && b[2];
    }
    b[3] = ev.event({mid(), mid(), high}) && ev.event({mid(), mid(), low});
    b[4] = ev.event({mid(), at(1), whole}) && ev.event({whole, at(1), mid()});
    b[5] = ev.event({at(2 * m), mid(), whole}) && ev.event({at(2 * m), whole, mid()});
    b[6] = ev.event({whole, at(2 * m), mid()}) && ev.event({mid(), at(2 * m), whole});
    b[7] = ev.event({at(1), mid(), whole}) && ev.event({at(1), whole, mid()});
    b[8] = b[9] = b[10] = true;
    for (int a : {2 * m, m + 1}) {
        b[8] = ev.event({mid(), at(a), whole}) && ev.event({whole, at(a), mid()}) && b[8];
        b[9] = ev.event({at(a), mid(), whole}) && ev.event({at(a), whole, mid()}) && b[9];
        b[10] = ev.event({mid(), whole, at(a)}) && ev.event({whole, mid(), at(a)}) && b[10];
    }
    b[8] = ev.event({mid(), high, mid()}) && b[8];
    b[9] = ev.event({high, mid(), mid()}) && b[9];
    b[10] = ev.event({mid(), mid(), high}) && b[10];
    rep.b_all = b[1] && b[2] && b[3] && b[4] && b[5] && b[6] && b[7];

    auto seg = [&](AxisSpec x, AxisSpec y, AxisSpec z) { return ev.nonempty(Region{x, y, z}); };
    const auto I = [](int lo, int hi) { return AxisSpec::Interval(lo, hi); };
    const auto F = [](int v) { return AxisSpec::Fixed(v); };
    rep.d_y1 = seg(I(1, m), F(1), F(m)) && seg(F(m), F(1), I(1, m));
    rep.d_x1 = seg(F(1), I(1, m), F(m)) && seg(F(1), F(m), I(1, m));
    rep.d_z1 = seg(I(1, m), F(m), F(1)) && seg(F(m), I(1, m), F(1));
    rep.primitives = ev.take();

    const auto parts = subcube_partition(m, 3);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        rep.subcubes[i] = classify_cube(parts[i], initial, 3);
        if (rep.subcubes[i] == CubeClass::Bad) ++rep.bad_subcubes;
    }
    rep.a = rep.bad_subcubes == 0;
    rep.a1 = rep.bad_subcubes == 1;
    rep.a2 = rep.bad_subcubes == 2;
    const Region whole_cube{I(1, 2 * m), I(1, 2 * m), I(1, 2 * m)};
    rep.e = is_good(classify_cube(whole_cube, initial, 3));
    return rep;
}

AuditResult audit_lemma_AB(int m, double p, int trials, std::uint64_t seed, Exec exec) {
    if (m < 3) throw InputError("audit needs m >= 3");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
    if (trials < 1) throw InputError("trials must be >= 1");
    const auto shape = LatticeShape::make(3, 2 * m, Boundary::Open);
    AuditResult out;
    out.m = m;
    out.p = p;
    out.rows.resize(static_cast<std::size_t>(trials));
    detail::parallel_for(trials, exec, [&](std::int64_t k) {
        auto& row = out.rows[static_cast<std::size_t>(k)];
        row.trial_seed = derive_seed(seed, static_cast<std::uint64_t>(k));
        const auto field = bernoulli_field(shape, p, row.trial_seed);
        const auto rep = seam_events_d3(m, field);
        row.a = rep.a;
        row.b = rep.b_all;
        row.e = rep.e;
        row.counterexample = rep.a && rep.b_all && !rep.e;
    }, 8);
    for (const auto& row : out.rows) {
        if (!row.counterexample) continue;
        ++out.counterexamples;
        out.counterexample_sets.push_back(bernoulli_field(shape, p, row.trial_seed));
    }
    return out;
}

}  // namespace bootperc::certify
