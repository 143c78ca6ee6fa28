#include "bootperc/cli.hpp"

#include <omp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <new>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bootperc/bounds.hpp"
#include "bootperc/certify.hpp"
#include "bootperc/error.hpp"
#include "bootperc/oracle.hpp"
#include "bootperc/rng.hpp"
#include "bootperc/sampler.hpp"

namespace bootperc::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// ---- config ------------------------------------------------------------------

namespace {

const std::set<std::string> kCommands{"simulate", "sweep", "eta", "pc", "certify", "audit", "oracle", "path", "bounds"};

const std::set<std::string> kKeys{"command", "d",        "n",     "boundary", "r",      "p",
                                  "trials",  "seed",     "threads", "out",    "t",      "m",
                                  "quantiles", "delta",  "lambda", "p0",      "C",      "B",
                                  "eta_m",   "t_prime",  "tol",   "trials_per_probe", "site", "position",
                                  "axis",    "initial"};

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
    throw ConfigError("config field '" + key + "': " + what);
}

int get_int(const json& j, const std::string& key) {
    if (!j.is_number_integer()) field_error(key, "expected an integer");
    return j.get<int>();
}

double get_real(const json& j, const std::string& key) {
    if (!j.is_number()) field_error(key, "expected a number");
    return j.get<double>();
}

std::vector<int> get_int_list(const json& j, const std::string& key) {
    if (j.is_array()) {
        std::vector<int> v;
        for (const auto& e : j) v.push_back(get_int(e, key));
        if (v.empty()) field_error(key, "list must not be empty");
        return v;
    }
    return {get_int(j, key)};
}

std::vector<double> get_real_list(const json& j, const std::string& key) {
    if (j.is_array()) {
        std::vector<double> v;
        for (const auto& e : j) v.push_back(get_real(e, key));
        if (v.empty()) field_error(key, "list must not be empty");
        return v;
    }
    return {get_real(j, key)};
}

Site get_site(const json& j, const std::string& key) {
    try {
        if (j.is_string()) return parse_site(j.get<std::string>());
        if (j.is_array()) return Site(get_int_list(j, key));
    } catch (const InputError& e) {
        field_error(key, e.what());
    }
    field_error(key, "expected a site like \"(1,2)\" or [1,2]");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (!kKeys.count(key)) field_error(key, "unknown key");
        if (key == "command") {
            if (!v.is_string()) field_error(key, "expected a string");
            cfg.command = v.get<std::string>();
        } else if (key == "d") cfg.d = get_int(v, key);
        else if (key == "n") cfg.n_list = get_int_list(v, key);
        else if (key == "boundary") {
            if (!v.is_string()) field_error(key, "expected \"torus\" or \"open\"");
            try {
                cfg.boundary = parse_boundary(v.get<std::string>());
            } catch (const InputError& e) {
                field_error(key, e.what());
            }
        } else if (key == "r") cfg.r = get_int(v, key);
        else if (key == "p") cfg.p_grid = get_real_list(v, key);
        else if (key == "trials") cfg.trials = get_int(v, key);
        else if (key == "seed") {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                field_error(key, "expected a non-negative 64-bit integer");
            cfg.seed = v.get<std::uint64_t>();
        } else if (key == "threads") cfg.threads = get_int(v, key);
        else if (key == "out") {
            if (!v.is_string()) field_error(key, "expected a path string");
            cfg.out = v.get<std::string>();
        } else if (key == "t") cfg.t_list = get_int_list(v, key);
        else if (key == "m") cfg.m_list = get_int_list(v, key);
        else if (key == "quantiles") cfg.quantiles = get_real_list(v, key);
        else if (key == "delta") cfg.delta = get_real(v, key);
        else if (key == "lambda") cfg.lambda = get_real(v, key);
        else if (key == "p0") cfg.p0 = get_real(v, key);
        else if (key == "C") cfg.C = get_real(v, key);
        else if (key == "B") cfg.B = get_real(v, key);
        else if (key == "eta_m") cfg.eta_m = get_real(v, key);
        else if (key == "t_prime") cfg.t_prime = get_int(v, key);
        else if (key == "tol") cfg.tol = get_real(v, key);
        else if (key == "trials_per_probe") cfg.trials_per_probe = get_int(v, key);
        else if (key == "site") cfg.site = get_site(v, key);
        else if (key == "position") cfg.position = get_site(v, key);
        else if (key == "axis") cfg.axis = get_int(v, key);
        else if (key == "initial") {
            if (!v.is_string()) field_error(key, "expected a path string");
            cfg.initial = v.get<std::string>();
        }
    }
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["d"] = cfg.d;
    j["n"] = cfg.n_list;
    j["boundary"] = to_string(cfg.boundary);
    j["r"] = cfg.threshold();
    j["p"] = cfg.p_grid;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["out"] = cfg.out;
    if (!cfg.t_list.empty()) j["t"] = cfg.t_list;
    if (!cfg.m_list.empty()) j["m"] = cfg.m_list;
    j["quantiles"] = cfg.quantiles;
    j["delta"] = cfg.delta;
    if (cfg.lambda) j["lambda"] = *cfg.lambda;
    j["p0"] = cfg.p0;
    j["C"] = cfg.C;
    j["B"] = cfg.B;
    j["eta_m"] = cfg.eta_m;
    j["t_prime"] = cfg.t_prime;
    j["tol"] = cfg.tol;
    j["trials_per_probe"] = cfg.trials_per_probe;
    if (cfg.site) j["site"] = format_site(*cfg.site);
    if (cfg.position) j["position"] = format_site(*cfg.position);
    j["axis"] = cfg.axis;
    if (!cfg.initial.empty()) j["initial"] = cfg.initial;
    return j.dump(2);
}

void validate(const ExperimentConfig& cfg) {
    if (!kCommands.count(cfg.command))
        field_error("command", "must be one of simulate, sweep, eta, pc, certify, audit, oracle, path, bounds; got '" +
                                   cfg.command + "'");
    if (cfg.d < 1 || cfg.d > 16) field_error("d", "must lie in 1..16");
    for (int n : cfg.n_list)
        if (n < 1) field_error("n", "every side length must be >= 1");
    if (cfg.r < 0) field_error("r", "must be >= 1");
    for (double p : cfg.p_grid)
        if (!(p >= 0.0 && p <= 1.0)) field_error("p", "every probability must lie in [0, 1]; got " + format_real(p));
    if (cfg.trials < 1) field_error("trials", "must be >= 1");
    if (cfg.threads < 0) field_error("threads", "must be >= 0");
    for (int t : cfg.t_list)
        if (t < 0) field_error("t", "must be >= 0");
    for (int m : cfg.m_list)
        if (m < 1) field_error("m", "must be >= 1");
    for (double q : cfg.quantiles)
        if (!(q > 0.0 && q < 1.0)) field_error("quantiles", "levels must lie in (0, 1)");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) field_error("delta", "must lie in (0, 1)");
    if (cfg.lambda && !(*cfg.lambda > 0.0)) field_error("lambda", "must be > 0");
    if (!(cfg.p0 > 0.0)) field_error("p0", "must be > 0");
    if (!(cfg.eta_m >= 0.0 && cfg.eta_m <= 1.0)) field_error("eta_m", "must lie in [0, 1]");
    if (cfg.t_prime < 0) field_error("t_prime", "must be >= 0");
    if (!(cfg.tol > 0.0)) field_error("tol", "must be > 0");
    if (cfg.trials_per_probe < 1) field_error("trials_per_probe", "must be >= 1");
    if (cfg.axis < 1 || cfg.axis > cfg.d) field_error("axis", "must lie in 1..d");
    if (cfg.site && cfg.site->dim() != cfg.d) field_error("site", "dimension does not match d");
    if (cfg.position && cfg.position->dim() != cfg.d) field_error("position", "dimension does not match d");

    const auto& c = cfg.command;
    if (c == "sweep")
        for (int n : cfg.n_list)
            if (n < 2) field_error("n", "sweep needs n >= 2 (rho divides by ln n)");
    if (c == "eta" || c == "audit") {
        if (cfg.m_list.empty()) field_error("m", "required by " + c);
        for (int m : cfg.m_list)
            if (m < (c == "audit" ? 3 : 2)) field_error("m", c == "audit" ? "audit needs m >= 3" : "eta needs m >= 2");
        if (c == "eta" && cfg.d < 2) field_error("d", "eta needs d >= 2");
    }
    if ((c == "certify" || c == "path") && cfg.t_list.empty()) field_error("t", "required by " + c);
    if (c == "path" && !cfg.site) field_error("site", "required by path");
    if (c == "path" && cfg.boundary != Boundary::Torus) field_error("boundary", "path extraction runs on the torus");
}

// ---- runner ------------------------------------------------------------------

namespace {

struct Table {
    std::string name;
    std::string header;
    std::vector<std::string> rows;
};

class Row {
public:
    Row& operator<<(const std::string& s) { return add(s); }
    Row& operator<<(const char* s) { return add(s); }
    Row& operator<<(int v) { return add(std::to_string(v)); }
    Row& operator<<(long v) { return add(std::to_string(v)); }
    Row& operator<<(unsigned long v) { return add(std::to_string(v)); }
    Row& operator<<(unsigned long long v) { return add(std::to_string(v)); }
    Row& operator<<(long long v) { return add(std::to_string(v)); }
    Row& operator<<(double v) { return add(format_real(v)); }
    Row& operator<<(bool v) { return add(v ? "true" : "false"); }
    std::string str() const { return s_; }

private:
    Row& add(const std::string& s) {
        if (!first_) s_ += ',';
        first_ = false;
        s_ += s;
        return *this;
    }
    std::string s_;
    bool first_ = true;
};

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

std::string time_or_never(const std::optional<int>& t) { return t ? std::to_string(*t) : "never"; }

std::string coords_header(int d) {
    std::string h;
    for (int i = 1; i <= d; ++i) h += ",x" + std::to_string(i);
    return h;
}

std::string coords(const Site& x) {
    std::string s;
    for (int c : x.coords()) s += "," + std::to_string(c);
    return s;
}

// Output of one command before anything is written.
struct Outputs {
    std::vector<Table> tables;
    std::vector<std::pair<std::string, std::string>> blobs;  // extra files (bitmaps)
    std::string failure;                                      // non-empty: invariant violated
};

LatticeShape shape_for(const ExperimentConfig& cfg, int n) { return LatticeShape::make(cfg.d, n, cfg.boundary); }

SiteSet initial_or_field(const ExperimentConfig& cfg, const LatticeShape& shape, double p, std::uint64_t seed) {
    if (cfg.initial.empty()) return bernoulli_field(shape, p, seed);
    std::ifstream in(cfg.initial);
    if (!in) field_error("initial", "cannot read " + cfg.initial);
    std::stringstream buf;
    buf << in.rdbuf();
    SiteSet s;
    try {
        s = from_hex(buf.str());
    } catch (const InputError& e) {
        field_error("initial", e.what());
    }
    if (!(s.shape() == shape)) field_error("initial", "bitmap shape does not match d, n, boundary");
    return s;
}

Outputs cmd_simulate(const ExperimentConfig& cfg) {
    Outputs out;
    const auto shape = shape_for(cfg, cfg.n_list.front());
    const double p = cfg.p_grid.front();
    const auto initial = initial_or_field(cfg, shape, p, cfg.seed);
    const ProcessParams params{shape, cfg.threshold()};
    const auto schedule = evolve_until_fixation(initial, params);

    Table sched{"schedule.csv", "", {}};
    std::istringstream lines(schedule_csv(schedule));
    std::getline(lines, sched.header);
    for (std::string line; std::getline(lines, line);) sched.rows.push_back(line);
    Table summary{"simulate.csv", "d,n,boundary,r,p,seed,initial_size,span_size,T_or_never", {}};
    summary.rows.push_back((Row() << shape.d << shape.n << to_string(shape.boundary) << params.r << p << cfg.seed
                                  << initial.count() << schedule.span().count()
                                  << time_or_never(schedule.percolation_time()))
                               .str());
    out.tables = {std::move(summary), std::move(sched)};
    out.blobs.emplace_back("initial.siteset", to_hex(initial));
    return out;
}

double rho_of(int time, int n, double p) {
    if (time == 0) return 0.0;
    return time * -std::log1p(-p) / std::log(static_cast<double>(n));
}

Outputs cmd_sweep(const ExperimentConfig& cfg) {
    Outputs out;
    Table times{"times.csv", "d,n,r,p,trial,seed,T_or_never,rho", {}};
    Table perc{"perc.csv", "d,n,boundary,r,p,trials,perc_count,point,ci_low,ci_high,seed", {}};
    for (int n : cfg.n_list) {
        for (double p : cfg.p_grid) {
            const TrialPlan plan{shape_for(cfg, n), cfg.threshold(), p, cfg.trials, cfg.seed};
            const auto ts = trial_times(plan);
            long hits = 0;
            for (int k = 0; k < cfg.trials; ++k) {
                const auto& t = ts[static_cast<std::size_t>(k)];
                Row row;
                row << cfg.d << n << plan.r << p << k << derive_seed(cfg.seed, static_cast<std::uint64_t>(k))
                    << time_or_never(t);
                if (t) {
                    row << rho_of(*t, n, p);
                    ++hits;
                } else {
                    row << "";
                }
                times.rows.push_back(row.str());
            }
            const auto e = wilson_estimate(hits, cfg.trials);
            perc.rows.push_back((Row() << cfg.d << n << to_string(cfg.boundary) << plan.r << p << cfg.trials << hits
                                       << e.point << e.ci_low << e.ci_high << cfg.seed)
                                    .str());
        }
    }
    out.tables = {std::move(times), std::move(perc)};
    return out;
}

Outputs cmd_eta(const ExperimentConfig& cfg) {
    Outputs out;
    Table eta{"eta.csv", "d,m,p,trials,bad_count,eta_hat,ci_low,ci_high,seed", {}};
    for (int m : cfg.m_list)
        for (double p : cfg.p_grid) {
            const auto e = estimate_eta(m, cfg.d, p, cfg.trials, cfg.seed, cfg.threshold());
            eta.rows.push_back(
                (Row() << cfg.d << m << p << cfg.trials << e.successes << e.point << e.ci_low << e.ci_high << cfg.seed)
                    .str());
        }
    out.tables = {std::move(eta)};
    return out;
}

Outputs cmd_pc(const ExperimentConfig& cfg) {
    Outputs out;
    Table pc{"pc.csv", "d,n,boundary,r,trials_per_probe,tol,pc_hat,bracket_low,bracket_high,seed", {}};
    Table perc{"perc.csv", "d,n,boundary,r,p,trials,perc_count,point,ci_low,ci_high,seed", {}};
    for (int n : cfg.n_list) {
        const auto shape = shape_for(cfg, n);
        const auto est = estimate_pc_detailed(shape, cfg.threshold(), cfg.trials_per_probe, cfg.tol, cfg.seed);
        pc.rows.push_back((Row() << cfg.d << n << to_string(cfg.boundary) << cfg.threshold() << cfg.trials_per_probe
                                 << cfg.tol << est.pc << est.bracket_low << est.bracket_high << cfg.seed)
                              .str());
        for (const auto& pr : est.probes)
            perc.rows.push_back((Row() << cfg.d << n << to_string(cfg.boundary) << cfg.threshold() << pr.p
                                       << cfg.trials_per_probe << pr.estimate.successes << pr.estimate.point
                                       << pr.estimate.ci_low << pr.estimate.ci_high << cfg.seed)
                                    .str());
    }
    out.tables = {std::move(pc), std::move(perc)};
    return out;
}

Outputs cmd_certify(const ExperimentConfig& cfg) {
    Outputs out;
    Table certs{"certificates.csv", "kind,d,n,boundary,r,t,region,T,verified", {}};
    const int n = cfg.n_list.front();
    const auto shape = shape_for(cfg, n);
    const ProcessParams params{shape, cfg.threshold()};
    for (int t : cfg.t_list) {
        const Site corner = cfg.position ? *cfg.position : Site(std::vector<int>(static_cast<std::size_t>(cfg.d), 1));
        const auto initial = certify::plant_rectangle(shape, t, corner, cfg.axis);
        const auto found = certify::find_empty_rectangle(initial, t);
        if (!found) {
            out.failure = "planted rectangle not found for t=" + std::to_string(t);
            out.blobs.emplace_back("failure_t" + std::to_string(t) + ".siteset", to_hex(initial));
            continue;
        }
        const bool ok = certify::verify_lower_certificate(initial, params, *found);
        const auto time = percolation_time(initial, params);
        certs.rows.push_back((Row() << "planted_rectangle" << cfg.d << n << to_string(shape.boundary) << params.r << t
                                    << quote(format_region(found->region)) << time_or_never(time) << ok)
                                 .str());
        if (!ok) {
            out.failure = "rectangle certificate failed verification at t=" + std::to_string(t);
            out.blobs.emplace_back("failure_t" + std::to_string(t) + ".siteset", to_hex(initial));
        }
        // Extremal protecting set, when the threshold and the lattice allow it.
        if (params.r >= 2 && params.r <= cfg.d && n >= 2 * t + 3) {
            const bool ext = certify::verify_extremal(cfg.d, params.r, t, shape);
            const Site center = certify::lattice_center(shape);
            const auto sched =
                evolve_until_fixation(certify::p_set(cfg.d, params.r, t, center, shape).complement(), params);
            const auto tc = sched.time(center);
            certs.rows.push_back((Row() << "extremal_p_set" << cfg.d << n << to_string(shape.boundary) << params.r << t
                                        << quote(format_site(center))
                                        << (tc == kNever ? std::string("never") : std::to_string(tc)) << ext)
                                     .str());
            if (!ext) out.failure = "extremal set failed to protect the centre at t=" + std::to_string(t);
        }
    }
    out.tables = {std::move(certs)};
    return out;
}

Outputs cmd_audit(const ExperimentConfig& cfg) {
    Outputs out;
    Table audit{"audit.csv", "m,p,trial_seed,A,B,E,counterexample_flag", {}};
    for (int m : cfg.m_list)
        for (double p : cfg.p_grid) {
            const auto res = certify::audit_lemma_AB(m, p, cfg.trials, cfg.seed);
            for (const auto& row : res.rows)
                audit.rows.push_back((Row() << m << p << row.trial_seed << row.a << row.b << row.e << row.counterexample).str());
            for (std::size_t k = 0; k < res.counterexample_sets.size(); ++k)
                out.blobs.emplace_back("counterexamples/m" + std::to_string(m) + "_p" + format_real(p) + "_" +
                                           std::to_string(k) + ".siteset",
                                       to_hex(res.counterexample_sets[k]));
            if (res.counterexamples > 0)
                out.failure = std::to_string(res.counterexamples) + " configurations with A and B but not E at m=" +
                              std::to_string(m) + ", p=" + format_real(p);
        }
    out.tables = {std::move(audit)};
    return out;
}

Outputs cmd_oracle(const ExperimentConfig& cfg) {
    Outputs out;
    const auto shape = shape_for(cfg, cfg.n_list.front());
    const auto poly = oracle::exact_percolation_polynomial(shape, cfg.threshold());
    Table pt{"poly.csv", "k,c_k", {}};
    for (std::size_t k = 0; k < poly.counts.size(); ++k) pt.rows.push_back((Row() << k << poly.counts[k]).str());
    Table summary{"oracle_summary.csv", "d,n,boundary,r,vertex_count,max_percolation_time", {}};
    summary.rows.push_back((Row() << shape.d << shape.n << to_string(shape.boundary) << cfg.threshold()
                                  << poly.vertex_count << oracle::exact_max_percolation_time(shape, cfg.threshold()))
                               .str());
    out.tables = {std::move(summary), std::move(pt)};
    if (!cfg.m_list.empty()) {
        Table eta{"eta_exact.csv", "m,d,p,eta_exact", {}};
        for (int m : cfg.m_list) {
            const auto bad = oracle::exact_bad_polynomial(m, cfg.d, cfg.threshold());
            for (double p : cfg.p_grid) eta.rows.push_back((Row() << m << cfg.d << p << bad.evaluate(p)).str());
        }
        out.tables.push_back(std::move(eta));
    }
    return out;
}

Outputs cmd_path(const ExperimentConfig& cfg) {
    Outputs out;
    const auto shape = shape_for(cfg, cfg.n_list.front());
    const double p = cfg.p_grid.front();
    const auto initial = initial_or_field(cfg, shape, p, cfg.seed);
    const auto schedule = evolve_until_fixation(initial, ProcessParams{shape, cfg.threshold()});
    Table path{"path.csv", "t,k,site_index" + coords_header(cfg.d) + ",infection_time", {}};
    for (int t : cfg.t_list) {
        const auto steps = certify::extract_staircase(schedule, *cfg.site, t, cfg.threshold());
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const auto tv = schedule.time(steps[k]);
            path.rows.push_back((Row() << t << k << site_index(steps[k], shape)).str() + coords(steps[k]) + "," +
                                (tv == kNever ? std::string("never") : std::to_string(tv)));
        }
    }
    out.tables = {std::move(path)};
    out.blobs.emplace_back("initial.siteset", to_hex(initial));
    return out;
}

Outputs cmd_bounds(const ExperimentConfig& cfg) {
    using namespace bounds;
    Outputs out;
    Table tb{"bounds.csv",
             "formula,d,r,n,p,t,t_prime,m,L,delta,lambda,p0,C,B,eta_m,value,clamped_value,overflow_flag",
             {}};
    const int d = cfg.d;
    const int r = cfg.threshold();
    const std::optional<double> lambda = cfg.lambda ? cfg.lambda : default_lambda(d, r);
    // Named columns; unset ones stay empty.
    struct Cells {
        std::map<std::string, std::string> v;
        Cells& set(const std::string& k, double x) {
            v[k] = format_real(x);
            return *this;
        }
    };
    const std::vector<std::string> cols{"d", "r", "n", "p", "t", "t_prime", "m", "L", "delta", "lambda", "p0", "C", "B", "eta_m"};
    auto emit = [&](const std::string& formula, Cells c, double value, bool overflow) {
        std::string line = formula;
        for (const auto& k : cols) line += "," + (c.v.count(k) ? c.v[k] : std::string());
        // Only probability bounds get clamped to [0, 1]; counts and thresholds pass through.
        const bool prob = formula.find("bound") != std::string::npos || formula == "recursion_rhs";
        const double clamped = prob ? BoundValue{value, overflow}.clamped() : value;
        line += "," + format_real(value) + "," + format_real(clamped) + "," + (overflow ? "true" : "false");
        tb.rows.push_back(line);
    };
    std::vector<int> ts = cfg.t_list.empty() ? std::vector<int>{1} : cfg.t_list;
    if (r >= 2 && r <= d)
        for (int t : ts)
            emit("p_count", Cells().set("d", d).set("r", r).set("t", t), static_cast<double>(p_count(d, r, t)), false);
    for (double p : cfg.p_grid) {
        for (int n : cfg.n_list) {
            for (int t : ts) {
                if (t >= 1)
                    emit("lower_tail_bound", Cells().set("d", d).set("n", n).set("p", p).set("t", t),
                         lower_tail_bound(n, d, p, t), false);
                if (p > 0 && p < 1 && t >= cfg.t_prime)
                    emit("upper_tail_bound", Cells().set("d", d).set("n", n).set("p", p).set("t", t).set("t_prime", cfg.t_prime),
                         upper_tail_bound(n, d, p, t, cfg.t_prime), false);
            }
            const auto thr = lower_time_threshold(n, d, p);
            emit("lower_time_threshold", Cells().set("d", d).set("n", n).set("p", p),
                 thr ? static_cast<double>(*thr) : std::numeric_limits<double>::infinity(), !thr);
        }
        for (int t : ts)
            if (p > 0 && p < 1 && t >= cfg.t_prime)
                emit("origin_tail_bound", Cells().set("t", t).set("t_prime", cfg.t_prime).set("p", p).set("C", cfg.C),
                     origin_tail_bound(t, cfg.t_prime, p, cfg.C), false);
        if (lambda && p > 0) {
            const auto k = k_of_p(p, d, *lambda, cfg.p0);
            emit("k_of_p", Cells().set("d", d).set("p", p).set("lambda", *lambda).set("p0", cfg.p0), k.value, k.overflow);
            if (p < 1) {
                const auto lt = l_threshold(p, cfg.delta, d, *lambda, cfg.p0);
                emit("l_threshold", Cells().set("d", d).set("p", p).set("delta", cfg.delta).set("lambda", *lambda).set("p0", cfg.p0),
                     lt.value, lt.overflow);
                const auto lp = l_threshold_proof_form(p, cfg.delta, d, *lambda, cfg.p0);
                emit("l_threshold_proof_form",
                     Cells().set("d", d).set("p", p).set("delta", cfg.delta).set("lambda", *lambda).set("p0", cfg.p0), lp.value,
                     lp.overflow);
            }
        }
        for (int m : cfg.m_list) {
            if (m >= 5)
                emit("eta_upper_bound", Cells().set("L", m).set("d", d).set("p", p).set("B", cfg.B),
                     eta_upper_bound(m, d, p, cfg.B), false);
            emit("recursion_rhs", Cells().set("m", m).set("d", d).set("p", p).set("eta_m", cfg.eta_m).set("C", cfg.C).set("B", cfg.B),
                 recursion_rhs(m, d, p, cfg.eta_m, cfg.C, cfg.B), false);
            if (p < 1)
                emit("g_of_p", Cells().set("L", m).set("d", d).set("p", p).set("B", cfg.B), g_of_p(m, d, p, cfg.B), false);
        }
    }
    out.tables = {std::move(tb)};
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
    RunResult result;
    Outputs outputs;
    try {
        validate(cfg);
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
        static const std::map<std::string, std::function<Outputs(const ExperimentConfig&)>> dispatch{
            {"simulate", cmd_simulate}, {"sweep", cmd_sweep},   {"eta", cmd_eta},       {"pc", cmd_pc},
            {"certify", cmd_certify},   {"audit", cmd_audit},   {"oracle", cmd_oracle}, {"path", cmd_path},
            {"bounds", cmd_bounds}};
        outputs = dispatch.at(cfg.command)(cfg);
    } catch (const ConfigError& e) {
        return {kConfigError, e.what(), {}};
    } catch (const InputError& e) {
        return {kConfigError, std::string("invalid input: ") + e.what(), {}};
    } catch (const CapacityError& e) {
        return {kCapacityError, std::string("capacity exceeded: ") + e.what(), {}};
    } catch (const std::bad_alloc&) {
        return {kCapacityError, "capacity exceeded: out of memory", {}};
    } catch (const InternalFault& e) {
        outputs.failure = e.what();
    }

    try {
        const fs::path dir(cfg.out);
        fs::create_directories(dir);
        json files = json::object();
        for (const auto& t : outputs.tables) {
            std::string body = t.header + "\n";
            for (const auto& row : t.rows) body += row + "\n";
            write_file(dir / t.name, body);
            files[t.name] = t.rows.size();
            result.files.emplace_back(t.name, t.rows.size());
        }
        for (const auto& [name, content] : outputs.blobs) write_file(dir / name, content);
        json meta;
        meta["config"] = json::parse(config_to_json(cfg));
        meta["tool"] = "bootperc";
        meta["version"] = kToolVersion;
        meta["timestamp"] = utc_timestamp();
        meta["master_seed"] = cfg.seed;
        meta["threads"] = omp_get_max_threads();
        meta["rows"] = files;
        if (!outputs.failure.empty()) {
            meta["failure"] = outputs.failure;
            write_file(dir / "failure" / "config.json", config_to_json(cfg) + "\n");
            write_file(dir / "failure" / "reason.txt", outputs.failure + "\n");
        }
        write_file(dir / "meta.json", meta.dump(2) + "\n");
    } catch (const std::exception& e) {
        return {kConfigError, std::string("cannot write outputs: ") + e.what(), result.files};
    }
    if (!outputs.failure.empty()) {
        result.exit_code = kInvariantViolation;
        result.message = "invariant violated: " + outputs.failure;
    }
    return result;
}

}  // namespace bootperc::cli
