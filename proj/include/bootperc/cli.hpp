#pragma once

// Experiment runner behind the `bootperc` executable: a JSON config selects a
// command, the runner dispatches to the library and writes one CSV per table
// plus a meta.json sidecar into the output directory.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bootperc/lattice.hpp"

namespace bootperc::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kConfigError = 2, kCapacityError = 3, kInvariantViolation = 4 };

struct ExperimentConfig {
    std::string command;
    int d = 2;
    std::vector<int> n_list{64};
    Boundary boundary = Boundary::Torus;
    int r = 0;  // 0 means r = d
    std::vector<double> p_grid{0.3};
    int trials = 100;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out = "out";

    std::vector<int> t_list;
    std::vector<int> m_list;
    std::vector<double> quantiles{0.25, 0.5, 0.75};
    double delta = 0.01;
    std::optional<double> lambda;
    double p0 = 0.1;
    double C = 1.0;
    double B = 1.0;
    double eta_m = 0.1;
    int t_prime = 0;
    double tol = 0.005;
    int trials_per_probe = 200;
    std::optional<Site> site;
    std::optional<Site> position;
    int axis = 1;
    std::string initial;  // optional site-set bitmap file

    int threshold() const { return r == 0 ? d : r; }
};

// Thrown for malformed or out-of-domain configuration; carries the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

struct RunResult {
    int exit_code = kOk;
    std::string message;
    std::vector<std::pair<std::string, std::size_t>> files;  // name, data rows
};

// Executes cfg and writes outputs under cfg.out. Never throws; failures map
// to exit codes 2/3/4 with a diagnostic in `message`.
RunResult run(const ExperimentConfig& cfg);

// Shortest round-trip decimal form, used for every real in the CSVs.
std::string format_real(double v);

}  // namespace bootperc::cli
