#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "susyeta/verify.hpp"

namespace susyeta {

// Everything an experiment needs.  Files are INI text:
//
//   [experiment]   entry, seed, tests
//   [params]       d, b, a, c
//   [grid]         n, x_max
//   [k_grid]       k_min, k_max, n_k
//   [probe]        b, d_sequence (comma separated)
//   [output]       dir, format (csv | json)
//   [tolerances]   <check name> = value
struct ExperimentConfig {
    std::string entry = "constant";
    CatalogueParams params;
    std::size_t n = 401;
    double x_max = 20.0;
    double k_min = 0.01, k_max = 10.0;
    std::size_t n_k = 400;
    double probe_b = 1.0;
    std::vector<double> d_sequence = {-1.0, -0.5, -0.25, -0.1};
    std::string out_dir = ".";
    std::string format = "json";
    std::uint64_t seed = 20240917;
    std::size_t n_tests = 20;
    ToleranceTable tolerance_overrides;
};

// Which keys a caller insists on.  `verify` needs entry, params.d, params.b,
// grid.n and grid.x_max spelled out.
struct ConfigRequirements {
    std::vector<std::string> keys;  // "section.key"
};
ConfigRequirements verify_requirements();

// Throws ConfigError naming the file, line and key on any problem.
ExperimentConfig load_config(const std::string& path, const ConfigRequirements& req = {});
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>",
                              const ConfigRequirements& req = {});

// Applies the parameter guards of AsymptoticParams and the catalogue.
// Throws ConfigError.
void validate(const ExperimentConfig& cfg);

SuiteOptions suite_options(const ExperimentConfig& cfg);

}  // namespace susyeta
