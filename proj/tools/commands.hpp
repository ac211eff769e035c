#pragma once

#include <iosfwd>
#include <string>

#include "susyeta/config.hpp"

namespace susyeta::cli {

enum ExitCode { kPass = 0, kCheckFailure = 1, kConfigError = 2 };

// Each command writes its tables into cfg.out_dir and a one-line-per-check
// summary to `log`.
int cmd_example(const std::string& name, const ExperimentConfig& cfg, std::ostream& log);
int cmd_probe(const ExperimentConfig& cfg, std::ostream& log);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& log);

// 17 significant digits, scientific
std::string format_number(double v);

}  // namespace susyeta::cli
