#pragma once

// Flat `key = value` experiment files. Blank lines and `#` comments are
// ignored; list values are comma separated. Keys mirror SimConfig fields;
// `validate_*` keys and `samples` feed ValidationConfig.
//
//   field = 631
//   n = 14
//   k = 1
//   subcarriers = 631
//   users = 30
//   n_rx = 4
//   sir_db = -30, -27, -24
//   trials = 2000
//   seed = 7

#include "sts/simkit.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace sts {

struct ExperimentFile {
    SimConfig sim;
    ValidationConfig validation;
};

/// Throws Errc::ConfigError on unknown keys, duplicate keys or bad values.
ExperimentFile parse_experiment(std::string_view text);
/// Throws Errc::ConfigError if the file cannot be read or parsed.
ExperimentFile load_experiment(const std::filesystem::path& path);

/// Resolved configuration in the same key = value syntax.
std::string render(const SimConfig& cfg);
std::string render(const ValidationConfig& cfg);

} // namespace sts
