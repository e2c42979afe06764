#pragma once

// Flat key=value run configuration with section prefixes, e.g.
// `pneumo.tau_fill = 1.3039`. '#' starts a comment.

#include "plg/pipeline.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace plgsim {

struct RunConfig {
    std::string netlist_path;        // empty: built-in ring
    std::string actuator_data_path;  // empty: built-in reference points
    plg::RobotConfig robot;
    std::uint64_t seed = 0;          // reserved; nothing is random
};

/// Shipped defaults: calibrated time constants and friction ratio.
RunConfig default_run_config();

/// Applies one `key=value` pair. Throws plg::InvalidArgument on an unknown
/// key or bad value.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Applies every line of `text` on top of `config`. Errors name the line.
void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin = "config");

/// Reads and applies a file. Throws plg::IoError when unreadable.
void apply_config_file(RunConfig& config, const std::string& path);

/// Loads referenced files (netlist, actuator data) into `robot`.
void resolve_paths(RunConfig& config);

/// Every key with its current value, in documentation order.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

}  // namespace plgsim
