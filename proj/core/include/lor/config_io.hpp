#pragma once

#include <string>
#include <string_view>

#include "lor/config.hpp"

namespace lor::harness {

// Parses the flat key=value config format ('#' starts a comment). Unknown
// keys are rejected; malformed lines and invariant violations throw
// std::invalid_argument carrying the line number or key name. Keys left out
// take the documented defaults. Supplying expected_psi, K and gamma derives
// rounds_R; mixing that with an explicit rounds_R is an error.
SimConfig parse_config(std::string_view text);

// parse_config over a file's contents.
SimConfig load_config(const std::string& path);

}  // namespace lor::harness
