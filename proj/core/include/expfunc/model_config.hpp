#pragma once

#include <string>

#include "expfunc/bernstein.hpp"

namespace expfunc {

// Builds a spec from a JSON document of the form
//   {"model": "stable"|"gamma_sub"|"pure_kill"|"cpp_atoms"|"exp_jump_cpp"
//             |"custom_density",
//    "params": {...}, "q": number, "d": number}
// Unknown keys are rejected (ConfigError). "q" and "d" default to 0.
BernsteinSpec spec_from_json(const std::string& json_text);

// Canonical JSON echo of the parsed config (for run manifests).
std::string canonical_config_json(const std::string& json_text);

}  // namespace expfunc
