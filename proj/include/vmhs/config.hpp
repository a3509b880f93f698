#pragma once

#include <string>
#include <variant>

#include "vmhs/dynamics.hpp"
#include "vmhs/growth.hpp"
#include "vmhs/relaxation.hpp"

namespace vmhs {

// Parses a sectioned key = value config file (TOML subset: [section] headers,
// [section.subsection], scalar values, full-line and trailing # comments).
// Unknown sections or keys are rejected by name; every value is validated
// against the module preconditions before the config is returned.
//
// Sections for a relaxation/simulation campaign:
//   [grid] n
//   [physics] alpha, nu
//   [time] dt, cfl, t_max, sample_interval
//   [init] kind, seed, k0, amplitude; [init.abc] a, b, c
//   [relax] defect_tolerance, convergence_factor
//   [output] dir, checkpoint_interval
// A [growth] section (model, n, t_max, dt, fit_lo, fit_hi) selects a growth
// campaign instead and is exclusive with the sections above.
std::variant<RelaxationConfig, growth::GrowthConfig> parse_config(const std::string& path);

}  // namespace vmhs
