#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "collisim/environment.hpp"

namespace collisim {

// Serialized experiment description. Mirrors the JSON scenario-file schema:
//
// {
//   "name": "...",
//   "dims": {"system": 2, "ancilla": 3},
//   "interaction": {"type": "hamiltonian"|"unitary",
//                   "generator": "<preset>" | {"rows":..,"cols":..,"data":[[re,im],..]}},
//   "g_tau": 0.2,            // optional "tau" (default 1) fixes g = g_tau/tau
//   "steps": 50,
//   "environment": {"type": "factorized", "ancillas": [matrix, ...]}
//                | {"type": "mps", "chi0": matrix, "tensors": [matrix, ...]}
//                | {"type": "mpdo", "chi0": matrix, "tensors": [[matrix, ...], ...]}
//                | {"type": "<preset>"},
//   "initial_state": {"bloch": [x, y, z]} | {"matrix": matrix},
//   "outputs": ["bloch"] | ["element:i,j", ...]
// }
//
// Dense matrices are row-major arrays of [re, im] pairs.
struct ScenarioSpec {
  std::string name;
  CollisionScenario scenario;
  std::vector<std::string> outputs;  // default: "bloch" for qubits, diagonal elements otherwise
};

// Built-in presets: w-chain, gibbs-chain, ghz-qutrit, ghz-controlled,
// aklt-projective, aklt-heisenberg.
std::vector<std::string> builtin_scenario_names();
bool is_builtin_scenario(const std::string& name);
ScenarioSpec builtin_scenario(const std::string& name);

// Named operator generators accepted in interaction.generator.
std::vector<std::string> builtin_generator_names();
ComplexMatrix builtin_generator(const std::string& name);

// Environment presets accepted in environment.type.
EnvironmentMPDO builtin_environment(const std::string& name);

// File and string forms. load_scenario validates and reports the first
// violated invariant; parse failures carry the JSON context.
ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec parse_scenario(const std::string& json_text);
std::string serialize_scenario(const ScenarioSpec& spec);
void save_scenario(const ScenarioSpec& spec, const std::string& path);

// Resolve a CLI --scenario argument: builtin name or file path. g_tau/steps
// overrides are applied when non-negative.
ScenarioSpec resolve_scenario(const std::string& name_or_path, double g_tau_override = -1.0,
                              long steps_override = -1);

// Run the scenario and write the trajectory CSV: header, then rows
// k,t,<observables>. Deterministic formatting: 17 significant digits, '.'
// decimal separator, ',' field separator, LF line endings.
void write_trajectory_csv(const ScenarioSpec& spec, std::ostream& out);

std::string format_double(double v);  // shared CSV number formatting

}  // namespace collisim
