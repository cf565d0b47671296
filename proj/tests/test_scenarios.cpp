#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "collisim/memory_kernel.hpp"
#include "collisim/operators.hpp"
#include "collisim/scenarios.hpp"
#include "collisim/validation.hpp"

using namespace collisim;

TEST_CASE("builtin presets validate on load") {
  for (const std::string& name : builtin_scenario_names()) {
    const ScenarioSpec spec = builtin_scenario(name);
    CHECK_NOTHROW(spec.scenario.validate());
    CHECK(spec.name == name);
  }
  CHECK_THROWS_AS(builtin_scenario("no-such-preset"), std::invalid_argument);
}

TEST_CASE("scenario serialization round trip") {
  const ScenarioSpec spec = builtin_scenario("ghz-qutrit");
  const std::string text = serialize_scenario(spec);
  const ScenarioSpec back = parse_scenario(text);

  CHECK(back.scenario.d_s == spec.scenario.d_s);
  CHECK(back.scenario.d == spec.scenario.d);
  CHECK(back.scenario.g == spec.scenario.g);
  CHECK(back.scenario.tau == spec.scenario.tau);
  CHECK(back.scenario.steps == spec.scenario.steps);
  REQUIRE(back.scenario.hamiltonian.has_value());
  CHECK(back.scenario.hamiltonian->max_abs_diff(*spec.scenario.hamiltonian) == 0.0);
  CHECK(back.scenario.rho_s0.matrix.max_abs_diff(spec.scenario.rho_s0.matrix) == 0.0);
  CHECK(back.scenario.env.chi0.matrix.max_abs_diff(spec.scenario.env.chi0.matrix) == 0.0);
  REQUIRE(back.scenario.env.site_tensors.size() == 1);
  const MPDOSiteTensor& a = back.scenario.env.site_tensors.front();
  const MPDOSiteTensor& b = spec.scenario.env.site_tensors.front();
  REQUIRE(a.physical_dim == b.physical_dim);
  REQUIRE(a.kraus_count == b.kraus_count);
  for (std::size_t i = 0; i < a.physical_dim; ++i)
    for (std::size_t kb = 0; kb < a.kraus_count; ++kb)
      CHECK(a.slices[i][kb].max_abs_diff(b.slices[i][kb]) == 0.0);

  // Identical dynamics after the round trip.
  const Trajectory t1 = evolve(spec.scenario);
  const Trajectory t2 = evolve(back.scenario);
  for (std::size_t k = 0; k < t1.states.size(); ++k)
    CHECK(t1.states[k].matrix.max_abs_diff(t2.states[k].matrix) == 0.0);
}

TEST_CASE("scenario file round trip") {
  const std::string path = "roundtrip_scenario.json";
  const ScenarioSpec spec = builtin_scenario("aklt-heisenberg");
  save_scenario(spec, path);
  const ScenarioSpec back = load_scenario(path);
  CHECK(back.scenario.hamiltonian->max_abs_diff(*spec.scenario.hamiltonian) == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("physics validation errors carry the violated invariant") {
  const std::string bad = R"({
    "name": "bad",
    "dims": {"system": 2, "ancilla": 2},
    "interaction": {"type": "hamiltonian", "generator": "energy-exchange"},
    "g_tau": 0.1,
    "steps": 2,
    "environment": {"type": "ground-qubit-env"},
    "initial_state": {"matrix": {"rows": 2, "cols": 2,
                                 "data": [[0.6, 0], [0, 0], [0, 0], [0.3, 0]]}}
  })";
  CHECK_THROWS_WITH_AS(parse_scenario(bad), doctest::Contains("tol_trace"),
                       std::invalid_argument);

  const std::string garbled = "{ not json";
  CHECK_THROWS_WITH_AS(parse_scenario(garbled), doctest::Contains("parse error"),
                       std::invalid_argument);
}

TEST_CASE("heisenberg preset has a vanishing ancilla average") {
  // <H>_anc = 0 means the local-generator commutator check holds for any
  // initial state.
  ScenarioSpec spec = builtin_scenario("aklt-heisenberg");
  spec.scenario.rho_s0 = DensityMatrix(ops::qubit_from_bloch(0.7, -0.2, 0.1));
  CHECK_NOTHROW(local_generator(spec.scenario));
}

TEST_CASE("trajectory CSV output") {
  // Partial inversion at g tau = 2 pi / 3: Bloch vector scales by -5/27.
  ScenarioSpec spec = builtin_scenario("aklt-heisenberg");
  spec.scenario.g = 2.0 * M_PI / 3.0;
  spec.scenario.steps = 3;
  std::ostringstream out;
  write_trajectory_csv(spec, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,t,sx,sy,sz");
  std::vector<std::array<double, 3>> bloch;
  while (std::getline(in, line)) {
    std::array<double, 3> row{};
    std::size_t pos = 0;
    for (int col = 0; col < 5; ++col) {
      const std::size_t next = line.find(',', pos);
      const std::string tok = line.substr(pos, next - pos);
      if (col >= 2) row[col - 2] = std::stod(tok);
      pos = next + 1;
    }
    bloch.push_back(row);
  }
  REQUIRE(bloch.size() == 4);
  for (std::size_t k = 0; k + 1 < bloch.size(); ++k)
    for (int c = 0; c < 3; ++c)
      CHECK(bloch[k + 1][c] == doctest::Approx(-5.0 / 27.0 * bloch[k][c]).epsilon(1e-9));

  // No evolution at g tau = 4 pi / 3 (up to rounding accumulation).
  spec.scenario.g = 4.0 * M_PI / 3.0;
  const Trajectory frozen = evolve(spec.scenario);
  for (std::size_t k = 1; k < frozen.states.size(); ++k)
    CHECK(frozen.states[k].matrix.max_abs_diff(frozen.states[0].matrix) < 1e-12);

  // Determinism: identical bytes across runs.
  std::ostringstream again;
  spec.scenario.g = 2.0 * M_PI / 3.0;
  write_trajectory_csv(spec, again);
  std::ostringstream repeat;
  write_trajectory_csv(spec, repeat);
  CHECK(again.str() == repeat.str());
  CHECK(again.str().find("\r") == std::string::npos);  // LF endings only
}

TEST_CASE("gtau and steps overrides") {
  const ScenarioSpec spec = resolve_scenario("ghz-qutrit", 1.0, 7);
  CHECK(spec.scenario.g * spec.scenario.tau == doctest::Approx(1.0));
  CHECK(spec.scenario.steps == 7);
  CHECK_THROWS_AS(resolve_scenario("missing.json"), std::invalid_argument);
}

TEST_CASE("validation selectors") {
  const std::vector<std::string> names = validation_check_names();
  CHECK(names.size() == 11);
  const std::vector<CheckResult> one = run_validation("example1");
  REQUIRE(one.size() == 1);
  CHECK(one[0].name == "example1-w-chain");
  CHECK(one[0].pass);
  CHECK_THROWS_AS(run_validation("nonexistent"), std::invalid_argument);
  const std::string report = validation_report_json(one);
  CHECK(report.find("\"pass\": true") != std::string::npos);
}
