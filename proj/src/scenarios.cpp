#include "collisim/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "collisim/operators.hpp"

namespace collisim {

using nlohmann::json;

namespace {

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      data.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw std::invalid_argument("scenario field '" + field +
                                "': matrix needs rows/cols/data");
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const json& data = j.at("data");
  if (!data.is_array() || data.size() != rows * cols)
    throw std::invalid_argument("scenario field '" + field + "': data length != rows*cols");
  ComplexMatrix m(rows, cols);
  for (std::size_t e = 0; e < rows * cols; ++e) {
    const json& pair = data[e];
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("scenario field '" + field + "': entries are [re, im] pairs");
    m.data()[e] = cplx(pair[0].get<double>(), pair[1].get<double>());
  }
  return m;
}

constexpr double kDefaultGibbsGap = 1.0;  // (E_up - E_down)/kT for the gibbs-chain preset

DensityMatrix gibbs_qubit(double gap_over_kt) {
  const double p_down = 1.0 / (1.0 + std::exp(-gap_over_kt));
  const double p_up = 1.0 / (1.0 + std::exp(gap_over_kt));
  ComplexMatrix rho(2, 2);
  rho(0, 0) = p_down;
  rho(1, 1) = p_up;
  return DensityMatrix(std::move(rho));
}

std::vector<cplx> basis_state(std::size_t dim, std::size_t idx) {
  std::vector<cplx> v(dim, cplx(0.0, 0.0));
  v[idx] = 1.0;
  return v;
}

DensityMatrix pure_density(const std::vector<cplx>& v) {
  ComplexMatrix rho(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) rho(i, j) = v[i] * std::conj(v[j]);
  return DensityMatrix(std::move(rho));
}

}  // namespace

std::vector<std::string> builtin_generator_names() {
  return {"energy-exchange", "pauli-projective", "pauli-spin1-exchange",
          "pauli-x",         "pauli-y",          "pauli-z",
          "spin1-x",         "spin1-y",          "spin1-z"};
}

ComplexMatrix builtin_generator(const std::string& name) {
  if (name == "energy-exchange") return ops::energy_exchange_generator();
  if (name == "pauli-projective") return ops::pauli_projective_hamiltonian();
  if (name == "pauli-spin1-exchange") return ops::pauli_spin1_exchange_hamiltonian();
  if (name == "pauli-x") return ops::pauli_x();
  if (name == "pauli-y") return ops::pauli_y();
  if (name == "pauli-z") return ops::pauli_z();
  if (name == "spin1-x") return ops::spin1_x();
  if (name == "spin1-y") return ops::spin1_y();
  if (name == "spin1-z") return ops::spin1_z();
  throw std::invalid_argument("unknown generator preset: " + name);
}

EnvironmentMPDO builtin_environment(const std::string& name) {
  if (name == "ghz-qutrit-env") {
    ComplexMatrix chi(3, 3);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) chi(a, b) = 1.0 / 3.0;
    std::vector<ComplexMatrix> slices;
    for (std::size_t j = 0; j < 3; ++j) {
      ComplexMatrix proj(3, 3);
      proj(j, j) = 1.0;
      slices.push_back(std::move(proj));
    }
    return EnvironmentMPDO::homogeneous_mps(DensityMatrix(std::move(chi)), std::move(slices));
  }
  if (name == "aklt-env") {
    ComplexMatrix chi = ComplexMatrix::identity(2);
    chi *= cplx(0.5, 0.0);
    const double r23 = std::sqrt(2.0 / 3.0);
    const double r13 = 1.0 / std::sqrt(3.0);
    ComplexMatrix a1(2, 2), a2(2, 2), a3(2, 2);
    a1(0, 1) = r23;
    a2(0, 0) = -r13;
    a2(1, 1) = r13;
    a3(1, 0) = -r23;
    return EnvironmentMPDO::homogeneous_mps(DensityMatrix(std::move(chi)), {a1, a2, a3});
  }
  if (name == "ground-qubit-env")
    return EnvironmentMPDO::homogeneous_factorized(pure_density(basis_state(2, 0)));
  if (name == "gibbs-qubit-env")
    return EnvironmentMPDO::homogeneous_factorized(gibbs_qubit(kDefaultGibbsGap));
  throw std::invalid_argument("unknown environment preset: " + name);
}

std::vector<std::string> builtin_scenario_names() {
  return {"w-chain",       "gibbs-chain",     "ghz-qutrit",
          "ghz-controlled", "aklt-projective", "aklt-heisenberg"};
}

bool is_builtin_scenario(const std::string& name) {
  for (const std::string& n : builtin_scenario_names())
    if (n == name) return true;
  return false;
}

ScenarioSpec builtin_scenario(const std::string& name) {
  ScenarioSpec spec;
  spec.name = name;
  CollisionScenario& sc = spec.scenario;
  sc.g = 1.0;
  sc.tau = 1.0;
  if (name == "w-chain") {
    sc.d_s = 2;
    sc.d = 2;
    sc.hamiltonian = ops::energy_exchange_generator();
    sc.g = 0.3;
    sc.rho_s0 = pure_density(basis_state(2, 1));
    sc.env = builtin_environment("ground-qubit-env");
    sc.steps = 10;
  } else if (name == "gibbs-chain") {
    sc.d_s = 2;
    sc.d = 2;
    sc.hamiltonian = ops::energy_exchange_generator();
    sc.g = 0.3;
    sc.rho_s0 = pure_density(basis_state(2, 1));
    sc.env = builtin_environment("gibbs-qubit-env");
    sc.steps = 10;
  } else if (name == "ghz-qutrit") {
    sc.d_s = 2;
    sc.d = 3;
    sc.hamiltonian = ops::pauli_spin1_exchange_hamiltonian();
    sc.g = 0.2;
    sc.rho_s0 = DensityMatrix(ops::qubit_from_bloch(1.0, 0.0, 0.0));
    sc.env = builtin_environment("ghz-qutrit-env");
    sc.steps = 50;
  } else if (name == "ghz-controlled") {
    sc.d_s = 2;
    sc.d = 3;
    sc.hamiltonian = ops::pauli_projective_hamiltonian();
    sc.g = 0.7;
    sc.rho_s0 = DensityMatrix(ops::qubit_from_bloch(0.3, -0.5, 0.2));
    sc.env = builtin_environment("ghz-qutrit-env");
    sc.steps = 20;
  } else if (name == "aklt-projective") {
    sc.d_s = 2;
    sc.d = 3;
    sc.hamiltonian = ops::pauli_projective_hamiltonian();
    sc.g = 0.1;
    const double r = 1.0 / std::sqrt(3.0);
    sc.rho_s0 = DensityMatrix(ops::qubit_from_bloch(r, r, r));
    sc.env = builtin_environment("aklt-env");
    sc.steps = 200;
  } else if (name == "aklt-heisenberg") {
    sc.d_s = 2;
    sc.d = 3;
    sc.hamiltonian = ops::pauli_spin1_exchange_hamiltonian();
    sc.g = 0.4;
    sc.rho_s0 = DensityMatrix(ops::qubit_from_bloch(0.6, 0.0, 0.8));
    sc.env = builtin_environment("aklt-env");
    sc.steps = 50;
  } else {
    throw std::invalid_argument("unknown scenario preset: " + name);
  }
  spec.outputs = {"bloch"};
  sc.validate();
  return spec;
}

namespace {

json environment_to_json(const EnvironmentMPDO& env) {
  json j;
  j["type"] = env.homogeneous ? "mpdo" : "factorized";
  if (!env.homogeneous) {
    if (env.bond_dim() != 1)
      throw std::invalid_argument(
          "serialization of bounded correlated environments is not supported");
    json ancillas = json::array();
    for (const MPDOSiteTensor& site : env.site_tensors) {
      // Reassemble the single-site density matrix from its Kraus vectors.
      ComplexMatrix rho(site.physical_dim, site.physical_dim);
      for (std::size_t b = 0; b < site.kraus_count; ++b)
        for (std::size_t i = 0; i < site.physical_dim; ++i)
          for (std::size_t ip = 0; ip < site.physical_dim; ++ip)
            rho(i, ip) += site.slices[i][b](0, 0) * std::conj(site.slices[ip][b](0, 0));
      ancillas.push_back(matrix_to_json(rho));
    }
    j["ancillas"] = ancillas;
    return j;
  }
  j["chi0"] = matrix_to_json(env.chi0.matrix);
  const MPDOSiteTensor& site = env.site_tensors.front();
  json tensors = json::array();
  for (std::size_t i = 0; i < site.physical_dim; ++i) {
    json family = json::array();
    for (std::size_t b = 0; b < site.kraus_count; ++b)
      family.push_back(matrix_to_json(site.slices[i][b]));
    tensors.push_back(family);
  }
  j["tensors"] = tensors;
  return j;
}

EnvironmentMPDO environment_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument("scenario field 'environment': missing type");
  const std::string type = j.at("type").get<std::string>();
  if (type == "factorized") {
    std::vector<DensityMatrix> ancillas;
    if (j.contains("ancillas")) {
      for (const json& a : j.at("ancillas"))
        ancillas.push_back(DensityMatrix::checked(matrix_from_json(a, "environment.ancillas")));
      return EnvironmentMPDO::factorized(std::move(ancillas));
    }
    if (j.contains("ancilla"))
      return EnvironmentMPDO::homogeneous_factorized(
          DensityMatrix::checked(matrix_from_json(j.at("ancilla"), "environment.ancilla")));
    throw std::invalid_argument("factorized environment needs 'ancillas' or 'ancilla'");
  }
  if (type == "mps") {
    DensityMatrix chi0 =
        DensityMatrix::checked(matrix_from_json(j.at("chi0"), "environment.chi0"));
    std::vector<ComplexMatrix> slices;
    for (const json& t : j.at("tensors"))
      slices.push_back(matrix_from_json(t, "environment.tensors"));
    return EnvironmentMPDO::homogeneous_mps(std::move(chi0), std::move(slices));
  }
  if (type == "mpdo") {
    DensityMatrix chi0 =
        DensityMatrix::checked(matrix_from_json(j.at("chi0"), "environment.chi0"));
    const json& tensors = j.at("tensors");
    MPDOSiteTensor site;
    site.physical_dim = tensors.size();
    for (const json& family : tensors) {
      std::vector<ComplexMatrix> bs;
      for (const json& t : family) bs.push_back(matrix_from_json(t, "environment.tensors"));
      site.slices.push_back(std::move(bs));
    }
    if (site.slices.empty() || site.slices.front().empty())
      throw std::invalid_argument("mpdo environment needs at least one tensor");
    site.kraus_count = site.slices.front().size();
    site.left_dim = site.slices.front().front().rows();
    site.right_dim = site.slices.front().front().cols();
    return EnvironmentMPDO::homogeneous_mpdo(std::move(chi0), std::move(site));
  }
  return builtin_environment(type);
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario parse error: ") + e.what());
  }
  ScenarioSpec spec;
  spec.name = j.value("name", "unnamed");
  CollisionScenario& sc = spec.scenario;

  if (!j.contains("dims"))
    throw std::invalid_argument("scenario field 'dims' missing");
  sc.d_s = j.at("dims").at("system").get<std::size_t>();
  sc.d = j.at("dims").at("ancilla").get<std::size_t>();

  if (!j.contains("interaction"))
    throw std::invalid_argument("scenario field 'interaction' missing");
  const json& inter = j.at("interaction");
  const std::string itype = inter.value("type", "hamiltonian");
  ComplexMatrix gen;
  if (inter.contains("generator") && inter.at("generator").is_string())
    gen = builtin_generator(inter.at("generator").get<std::string>());
  else if (inter.contains("generator"))
    gen = matrix_from_json(inter.at("generator"), "interaction.generator");
  else
    throw std::invalid_argument("scenario field 'interaction.generator' missing");
  if (itype == "hamiltonian")
    sc.hamiltonian = std::move(gen);
  else if (itype == "unitary")
    sc.unitary = std::move(gen);
  else
    throw std::invalid_argument("interaction.type must be 'hamiltonian' or 'unitary'");

  sc.tau = j.value("tau", 1.0);
  if (sc.tau <= 0) throw std::invalid_argument("scenario field 'tau' must be positive");
  const double g_tau = j.value("g_tau", 1.0);
  sc.g = g_tau / sc.tau;
  sc.steps = j.value("steps", std::size_t(10));

  if (!j.contains("environment"))
    throw std::invalid_argument("scenario field 'environment' missing");
  sc.env = environment_from_json(j.at("environment"));

  if (!j.contains("initial_state"))
    throw std::invalid_argument("scenario field 'initial_state' missing");
  const json& init = j.at("initial_state");
  if (init.contains("bloch")) {
    const json& b = init.at("bloch");
    if (sc.d_s != 2)
      throw std::invalid_argument("initial_state.bloch requires a qubit system");
    sc.rho_s0 = DensityMatrix::checked(
        ops::qubit_from_bloch(b.at(0).get<double>(), b.at(1).get<double>(),
                              b.at(2).get<double>()));
  } else if (init.contains("matrix")) {
    sc.rho_s0 = DensityMatrix::checked(matrix_from_json(init.at("matrix"), "initial_state"));
  } else {
    throw std::invalid_argument("initial_state needs 'bloch' or 'matrix'");
  }

  if (j.contains("outputs"))
    for (const json& o : j.at("outputs")) spec.outputs.push_back(o.get<std::string>());
  if (spec.outputs.empty())
    spec.outputs = sc.d_s == 2 ? std::vector<std::string>{"bloch"}
                               : std::vector<std::string>{"diag"};

  sc.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["dims"] = {{"system", spec.scenario.d_s}, {"ancilla", spec.scenario.d}};
  json inter;
  if (spec.scenario.hamiltonian) {
    inter["type"] = "hamiltonian";
    inter["generator"] = matrix_to_json(*spec.scenario.hamiltonian);
  } else {
    inter["type"] = "unitary";
    inter["generator"] = matrix_to_json(*spec.scenario.unitary);
  }
  j["interaction"] = inter;
  j["g_tau"] = spec.scenario.g * spec.scenario.tau;
  j["tau"] = spec.scenario.tau;
  j["steps"] = spec.scenario.steps;
  j["environment"] = environment_to_json(spec.scenario.env);
  j["initial_state"] = {{"matrix", matrix_to_json(spec.scenario.rho_s0.matrix)}};
  j["outputs"] = spec.outputs;
  return j.dump(2);
}

void save_scenario(const ScenarioSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << serialize_scenario(spec) << "\n";
}

ScenarioSpec resolve_scenario(const std::string& name_or_path, double g_tau_override,
                              long steps_override) {
  ScenarioSpec spec =
      is_builtin_scenario(name_or_path) ? builtin_scenario(name_or_path)
                                        : load_scenario(name_or_path);
  if (g_tau_override >= 0.0) {
    spec.scenario.g = g_tau_override / spec.scenario.tau;
    spec.scenario.unitary.reset();
    if (!spec.scenario.hamiltonian)
      throw std::invalid_argument("--gtau override requires a Hamiltonian scenario");
  }
  if (steps_override >= 0) spec.scenario.steps = std::size_t(steps_override);
  spec.scenario.validate();
  return spec;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(const ScenarioSpec& spec, std::ostream& out) {
  const Trajectory traj = evolve(spec.scenario);
  // Header line.
  out << "k,t";
  std::vector<std::pair<std::size_t, std::size_t>> elements;
  bool bloch = false;
  for (const std::string& o : spec.outputs) {
    if (o == "bloch") {
      if (spec.scenario.d_s != 2)
        throw std::invalid_argument("bloch output requires a qubit system");
      bloch = true;
      out << ",sx,sy,sz";
    } else if (o == "diag") {
      for (std::size_t i = 0; i < spec.scenario.d_s; ++i) {
        elements.emplace_back(i, i);
        out << ",re_" << i << i << ",im_" << i << i;
      }
    } else if (o.rfind("element:", 0) == 0) {
      const std::string coords = o.substr(8);
      const auto comma = coords.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("output element needs 'element:i,j'");
      const std::size_t i = std::stoul(coords.substr(0, comma));
      const std::size_t jx = std::stoul(coords.substr(comma + 1));
      elements.emplace_back(i, jx);
      out << ",re_" << i << jx << ",im_" << i << jx;
    } else {
      throw std::invalid_argument("unknown output spec: " + o);
    }
  }
  out << "\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << k << "," << format_double(double(k) * spec.scenario.tau);
    const ComplexMatrix& rho = traj.states[k].matrix;
    if (bloch) {
      const auto b = ops::bloch_vector(rho);
      out << "," << format_double(b[0]) << "," << format_double(b[1]) << ","
          << format_double(b[2]);
    }
    for (const auto& [i, jx] : elements)
      out << "," << format_double(rho(i, jx).real()) << "," << format_double(rho(i, jx).imag());
    out << "\n";
  }
}

}  // namespace collisim
