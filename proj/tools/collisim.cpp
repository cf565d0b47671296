// collisim: collision-model simulator CLI.
//
// Subcommands:
//   run       simulate a scenario and write the trajectory CSV
//   spectrum  transfer-matrix spectrum of the scenario environment
//   kernel    one exact memory-kernel term K_{km}
//   strobo    stroboscopic-limit master-equation generator
//   validate  closed-form and brute-force validation suite
//   list      enumerate built-in presets
//
// Exit codes: 0 ok, 1 validation failure, 2 usage/parse error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "collisim/memory_kernel.hpp"
#include "collisim/scenarios.hpp"
#include "collisim/validation.hpp"

namespace {

using namespace collisim;

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

void print_matrix_csv(std::ostream& out, const ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_double(m(i, j).real()) << " " << format_double(m(i, j).imag());
    }
    out << "\n";
  }
}

int cmd_run(const std::string& scenario, double gtau, long steps, const std::string& out_path) {
  const ScenarioSpec spec = resolve_scenario(scenario, gtau, steps);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  write_trajectory_csv(spec, out);
  return 0;
}

int cmd_spectrum(const std::string& scenario, double gtau, const std::string& out_path) {
  const ScenarioSpec spec = resolve_scenario(scenario, gtau, -1);
  const SpectrumResult spectrum = correlation_spectrum(spec.scenario.env);
  const TransferSpectrumSummary summary = summarize_transfer_spectrum(spec.scenario.env);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << "index,re,im,abs,unit\n";
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const cplx lam = spectrum.eigenvalues[i];
    const bool unit = std::abs(lam - cplx(1.0, 0.0)) < kEigGroupTol;
    out << i << "," << format_double(lam.real()) << "," << format_double(lam.imag()) << ","
        << format_double(std::abs(lam)) << "," << (unit ? 1 : 0) << "\n";
  }
  out << "# unit multiplicity " << summary.unit_multiplicity;
  if (!summary.finite_correlation_length()) out << " (infinite correlation length)";
  out << "\n";
  for (std::size_t g = 0; g < summary.decaying.size(); ++g)
    out << "# decaying group " << format_double(summary.decaying[g].real()) << " "
        << format_double(summary.decaying[g].imag()) << " x" << summary.multiplicities[g]
        << "\n";
  return 0;
}

int cmd_kernel(const std::string& scenario, double gtau, std::size_t k, std::size_t m,
               const std::string& out_path) {
  const ScenarioSpec spec = resolve_scenario(scenario, gtau, -1);
  const Superoperator kernel = exact_kernel_term(spec.scenario, k, m);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << "# K_{" << k << "," << m << "}, superoperator on vec(rho), rows = output index\n";
  print_matrix_csv(out, kernel.matrix);
  return 0;
}

void print_rates_and_jumps(std::ostream& out, const char* label, const Superoperator& part) {
  const KossakowskiReport rep = kossakowski_analysis(part);
  out << "# " << label << " rates (unit-Frobenius jumps):";
  for (double r : rep.rates) out << " " << format_double(r);
  out << "\n";
  for (std::size_t i = 0; i < rep.jump_operators.size(); ++i) {
    if (std::abs(rep.rates[i]) < 1e-14) continue;
    out << "# " << label << " jump " << i << " (rate " << format_double(rep.rates[i]) << ")\n";
    print_matrix_csv(out, rep.jump_operators[i]);
  }
}

int cmd_strobo(const std::string& scenario, double gtau, int order,
               const std::string& out_path) {
  const ScenarioSpec spec = resolve_scenario(scenario, gtau, -1);
  const StroboscopicGenerator gen = stroboscopic_generator(spec.scenario, order);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << "# stroboscopic generator, order " << order << "\n";
  out << "# nonlocal terms: " << gen.nonlocal_terms.size()
      << ", fit residual " << format_double(gen.fit_residual) << "\n";
  print_rates_and_jumps(out, "local", gen.local);
  const double g2t = spec.scenario.g * spec.scenario.g * spec.scenario.tau;
  for (const auto& [lambda, map] : gen.nonlocal_terms) {
    const cplx weight = cplx(g2t, 0.0) * lambda / (cplx(1.0, 0.0) - lambda);
    out << "# nonlocal lambda " << format_double(lambda.real()) << " "
        << format_double(lambda.imag()) << ", weight " << format_double(weight.real()) << " "
        << format_double(weight.imag()) << "\n";
    print_rates_and_jumps(out, "nonlocal", weight * map);
  }
  out << "# GKSL valid: " << (gen.kossakowski.gksl_valid ? "yes" : "no") << "\n";
  out << "# total rates:";
  for (double r : gen.kossakowski.rates) out << " " << format_double(r);
  out << "\n";
  for (std::size_t i = 0; i < gen.kossakowski.jump_operators.size(); ++i) {
    out << "# jump operator " << i << " (rate " << format_double(gen.kossakowski.rates[i])
        << ")\n";
    print_matrix_csv(out, gen.kossakowski.jump_operators[i]);
  }
  out << "# effective generator matrix\n";
  print_matrix_csv(out, gen.effective.matrix);
  return 0;
}

int cmd_validate(const std::string& selector, const std::string& out_path) {
  const std::vector<CheckResult> results = run_validation(selector);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << validation_report_json(results) << "\n";
  bool all = true;
  for (const CheckResult& r : results) {
    std::cerr << (r.pass ? "PASS" : "FAIL") << " " << r.name << ": " << r.detail << "\n";
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

int cmd_list() {
  std::cout << "scenarios:\n";
  for (const std::string& name : builtin_scenario_names()) std::cout << "  " << name << "\n";
  std::cout << "generators:\n";
  for (const std::string& name : builtin_generator_names()) std::cout << "  " << name << "\n";
  std::cout << "environments:\n";
  for (const char* name : {"ghz-qutrit-env", "aklt-env", "ground-qubit-env", "gibbs-qubit-env"})
    std::cout << "  " << name << "\n";
  std::cout << "validation checks:\n";
  for (const std::string& name : validation_check_names()) std::cout << "  " << name << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collisim: tensor-network simulator for quantum collision models"};
  app.require_subcommand(1);

  std::string scenario, out_path, selector = "all";
  double gtau = -1.0;
  long steps = -1;
  std::size_t k = 1, m = 1;
  int order = 1;

  CLI::App* run = app.add_subcommand("run", "simulate and export the trajectory CSV");
  run->add_option("--scenario", scenario, "preset name or scenario file")->required();
  run->add_option("--gtau", gtau, "override g*tau");
  run->add_option("--steps", steps, "override collision count");
  run->add_option("--out", out_path, "output file ('-' for stdout)");

  CLI::App* spectrum = app.add_subcommand("spectrum", "transfer-matrix spectrum");
  spectrum->add_option("--scenario", scenario)->required();
  spectrum->add_option("--gtau", gtau);
  spectrum->add_option("--out", out_path);

  CLI::App* kernel = app.add_subcommand("kernel", "exact memory-kernel term K_{km}");
  kernel->add_option("--scenario", scenario)->required();
  kernel->add_option("--gtau", gtau);
  kernel->add_option("-k", k, "collision index")->required();
  kernel->add_option("-m", m, "memory depth")->required();
  kernel->add_option("--out", out_path);

  CLI::App* strobo = app.add_subcommand("strobo", "stroboscopic-limit generator");
  strobo->add_option("--scenario", scenario)->required();
  strobo->add_option("--gtau", gtau);
  strobo->add_option("--order", order, "stroboscopic order (1 or 2)");
  strobo->add_option("--out", out_path);

  CLI::App* validate = app.add_subcommand("validate", "run the validation suite");
  validate->add_option("selector", selector, "'all', a check name, or exampleN");
  validate->add_option("--out", out_path, "JSON report file");

  app.add_subcommand("list", "enumerate presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(scenario, gtau, steps, out_path);
    if (spectrum->parsed()) return cmd_spectrum(scenario, gtau, out_path);
    if (kernel->parsed()) return cmd_kernel(scenario, gtau, k, m, out_path);
    if (strobo->parsed()) return cmd_strobo(scenario, gtau, order, out_path);
    if (validate->parsed()) return cmd_validate(selector, out_path);
    return cmd_list();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
