#include "collisim/validation.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "collisim/dense_reference.hpp"
#include "collisim/memory_kernel.hpp"
#include "collisim/mps.hpp"
#include "collisim/operators.hpp"
#include "collisim/reference_formulas.hpp"
#include "collisim/scenarios.hpp"

namespace collisim {

namespace {

struct Checker {
  bool pass = true;
  double worst = 0.0;
  std::ostringstream detail;

  void within(double dev, double tol, const std::string& what) {
    worst = std::max(worst, dev);
    if (dev > tol) {
      pass = false;
      detail << what << ": deviation " << dev << " > " << tol << "; ";
    }
  }
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << what << "; ";
    }
  }
  CheckResult finish(const std::string& name) {
    CheckResult r;
    r.name = name;
    r.pass = pass;
    std::ostringstream os;
    if (pass)
      os << "worst deviation " << worst;
    else
      os << detail.str();
    r.detail = os.str();
    return r;
  }
};

double bloch_dev(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto ba = ops::bloch_vector(a);
  const auto bb = ops::bloch_vector(b);
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(ba[i] - bb[i]));
  return m;
}

// --- criterion 1: W-chain closed-form amplitudes --------------------------

CheckResult check_example1() {
  Checker c;
  const std::size_t n = 6;
  for (const double g_tau : {0.3, M_PI / 4.0}) {
    const ComplexMatrix u = matrix_exp_skew(ops::energy_exchange_generator(), g_tau);
    const std::vector<cplx> phi = {0.0, 1.0};  // excited system
    const std::vector<std::vector<cplx>> psis(n, {1.0, 0.0});
    const MPSChain chain = build_standard_mps(u, phi, psis);
    const std::vector<cplx> state = contract_statevector(chain);

    // Single excitation on ancilla j (1-based), system in the ground state.
    for (std::size_t j = 1; j <= n; ++j) {
      std::vector<std::size_t> idx(n + 1, 0);
      idx[j - 1] = 1;
      const double expected = reference::w_chain_amplitude(j, g_tau);
      c.within(std::abs(amplitude(chain, idx) - cplx(expected, 0.0)), 1e-12,
               "amplitude(j=" + std::to_string(j) + ")");
      std::size_t flat = 0;
      for (std::size_t s = 0; s < n + 1; ++s) flat = flat * 2 + idx[s];
      c.within(std::abs(state[flat] - cplx(expected, 0.0)), 1e-12, "contracted amplitude");
    }
    // All ancillas in the ground state, excitation kept on the system.
    std::vector<std::size_t> idx(n + 1, 0);
    idx[n] = 1;
    const double expected = reference::w_chain_terminal_amplitude(n, g_tau);
    c.within(std::abs(amplitude(chain, idx) - cplx(expected, 0.0)), 1e-12, "terminal amplitude");
    // Two excited ancillas never occur.
    std::vector<std::size_t> idx2(n + 1, 0);
    idx2[1] = idx2[3] = 1;
    c.within(std::abs(amplitude(chain, idx2)), 1e-12, "double-excitation amplitude");
  }
  return c.finish("example1-w-chain");
}

// --- criterion 2: randomized dense-evolution equivalence ------------------

CheckResult check_dense_oracle() {
  Checker c;
  std::mt19937_64 rng(20260810);
  std::uniform_int_distribution<int> pick_d(2, 3), pick_n(2, 5), coin(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d_s = 2;
    const std::size_t d = pick_d(rng);
    const std::size_t n = pick_n(rng);
    const ComplexMatrix u = dense::random_unitary(d_s * d, rng);
    const bool mixed = coin(rng) == 1;
    const std::string tag = " (trial " + std::to_string(trial) + ")";

    if (!mixed) {
      const std::vector<cplx> phi = dense::random_state(d_s, rng);
      std::vector<std::vector<cplx>> psis;
      for (std::size_t k = 0; k < n; ++k) psis.push_back(dense::random_state(d, rng));
      const MPSChain chain = build_standard_mps(u, phi, psis);
      const std::vector<cplx> got = contract_statevector(chain);
      const std::vector<cplx> want = dense::collision_statevector(u, phi, psis);
      double dev = 0.0;
      for (std::size_t i = 0; i < want.size(); ++i) dev = std::max(dev, std::abs(got[i] - want[i]));
      c.within(dev, 1e-11, "MPS contraction vs dense" + tag);

      // Collision trajectory through the factorized environment.
      std::vector<DensityMatrix> ancillas;
      for (const auto& psi : psis) {
        ComplexMatrix r(d, d);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t jx = 0; jx < d; ++jx) r(i, jx) = psi[i] * std::conj(psi[jx]);
        ancillas.emplace_back(std::move(r));
      }
      CollisionScenario sc;
      sc.d_s = d_s;
      sc.d = d;
      sc.unitary = u;
      ComplexMatrix rho0(d_s, d_s);
      for (std::size_t i = 0; i < d_s; ++i)
        for (std::size_t jx = 0; jx < d_s; ++jx) rho0(i, jx) = phi[i] * std::conj(phi[jx]);
      sc.rho_s0 = DensityMatrix(std::move(rho0));
      sc.env = EnvironmentMPDO::factorized(ancillas);
      sc.steps = n;
      const Trajectory traj = evolve(sc);
      const std::vector<ComplexMatrix> dtraj = dense::scenario_trajectory(sc, n);
      double tdev = 0.0;
      for (std::size_t k = 0; k <= n; ++k)
        tdev = std::max(tdev, traj.states[k].matrix.max_abs_diff(dtraj[k]));
      c.within(tdev, 1e-11, "evolve vs dense trajectory" + tag);
    } else {
      const ComplexMatrix rho_s = dense::random_density(d_s, rng);
      std::vector<ComplexMatrix> rhos;
      std::vector<DensityMatrix> rho_dm;
      for (std::size_t k = 0; k < n; ++k) {
        rhos.push_back(dense::random_density(d, rng));
        rho_dm.emplace_back(rhos.back());
      }
      const MPDOChain chain =
          build_standard_mpdo(u, DensityMatrix(rho_s), std::span<const DensityMatrix>(rho_dm));
      const DensityMatrix got = contract_density(chain);
      const ComplexMatrix want = dense::collision_density(u, rho_s, rhos);
      c.within(got.matrix.max_abs_diff(want), 1e-11, "MPDO contraction vs dense" + tag);

      CollisionScenario sc;
      sc.d_s = d_s;
      sc.d = d;
      sc.unitary = u;
      sc.rho_s0 = DensityMatrix(rho_s);
      sc.env = EnvironmentMPDO::factorized(rho_dm);
      sc.steps = n;
      const Trajectory traj = evolve(sc);
      const std::vector<ComplexMatrix> dtraj = dense::scenario_trajectory(sc, n);
      double tdev = 0.0;
      for (std::size_t k = 0; k <= n; ++k)
        tdev = std::max(tdev, traj.states[k].matrix.max_abs_diff(dtraj[k]));
      c.within(tdev, 1e-11, "evolve vs dense trajectory" + tag);
    }
  }

  // Correlated environments against the same dense reference.
  for (const char* name : {"ghz-qutrit", "ghz-controlled", "aklt-projective"}) {
    ScenarioSpec spec = builtin_scenario(name);
    spec.scenario.steps = 4;
    const Trajectory traj = evolve(spec.scenario);
    const std::vector<ComplexMatrix> dtraj = dense::scenario_trajectory(spec.scenario, 5);
    double tdev = 0.0;
    for (std::size_t k = 0; k <= 4; ++k)
      tdev = std::max(tdev, traj.states[k].matrix.max_abs_diff(dtraj[k]));
    c.within(tdev, 1e-11, std::string("correlated evolve vs dense: ") + name);
  }
  return c.finish("dense-oracle");
}

// --- criterion 3: right-normalization over randomized chains ---------------

CheckResult check_right_norm_trials() {
  Checker c;
  std::mt19937_64 rng(77002);
  std::uniform_int_distribution<int> pick_ds(2, 3), pick_d(2, 3), pick_n(1, 6);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d_s = pick_ds(rng), d = pick_d(rng), n = pick_n(rng);
    const ComplexMatrix u = dense::random_unitary(d_s * d, rng);
    const std::vector<cplx> phi = dense::random_state(d_s, rng);
    std::vector<std::vector<cplx>> psis;
    for (std::size_t k = 0; k < n; ++k) psis.push_back(dense::random_state(d, rng));
    const MPSChain chain = build_standard_mps(u, phi, psis);
    worst = std::max(worst, check_right_normalization(chain, 1e-12).max_deviation);
  }
  c.within(worst, 1e-12, "MPS right normalization (500 random chains)");

  worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d_s = pick_ds(rng), d = pick_d(rng), n = pick_n(rng);
    const ComplexMatrix u = dense::random_unitary(d_s * d, rng);
    const DensityMatrix rho_s(dense::random_density(d_s, rng));
    std::vector<DensityMatrix> rhos;
    for (std::size_t k = 0; k < n; ++k) rhos.emplace_back(dense::random_density(d, rng));
    const MPDOChain chain =
        build_standard_mpdo(u, rho_s, std::span<const DensityMatrix>(rhos));
    worst = std::max(worst, check_right_normalization_mpdo(chain, 1e-12).max_deviation);
  }
  c.within(worst, 1e-12, "MPDO right normalization (500 random chains)");
  return c.finish("right-normalization");
}

// --- example 2: thermal-ancilla chain tensors ------------------------------

CheckResult check_example2() {
  Checker c;
  const double g_tau = 0.3;
  const double gap = 1.0;  // (E_up - E_down)/kT used by the gibbs-chain preset
  const double p_down = 1.0 / (1.0 + std::exp(-gap));
  const double p_up = 1.0 / (1.0 + std::exp(gap));
  const double cg = std::cos(g_tau), sg = std::sin(g_tau);

  const ComplexMatrix u = matrix_exp_skew(ops::energy_exchange_generator(), g_tau);
  ComplexMatrix gibbs(2, 2);
  gibbs(0, 0) = p_down;
  gibbs(1, 1) = p_up;
  const DensityMatrix anc(gibbs);
  std::vector<cplx> up = {0.0, 1.0};
  ComplexMatrix sys(2, 2);
  sys(1, 1) = 1.0;
  const std::vector<DensityMatrix> rhos(3, anc);
  const MPDOChain chain =
      build_standard_mpdo(u, DensityMatrix(sys), std::span<const DensityMatrix>(rhos));

  // Printed closed-form tensors, interior site, Kraus order (down, up).
  const double a = std::sqrt(p_down), b = std::sqrt(p_up);
  ComplexMatrix b1d = {{a, 0.0}, {0.0, a * cg}};
  ComplexMatrix b2d = {{0.0, -b * sg}, {0.0, 0.0}};
  ComplexMatrix b1u = {{0.0, 0.0}, {a * sg, 0.0}};
  ComplexMatrix b2u = {{b * cg, 0.0}, {0.0, b}};
  const MPDOSiteTensor& site = chain.sites[1];
  c.require(site.kraus_count == 2, "interior Kraus count is 2");
  c.within(site.slices[0][0].max_abs_diff(b1d), 1e-12, "B1 down");
  c.within(site.slices[0][1].max_abs_diff(b2d), 1e-12, "B2 down");
  c.within(site.slices[1][0].max_abs_diff(b1u), 1e-12, "B1 up");
  c.within(site.slices[1][1].max_abs_diff(b2u), 1e-12, "B2 up");

  // First-site tensors with the (system, ancilla) spectral weights.
  ComplexMatrix f1d(1, 2), f2d(1, 2), f1u(1, 2), f2u(1, 2);
  f1d(0, 1) = a * cg;
  f1u(0, 0) = a * sg;
  f2u(0, 1) = b;
  const MPDOSiteTensor& first = chain.sites[0];
  c.require(first.kraus_count == 2, "first-site Kraus count is 2");
  c.within(first.slices[0][0].max_abs_diff(f1d), 1e-12, "first B1 down");
  c.within(first.slices[0][1].max_abs_diff(f2d), 1e-12, "first B2 down");
  c.within(first.slices[1][0].max_abs_diff(f1u), 1e-12, "first B1 up");
  c.within(first.slices[1][1].max_abs_diff(f2u), 1e-12, "first B2 up");

  // Contraction against the dense reference.
  const DensityMatrix got = contract_density(chain);
  const ComplexMatrix want =
      dense::collision_density(u, sys, {gibbs, gibbs, gibbs});
  c.within(got.matrix.max_abs_diff(want), 1e-12, "contracted density vs dense");
  return c.finish("example2-gibbs");
}

// --- criterion 4: GHZ-qutrit Bloch scaling ---------------------------------

CheckResult check_example3() {
  Checker c;
  for (const double g_tau : {0.2, 1.0}) {
    ScenarioSpec spec = builtin_scenario("ghz-qutrit");
    spec.scenario.g = g_tau;
    spec.scenario.steps = 50;
    spec.scenario.rho_s0 = DensityMatrix(ops::qubit_from_bloch(1.0, 0.0, 0.0));
    const Trajectory tx = evolve(spec.scenario);
    spec.scenario.rho_s0 = DensityMatrix(ops::qubit_from_bloch(0.0, 0.0, 1.0));
    const Trajectory tz = evolve(spec.scenario);
    double dev_x = 0.0, dev_z = 0.0;
    for (std::size_t k = 0; k <= 50; ++k) {
      const double lx = ops::bloch_vector(tx.states[k].matrix)[0];
      const double lz = ops::bloch_vector(tz.states[k].matrix)[2];
      dev_x = std::max(dev_x, std::abs(lx - reference::ghz_lambda_xy(k, g_tau)));
      dev_z = std::max(dev_z, std::abs(lz - reference::ghz_lambda_z(k, g_tau)));
    }
    const std::string tag = " (g_tau=" + std::to_string(g_tau) + ")";
    c.within(dev_x, 1e-10, "lambda_xy(k)" + tag);
    c.within(dev_z, 1e-10, "lambda_z(k)" + tag);
  }
  c.within(std::abs(reference::ghz_lambda_xy(0, 0.2) - 1.0), 1e-15, "lambda(0) = 1");
  bool increases = false;
  for (std::size_t k = 0; k < 50; ++k)
    if (std::abs(reference::ghz_lambda_xy(k + 1, 0.2)) >
        std::abs(reference::ghz_lambda_xy(k, 0.2)) + 1e-12)
      increases = true;
  c.require(increases, "|lambda(k)| shows at least one increase at g_tau=0.2");
  return c.finish("example3-scaling");
}

// --- criterion 5: GHZ controlled-unitary kernel ----------------------------

CheckResult check_example4() {
  Checker c;
  ScenarioSpec spec = builtin_scenario("ghz-controlled");
  spec.scenario.g = 0.7;
  const double tau = spec.scenario.tau;
  std::map<std::size_t, double> norms;
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t m = 1; m <= k; ++m) {
      const Superoperator got = exact_kernel_term(spec.scenario, k, m);
      const Superoperator want = reference::ghz_controlled_kernel(m, 0.7, tau);
      c.within(got.matrix.max_abs_diff(want.matrix), 1e-11,
               "kernel(k=" + std::to_string(k) + ",m=" + std::to_string(m) + ")");
      norms[m] = got.norm_max();
    }
  c.require(norms[3] >= 0.5 * norms[1] && norms[2] >= 0.5 * norms[1],
            "kernel magnitude does not decay with m");
  return c.finish("example4-kernel");
}

// --- criterion 6: AKLT controlled-Pauli stroboscopic limit ------------------

CheckResult check_example5() {
  Checker c;
  ScenarioSpec spec = builtin_scenario("aklt-projective");

  // Transfer spectrum {1, -1/3 x3}.
  const ComplexMatrix t = transfer_matrix(spec.scenario.env);
  c.within(t.max_abs_diff(reference::aklt_transfer_matrix()), 1e-12, "transfer matrix");
  const SpectrumResult spec_t = correlation_spectrum(spec.scenario.env);
  c.within(std::abs(spec_t.eigenvalues[0] - cplx(1.0, 0.0)), 1e-10, "leading eigenvalue");
  for (int i = 1; i < 4; ++i)
    c.within(std::abs(spec_t.eigenvalues[i] - cplx(-1.0 / 3.0, 0.0)), 1e-10,
             "subleading eigenvalue");

  // Two-site reduced densities.
  for (std::size_t m = 1; m <= 6; ++m) {
    const DensityMatrix pair = reduced_two_site_density(spec.scenario.env, 1, 1 + m);
    c.within(pair.matrix.max_abs_diff(reference::aklt_pair_density(m)), 1e-10,
             "pair density m=" + std::to_string(m));
  }

  // Stroboscopic generator against the closed form.
  const StroboscopicGenerator gen = stroboscopic_generator(spec.scenario, 1);
  const Superoperator want =
      reference::aklt_projective_gksl_generator(spec.scenario.g, spec.scenario.tau);
  c.within(gen.effective.matrix.max_abs_diff(want.matrix), 1e-10, "strobo generator");
  c.require(gen.kossakowski.gksl_valid, "Kossakowski matrix PSD");

  // Integrated stroboscopic trajectory vs exact evolution over 200 collisions.
  const Trajectory exact = evolve(spec.scenario);
  std::vector<double> grid;
  for (std::size_t k = 0; k <= 200; ++k) grid.push_back(double(k) * spec.scenario.tau);
  const Trajectory strobo =
      integrate_generator(gen.effective, spec.scenario.rho_s0, grid, 8);
  const Trajectory local_only =
      integrate_generator(gen.local, spec.scenario.rho_s0, grid, 8);
  double dev_strobo = 0.0, dev_local = 0.0;
  for (std::size_t k = 0; k <= 200; ++k) {
    dev_strobo =
        std::max(dev_strobo, bloch_dev(strobo.states[k].matrix, exact.states[k].matrix));
    dev_local =
        std::max(dev_local, bloch_dev(local_only.states[k].matrix, exact.states[k].matrix));
  }
  c.within(dev_strobo, 2e-2, "stroboscopic trajectory vs exact (Bloch)");
  c.require(dev_local > 5e-2, "correlation-free trajectory separates from exact");
  return c.finish("example5-strobo");
}

// --- criterion 7: AKLT Heisenberg-type depolarization -----------------------

CheckResult check_example6() {
  Checker c;
  for (const double g_tau : {0.4, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0}) {
    ScenarioSpec spec = builtin_scenario("aklt-heisenberg");
    spec.scenario.g = g_tau;
    spec.scenario.steps = 50;
    const ComplexMatrix rho0 = spec.scenario.rho_s0.matrix;
    const Trajectory traj = evolve(spec.scenario);
    double dev = 0.0;
    for (std::size_t k = 0; k <= 50; ++k) {
      const double q = reference::aklt_depolarization_q(k, g_tau);
      ComplexMatrix want = cplx(q, 0.0) * rho0;
      want += cplx(0.5 * (1.0 - q), 0.0) * ComplexMatrix::identity(2);
      dev = std::max(dev, traj.states[k].matrix.max_abs_diff(want));
    }
    c.within(dev, 1e-10, "q(t) closed form (g_tau=" + std::to_string(g_tau) + ")");
  }

  {
    // Step-difference identity at g_tau = 0.4 from the simulated trajectory.
    ScenarioSpec spec = builtin_scenario("aklt-heisenberg");
    spec.scenario.g = 0.4;
    spec.scenario.steps = 2;
    const Trajectory traj = evolve(spec.scenario);
    const double z0 = ops::bloch_vector(traj.states[0].matrix)[2];
    const double q1 = ops::bloch_vector(traj.states[1].matrix)[2] / z0;
    const double q2 = ops::bloch_vector(traj.states[2].matrix)[2] / z0;
    c.within(std::abs((q2 - q1) - reference::aklt_q_step_difference(0.4)), 1e-10,
             "q(2 tau) - q(tau) identity");
  }

  {
    // First-order stroboscopic generator vanishes.
    ScenarioSpec spec = builtin_scenario("aklt-heisenberg");
    const StroboscopicGenerator gen = stroboscopic_generator(spec.scenario, 1);
    c.within(gen.effective.norm_max(), 1e-10, "first-order strobo generator norm");
  }

  {
    // Decay-rate fit at g_tau = 0.02 against g^4 tau^3 / 8.
    ScenarioSpec spec = builtin_scenario("aklt-heisenberg");
    spec.scenario.g = 0.02;
    spec.scenario.steps = 2000;
    const Trajectory traj = evolve(spec.scenario);
    const double z0 = ops::bloch_vector(traj.states[0].matrix)[2];
    const double q_a = ops::bloch_vector(traj.states[1000].matrix)[2] / z0;
    const double q_b = ops::bloch_vector(traj.states[2000].matrix)[2] / z0;
    const double rate = -(std::log(q_b) - std::log(q_a)) / (1000.0 * spec.scenario.tau);
    const double want = reference::aklt_small_coupling_rate(0.02, spec.scenario.tau);
    c.require(std::abs(rate - want) <= 0.05 * want,
              "fitted decay rate within 5% of g^4 tau^3/8 (got " + format_double(rate) +
                  ", want " + format_double(want) + ")");
  }
  return c.finish("example6-exact");
}

// --- criterion 8: perturbative order audits --------------------------------

CheckResult check_perturbation_orders() {
  Checker c;
  for (const char* name : {"ghz-qutrit", "ghz-controlled", "aklt-projective",
                           "aklt-heisenberg"}) {
    ScenarioSpec spec = builtin_scenario(name);
    const std::size_t mmax = std::string(name).rfind("aklt", 0) == 0 ? 4 : 2;
    for (std::size_t m = 1; m <= mmax; ++m) {
      const OrderCheckReport rep = perturbative_order_check(spec.scenario, m + 1, m);
      c.require(rep.pass, std::string(name) + " m=" + std::to_string(m) +
                              " order audit (exponent " +
                              format_double(rep.fitted_exponent) + ")");
    }
    // k-independence of the settled kernel.
    const Superoperator k1 = exact_kernel_term(spec.scenario.with_g(0.05), 2, 1);
    const Superoperator k2 = exact_kernel_term(spec.scenario.with_g(0.05), 3, 1);
    c.within(k1.matrix.max_abs_diff(k2.matrix), 1e-12,
             std::string(name) + " kernel k-independence");

    // Second-order coefficient against the finite-difference extraction.
    for (std::size_t m = 1; m <= 2; ++m) {
      const Superoperator k2c = kernel_order2(spec.scenario, m);
      const double g = 5e-3 / spec.scenario.tau;
      Superoperator fd = exact_kernel_term(spec.scenario.with_g(g), m + 1, m);
      fd *= cplx(1.0 / (g * g * spec.scenario.tau), 0.0);
      const double rel = fd.matrix.max_abs_diff(k2c.matrix) / k2c.matrix.max_abs();
      c.require(rel <= 0.02, std::string(name) + " m=" + std::to_string(m) +
                                 " finite-difference match (rel " + format_double(rel) + ")");
    }
  }
  for (const char* name : {"w-chain", "gibbs-chain"}) {
    ScenarioSpec spec = builtin_scenario(name);
    const Superoperator k = exact_kernel_term(spec.scenario, 3, 2);
    c.within(k.norm_max(), 1e-13, std::string(name) + " memory terms vanish");
  }
  return c.finish("perturbation-orders");
}

// --- criterion 9: linear-scaling long run -----------------------------------

CheckResult check_scaling() {
  Checker c;
  ScenarioSpec spec = builtin_scenario("aklt-heisenberg");  // d_S=2, d=3, D_bond=2
  spec.scenario.g = 0.05;
  spec.scenario.steps = 10000;
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = evolve(spec.scenario);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(traj.states.size() == 10001, "trajectory length 10001");
  c.require(elapsed < 10.0,
            "10^4 collisions in under 10 s (took " + format_double(elapsed) + " s)");
  double trace_dev = 0.0;
  for (std::size_t k = 0; k <= 10000; k += 1000)
    trace_dev = std::max(trace_dev, std::abs(traj.states[k].matrix.trace() - cplx(1.0, 0.0)));
  c.within(trace_dev, 1e-10, "trace preservation over the long run");
  return c.finish("scaling");
}

// --- criterion 10: Nakajima-Zwanzig consistency -----------------------------

CheckResult check_nz_consistency() {
  Checker c;
  for (const std::string& name : builtin_scenario_names()) {
    ScenarioSpec spec = builtin_scenario(name);
    spec.scenario.steps = 9;
    const Trajectory traj = evolve(spec.scenario);
    double dev = 0.0;
    for (std::size_t k = 0; k <= 8; ++k) {
      const DensityMatrix rebuilt = nz_reconstruct(spec.scenario, k);
      dev = std::max(dev, rebuilt.matrix.max_abs_diff(traj.states[k + 1].matrix));
    }
    c.within(dev, 1e-10, name + " NZ reconstruction (k <= 8)");
  }
  return c.finish("nz-consistency");
}

using CheckFn = std::function<CheckResult()>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"example1-w-chain", check_example1},
      {"example2-gibbs", check_example2},
      {"dense-oracle", check_dense_oracle},
      {"right-normalization", check_right_norm_trials},
      {"example3-scaling", check_example3},
      {"example4-kernel", check_example4},
      {"example5-strobo", check_example5},
      {"example6-exact", check_example6},
      {"perturbation-orders", check_perturbation_orders},
      {"scaling", check_scaling},
      {"nz-consistency", check_nz_consistency},
  };
  return checks;
}

}  // namespace

std::vector<std::string> validation_check_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

CheckResult run_validation_check(const std::string& name) {
  for (const auto& [n, fn] : registry())
    if (n == name) {
      try {
        return fn();
      } catch (const std::exception& e) {
        CheckResult r;
        r.name = name;
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
        return r;
      }
    }
  throw std::invalid_argument("unknown validation check: " + name);
}

std::vector<CheckResult> run_validation(const std::string& selector) {
  std::vector<CheckResult> results;
  if (selector == "all" || selector.empty()) {
    for (const auto& [name, fn] : registry()) results.push_back(run_validation_check(name));
    return results;
  }
  // Example aliases map to the matching check prefix.
  for (const auto& [name, fn] : registry()) {
    if (name == selector || name.rfind(selector + "-", 0) == 0)
      results.push_back(run_validation_check(name));
  }
  if (results.empty()) throw std::invalid_argument("unknown validation selector: " + selector);
  return results;
}

std::string validation_report_json(const std::vector<CheckResult>& results) {
  nlohmann::json j;
  j["checks"] = nlohmann::json::array();
  bool all = true;
  for (const CheckResult& r : results) {
    j["checks"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    all = all && r.pass;
  }
  j["pass"] = all;
  return j.dump(2);
}

}  // namespace collisim
