#include <doctest.h>

#include <cmath>
#include <random>

#include "collisim/dense_reference.hpp"
#include "collisim/environment.hpp"
#include "collisim/operators.hpp"
#include "collisim/reference_formulas.hpp"
#include "collisim/scenarios.hpp"

using namespace collisim;

TEST_CASE("bond recurrence: GHZ projects onto the maximally mixed bond state") {
  const EnvironmentMPDO env = builtin_environment("ghz-qutrit-env");
  const std::vector<DensityMatrix> chis = chi_sequence(env, 5);
  ComplexMatrix third = ComplexMatrix::identity(3);
  third *= cplx(1.0 / 3.0, 0.0);
  // chi_0 is the all-ones seed; one application of the recurrence kills the
  // off-diagonal sectors.
  CHECK(chis[0].matrix(0, 1) == cplx(1.0 / 3.0, 0.0));
  for (std::size_t k = 1; k <= 5; ++k) CHECK(chis[k].matrix.max_abs_diff(third) < 1e-14);
  for (const DensityMatrix& chi : chis) {
    CHECK(chi.herm_deviation() < 1e-10);
    CHECK(chi.trace_deviation() < 1e-10);
    CHECK(chi.min_eigenvalue() > -1e-10);
  }
}

TEST_CASE("bond recurrence: scalar bond for factorized environments") {
  std::mt19937_64 rng(70);
  const EnvironmentMPDO env =
      EnvironmentMPDO::homogeneous_factorized(DensityMatrix(dense::random_density(3, rng)));
  CHECK(env.bond_dim() == 1);
  for (const DensityMatrix& chi : chi_sequence(env, 4))
    CHECK(std::abs(chi.matrix(0, 0) - cplx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("bond recurrence: AKLT fixed point") {
  const EnvironmentMPDO env = builtin_environment("aklt-env");
  ComplexMatrix half = ComplexMatrix::identity(2);
  half *= cplx(0.5, 0.0);
  for (const DensityMatrix& chi : chi_sequence(env, 6))
    CHECK(chi.matrix.max_abs_diff(half) < 1e-14);
}

TEST_CASE("kraus embedding completeness") {
  // Interaction-free, single pure ancilla: Kraus reduce to <j|psi> I_S.
  std::mt19937_64 rng(71);
  const std::vector<cplx> psi = dense::random_state(3, rng);
  ComplexMatrix rho_psi(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) rho_psi(i, j) = psi[i] * std::conj(psi[j]);
  const EnvironmentMPDO env =
      EnvironmentMPDO::homogeneous_factorized(DensityMatrix(rho_psi));
  const std::vector<ComplexMatrix> kraus =
      kraus_embedding(env, 1, ComplexMatrix::identity(6));
  REQUIRE(kraus.size() == 3);
  double total = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    // Each operator is proportional to the identity on system (x) bond.
    const cplx scale = kraus[j](0, 0);
    CHECK(kraus[j].max_abs_diff(scale * ComplexMatrix::identity(2)) < 1e-12);
    total += std::norm(scale);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // Completeness sum for random environments and unitaries.
  for (const char* name : {"ghz-qutrit-env", "aklt-env"}) {
    const EnvironmentMPDO corr = builtin_environment(name);
    const ComplexMatrix u = dense::random_unitary(6, rng);
    const std::vector<ComplexMatrix> ks = kraus_embedding(corr, 1, u);
    ComplexMatrix comp(ks.front().rows(), ks.front().cols());
    for (const ComplexMatrix& k : ks) comp += k.adjoint() * k;
    CHECK(comp.max_abs_diff(ComplexMatrix::identity(comp.rows())) < 1e-11);
  }
}

TEST_CASE("evolve: no collisions leaves the state untouched") {
  ScenarioSpec spec = builtin_scenario("ghz-qutrit");
  spec.scenario.steps = 0;
  const Trajectory traj = evolve(spec.scenario);
  REQUIRE(traj.states.size() == 1);
  CHECK(traj.states[0].matrix.max_abs_diff(spec.scenario.rho_s0.matrix) == 0.0);
}

TEST_CASE("evolve: GHZ scaling factors match the closed form") {
  ScenarioSpec spec = builtin_scenario("ghz-qutrit");
  spec.scenario.steps = 5;
  spec.scenario.rho_s0 = DensityMatrix(ops::qubit_from_bloch(1.0, 0.0, 0.0));
  const Trajectory traj = evolve(spec.scenario);
  for (std::size_t k = 0; k <= 5; ++k) {
    const double lx = ops::bloch_vector(traj.states[k].matrix)[0];
    CHECK(std::abs(lx - reference::ghz_lambda_xy(k, 0.2)) < 1e-12);
  }
}

TEST_CASE("evolve preserves the joint state's physicality") {
  ScenarioSpec spec = builtin_scenario("aklt-heisenberg");
  spec.scenario.steps = 20;
  const Trajectory traj = evolve(spec.scenario, /*record_joint=*/true);
  REQUIRE(traj.joint_states.size() == 21);
  for (const DensityMatrix& joint : traj.joint_states) {
    CHECK(joint.herm_deviation() < 1e-10);
    CHECK(joint.trace_deviation() < 1e-10);
    CHECK(joint.min_eigenvalue() > -1e-10);
  }
}

TEST_CASE("factorized evolve matches the standard-collision MPDO trajectory") {
  std::mt19937_64 rng(72);
  const ComplexMatrix u = dense::random_unitary(4, rng);
  const ComplexMatrix rho_s = dense::random_density(2, rng);
  std::vector<DensityMatrix> rhos;
  for (int k = 0; k < 3; ++k) rhos.emplace_back(dense::random_density(2, rng));

  CollisionScenario sc;
  sc.d_s = 2;
  sc.d = 2;
  sc.unitary = u;
  sc.rho_s0 = DensityMatrix(rho_s);
  sc.env = EnvironmentMPDO::factorized(rhos);
  sc.steps = 3;
  const Trajectory traj = evolve(sc);

  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<DensityMatrix> first(rhos.begin(), rhos.begin() + k);
    const MPDOChain chain =
        build_standard_mpdo(u, sc.rho_s0, std::span<const DensityMatrix>(first));
    const DensityMatrix joint = contract_density(chain);
    std::vector<std::size_t> dims(k, 2);
    dims.push_back(2);
    const ComplexMatrix sys = partial_trace(joint.matrix, dims, {k});
    CHECK(traj.states[k].matrix.max_abs_diff(sys) < 1e-12);
  }
}

TEST_CASE("reduced environment states") {
  const EnvironmentMPDO aklt = builtin_environment("aklt-env");
  ComplexMatrix third = ComplexMatrix::identity(3);
  third *= cplx(1.0 / 3.0, 0.0);
  CHECK(reduced_site_density(aklt, 1).matrix.max_abs_diff(third) < 1e-13);
  CHECK(reduced_site_density(aklt, 4).matrix.max_abs_diff(third) < 1e-13);

  for (std::size_t m = 1; m <= 4; ++m) {
    const DensityMatrix pair = reduced_two_site_density(aklt, 1, 1 + m);
    CHECK(pair.matrix.max_abs_diff(reference::aklt_pair_density(m)) < 1e-12);
    // Translation invariance at the fixed point.
    const DensityMatrix shifted = reduced_two_site_density(aklt, 2, 2 + m);
    CHECK(shifted.matrix.max_abs_diff(pair.matrix) < 1e-12);
  }

  // Factorized environment: exact product.
  std::mt19937_64 rng(73);
  std::vector<DensityMatrix> rhos = {DensityMatrix(dense::random_density(2, rng)),
                                     DensityMatrix(dense::random_density(2, rng))};
  const EnvironmentMPDO fac = EnvironmentMPDO::factorized(rhos);
  const DensityMatrix pair = reduced_two_site_density(fac, 1, 2);
  CHECK(pair.matrix.max_abs_diff(kron(rhos[0].matrix, rhos[1].matrix)) < 1e-13);

  // Three-site reduction agrees with the dense environment state.
  const ComplexMatrix dense_env = dense::environment_density(aklt, 4);
  const ComplexMatrix want = partial_trace(dense_env, {3, 3, 3, 3}, {0, 1, 3});
  const DensityMatrix triple = reduced_three_site_density(aklt, 1, 2, 4);
  CHECK(triple.matrix.max_abs_diff(want) < 1e-12);
}

TEST_CASE("transfer matrix and correlation spectrum") {
  const EnvironmentMPDO aklt = builtin_environment("aklt-env");
  CHECK(transfer_matrix(aklt).max_abs_diff(reference::aklt_transfer_matrix()) < 1e-14);
  const TransferSpectrumSummary aklt_summary = summarize_transfer_spectrum(aklt);
  CHECK(aklt_summary.unit_multiplicity == 1);
  REQUIRE(aklt_summary.decaying.size() == 1);
  CHECK(std::abs(aklt_summary.decaying[0] - cplx(-1.0 / 3.0, 0.0)) < 1e-10);
  CHECK(aklt_summary.multiplicities[0] == 3);
  CHECK(aklt_summary.finite_correlation_length());

  std::mt19937_64 rng(74);
  const EnvironmentMPDO fac =
      EnvironmentMPDO::homogeneous_factorized(DensityMatrix(dense::random_density(2, rng)));
  const ComplexMatrix t = transfer_matrix(fac);
  CHECK(t.rows() == 1);
  CHECK(std::abs(t(0, 0) - cplx(1.0, 0.0)) < 1e-13);

  const EnvironmentMPDO ghz = builtin_environment("ghz-qutrit-env");
  const TransferSpectrumSummary ghz_summary = summarize_transfer_spectrum(ghz);
  CHECK(ghz_summary.unit_multiplicity == 3);
  CHECK_FALSE(ghz_summary.finite_correlation_length());

  std::vector<DensityMatrix> two = {DensityMatrix(dense::random_density(2, rng)),
                                    DensityMatrix(dense::random_density(2, rng))};
  const EnvironmentMPDO bounded = EnvironmentMPDO::factorized(two);
  CHECK_THROWS_AS(transfer_matrix(bounded), std::invalid_argument);
}

TEST_CASE("environment and scenario validation") {
  EnvironmentMPDO env = builtin_environment("aklt-env");
  CHECK_NOTHROW(env.validate());
  // Breaking right normalization is rejected.
  env.site_tensors.front().slices[0][0] *= cplx(2.0, 0.0);
  CHECK_THROWS_AS(env.validate(), std::invalid_argument);

  ScenarioSpec spec = builtin_scenario("ghz-qutrit");
  CHECK_NOTHROW(spec.scenario.validate());
  CollisionScenario bad = spec.scenario;
  bad.hamiltonian = cplx(2.0, 0.0) * (*bad.hamiltonian);  // operator norm 2
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  CollisionScenario no_int = spec.scenario;
  no_int.hamiltonian.reset();
  CHECK_THROWS_AS(no_int.validate(), std::invalid_argument);
}
