#include <doctest.h>

#include <cmath>
#include <random>

#include "collisim/dense_reference.hpp"
#include "collisim/mps.hpp"
#include "collisim/operators.hpp"

using namespace collisim;

namespace {

MPSChain w_chain(std::size_t n, double g_tau) {
  const ComplexMatrix u = matrix_exp_skew(ops::energy_exchange_generator(), g_tau);
  const std::vector<cplx> excited = {0.0, 1.0};
  const std::vector<std::vector<cplx>> ground(n, {1.0, 0.0});
  return build_standard_mps(u, excited, ground);
}

double state_norm(const std::vector<cplx>& v) {
  double n = 0.0;
  for (const cplx& x : v) n += std::norm(x);
  return std::sqrt(n);
}

}  // namespace

TEST_CASE("energy-exchange chain reproduces the closed-form tensors") {
  const double g_tau = 0.4;
  const double cg = std::cos(g_tau), sg = std::sin(g_tau);
  const MPSChain chain = w_chain(4, g_tau);
  REQUIRE(chain.length() == 5);

  // First site: row vectors (0, cos) and (sin, 0).
  ComplexMatrix a1_down(1, 2), a1_up(1, 2);
  a1_down(0, 1) = cg;
  a1_up(0, 0) = sg;
  CHECK(chain.sites[0].slices[0].max_abs_diff(a1_down) < 1e-15);
  CHECK(chain.sites[0].slices[1].max_abs_diff(a1_up) < 1e-15);

  // Interior sites: diag(1, cos) and the nilpotent lower-left sin block.
  ComplexMatrix ak_down(2, 2), ak_up(2, 2);
  ak_down(0, 0) = 1.0;
  ak_down(1, 1) = cg;
  ak_up(1, 0) = sg;
  for (std::size_t k = 1; k < 4; ++k) {
    CHECK(chain.sites[k].slices[0].max_abs_diff(ak_down) < 1e-15);
    CHECK(chain.sites[k].slices[1].max_abs_diff(ak_up) < 1e-15);
  }

  // Terminal tensor is the Kronecker delta.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t a = 0; a < 2; ++a)
      CHECK(chain.sites[4].slices[i](a, 0) == cplx(a == i ? 1.0 : 0.0, 0.0));

  // Nilpotency: no two ancillas carry the excitation simultaneously.
  std::vector<std::size_t> two_up = {1, 0, 1, 0, 0};
  CHECK(std::abs(amplitude(chain, two_up)) < 1e-15);
}

TEST_CASE("identity collisions give the product state") {
  const std::size_t n = 3;
  std::mt19937_64 rng(31);
  const std::vector<cplx> phi = dense::random_state(2, rng);
  std::vector<std::vector<cplx>> psis;
  for (std::size_t k = 0; k < n; ++k) psis.push_back(dense::random_state(2, rng));
  const MPSChain chain = build_standard_mps(ComplexMatrix::identity(4), phi, psis);
  const std::vector<cplx> state = contract_statevector(chain);
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    cplx want(1.0, 0.0);
    std::size_t rem = idx;
    // Subsystem order (ancilla 1, ..., ancilla n, system).
    const std::size_t sys = rem % 2;
    rem /= 2;
    std::size_t digits[3];
    for (std::size_t s = n; s-- > 0;) {
      digits[s] = rem % 2;
      rem /= 2;
    }
    for (std::size_t s = 0; s < n; ++s) want *= psis[s][digits[s]];
    want *= phi[sys];
    CHECK(std::abs(state[idx] - want) < 1e-14);
  }
}

TEST_CASE("random chain matches dense collision dynamics") {
  std::mt19937_64 rng(42);
  const ComplexMatrix u = dense::random_unitary(4, rng);
  const std::vector<cplx> phi = dense::random_state(2, rng);
  std::vector<std::vector<cplx>> psis;
  for (int k = 0; k < 4; ++k) psis.push_back(dense::random_state(2, rng));
  const MPSChain chain = build_standard_mps(u, phi, psis);
  const std::vector<cplx> got = contract_statevector(chain);
  const std::vector<cplx> want = dense::collision_statevector(u, phi, psis);
  double dev = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) dev = std::max(dev, std::abs(got[i] - want[i]));
  CHECK(dev < 1e-12);
  CHECK(std::abs(state_norm(got) - 1.0) < 1e-12);
}

TEST_CASE("per-collision unitaries are supported") {
  std::mt19937_64 rng(43);
  std::vector<ComplexMatrix> us;
  for (int k = 0; k < 3; ++k) us.push_back(dense::random_unitary(4, rng));
  const std::vector<cplx> phi = dense::random_state(2, rng);
  std::vector<std::vector<cplx>> psis;
  for (int k = 0; k < 3; ++k) psis.push_back(dense::random_state(2, rng));
  const MPSChain chain = build_standard_mps(std::span<const ComplexMatrix>(us), phi, psis);
  CHECK(check_right_normalization(chain, 1e-12).pass);
}

TEST_CASE("right normalization report") {
  MPSChain chain = w_chain(4, 0.3);
  CHECK(check_right_normalization(chain, 1e-12).pass);

  // Terminal delta tensor is exactly normalized.
  CHECK(chain.sites[4].right_normalization_deviation() == 0.0);

  // Doubling one slice breaks the condition with deviation 3 at that site.
  chain.sites[2].slices[0] *= cplx(2.0, 0.0);
  const NormalizationReport report = check_right_normalization(chain, 1e-12);
  CHECK_FALSE(report.pass);
  CHECK(report.per_site_deviation[2] == doctest::Approx(3.0).epsilon(1e-12));

  for (int t = 0; t < 25; ++t) {
    std::mt19937_64 rng(1000 + t);
    const ComplexMatrix u = dense::random_unitary(6, rng);
    const std::vector<cplx> phi = dense::random_state(2, rng);
    std::vector<std::vector<cplx>> psis(3, std::vector<cplx>());
    for (auto& psi : psis) psi = dense::random_state(3, rng);
    CHECK(check_right_normalization(build_standard_mps(u, phi, psis), 1e-12).pass);
  }
}

TEST_CASE("reduced density of the left block") {
  // All sites: the projector onto the contracted state.
  const MPSChain chain = w_chain(3, 0.5);
  const std::vector<cplx> state = contract_statevector(chain);
  const DensityMatrix full = reduced_density_left(chain, 4);
  for (std::size_t i = 0; i < state.size(); ++i)
    for (std::size_t j = 0; j < state.size(); ++j)
      CHECK(std::abs(full.matrix(i, j) - state[i] * std::conj(state[j])) < 1e-13);

  // Identity collisions: uncorrelated block.
  std::mt19937_64 rng(8);
  std::vector<std::vector<cplx>> psis;
  for (int k = 0; k < 3; ++k) psis.push_back(dense::random_state(2, rng));
  const std::vector<cplx> phi = dense::random_state(2, rng);
  const MPSChain product = build_standard_mps(ComplexMatrix::identity(4), phi, psis);
  const DensityMatrix block = reduced_density_left(product, 2);
  ComplexMatrix want(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t q = 0; q < 2; ++q)
          want(i * 2 + p, j * 2 + q) = psis[0][i] * std::conj(psis[0][j]) * psis[1][p] *
                                       std::conj(psis[1][q]);
  CHECK(block.matrix.max_abs_diff(want) < 1e-13);

  // Against the dense global state for the W chain.
  const MPSChain w4 = w_chain(4, 0.3);
  const std::vector<cplx> dense_state = dense::collision_statevector(
      matrix_exp_skew(ops::energy_exchange_generator(), 0.3), {0.0, 1.0},
      {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  ComplexMatrix proj(32, 32);
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 32; ++j) proj(i, j) = dense_state[i] * std::conj(dense_state[j]);
  const ComplexMatrix dense_block = partial_trace(proj, {2, 2, 2, 2, 2}, {0, 1});
  CHECK(reduced_density_left(w4, 2).matrix.max_abs_diff(dense_block) < 1e-12);
}

TEST_CASE("entanglement entropy across cuts") {
  // Product chain: zero entropy at every cut.
  std::mt19937_64 rng(12);
  std::vector<std::vector<cplx>> psis;
  for (int k = 0; k < 4; ++k) psis.push_back(dense::random_state(2, rng));
  const MPSChain product =
      build_standard_mps(ComplexMatrix::identity(4), dense::random_state(2, rng), psis);
  for (std::size_t k = 1; k <= 5; ++k)
    CHECK(entanglement_entropy_cut(product, k) == doctest::Approx(0.0).epsilon(1e-10));

  // Bounded by log2(d_S) and consistent with the explicit reduced state.
  const MPSChain chain = w_chain(3, M_PI / 4.0);
  for (std::size_t k = 1; k <= 4; ++k) {
    const double entropy = entanglement_entropy_cut(chain, k);
    CHECK(entropy <= std::log2(2.0) + 1e-9);
    const double via_block = von_neumann_entropy(reduced_density_left(chain, k));
    CHECK(entropy == doctest::Approx(via_block).epsilon(1e-10));
  }

  // Cut after the first site against the dense reduced state.
  const std::vector<cplx> dense_state = dense::collision_statevector(
      matrix_exp_skew(ops::energy_exchange_generator(), M_PI / 4.0), {0.0, 1.0},
      {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  ComplexMatrix proj(16, 16);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) proj(i, j) = dense_state[i] * std::conj(dense_state[j]);
  const DensityMatrix r1 = DensityMatrix(partial_trace(proj, {2, 2, 2, 2}, {0}));
  CHECK(entanglement_entropy_cut(chain, 1) ==
        doctest::Approx(von_neumann_entropy(r1)).epsilon(1e-10));
}

TEST_CASE("large chains build in linear memory") {
  const MPSChain chain = w_chain(10000, 0.2);
  CHECK(chain.length() == 10001);
  CHECK(check_right_normalization(chain, 1e-12).pass);
}

TEST_CASE("input validation") {
  const ComplexMatrix u = ComplexMatrix::identity(4);
  std::vector<std::vector<cplx>> psis = {{1.0, 0.0}};
  CHECK_THROWS_AS(build_standard_mps(u, {0.5, 0.0}, psis), std::invalid_argument);
  ComplexMatrix not_unitary(4, 4);
  not_unitary(0, 0) = 2.0;
  CHECK_THROWS_AS(build_standard_mps(not_unitary, {1.0, 0.0}, psis), std::invalid_argument);
  const MPSChain chain = w_chain(2, 0.1);
  std::vector<std::size_t> bad = {5, 0, 0};
  CHECK_THROWS_AS(amplitude(chain, bad), std::invalid_argument);
  CHECK_THROWS_AS(contract_statevector(w_chain(20, 0.1), 1 << 10), std::invalid_argument);
}
