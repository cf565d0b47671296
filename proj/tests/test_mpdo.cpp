#include <doctest.h>

#include <cmath>
#include <random>

#include "collisim/dense_reference.hpp"
#include "collisim/mpdo.hpp"
#include "collisim/operators.hpp"

using namespace collisim;

namespace {

DensityMatrix pure_dm(const std::vector<cplx>& v) {
  ComplexMatrix rho(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) rho(i, j) = v[i] * std::conj(v[j]);
  return DensityMatrix(std::move(rho));
}

}  // namespace

TEST_CASE("pure inputs degenerate to the MPS projector") {
  std::mt19937_64 rng(60);
  const ComplexMatrix u = dense::random_unitary(4, rng);
  const std::vector<cplx> phi = dense::random_state(2, rng);
  std::vector<std::vector<cplx>> psis;
  std::vector<DensityMatrix> rhos;
  for (int k = 0; k < 3; ++k) {
    psis.push_back(dense::random_state(2, rng));
    rhos.push_back(pure_dm(psis.back()));
  }
  const MPDOChain chain =
      build_standard_mpdo(u, pure_dm(phi), std::span<const DensityMatrix>(rhos));
  for (const MPDOSiteTensor& site : chain.sites) CHECK(site.kraus_count == 1);

  const MPSChain mps = build_standard_mps(u, phi, psis);
  const std::vector<cplx> state = contract_statevector(mps);
  const DensityMatrix rho = contract_density(chain);
  double dev = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i)
    for (std::size_t j = 0; j < state.size(); ++j)
      dev = std::max(dev, std::abs(rho.matrix(i, j) - state[i] * std::conj(state[j])));
  CHECK(dev < 1e-12);
}

TEST_CASE("random mixed chain matches the dense reference") {
  std::mt19937_64 rng(61);
  const ComplexMatrix u = dense::random_unitary(4, rng);
  const ComplexMatrix rho_s = dense::random_density(2, rng);
  std::vector<ComplexMatrix> raw;
  std::vector<DensityMatrix> rhos;
  for (int k = 0; k < 3; ++k) {
    raw.push_back(dense::random_density(2, rng));
    rhos.emplace_back(raw.back());
  }
  const MPDOChain chain =
      build_standard_mpdo(u, DensityMatrix(rho_s), std::span<const DensityMatrix>(rhos));
  const DensityMatrix got = contract_density(chain);
  CHECK(got.matrix.max_abs_diff(dense::collision_density(u, rho_s, raw)) < 1e-12);

  // Trace audit over random scenarios.
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix ur = dense::random_unitary(4, rng);
    std::vector<DensityMatrix> anc;
    for (int k = 0; k < 2; ++k) anc.emplace_back(dense::random_density(2, rng));
    const MPDOChain c = build_standard_mpdo(ur, DensityMatrix(dense::random_density(2, rng)),
                                            std::span<const DensityMatrix>(anc));
    const DensityMatrix rho = contract_density(c);
    CHECK(std::abs(rho.matrix.trace() - cplx(1.0, 0.0)) < 1e-12);
    CHECK(rho.herm_deviation() < 1e-12);
    CHECK(rho.min_eigenvalue() > -1e-10);
  }
}

TEST_CASE("right normalization of MPDO chains") {
  std::mt19937_64 rng(62);
  const ComplexMatrix u = dense::random_unitary(6, rng);
  std::vector<DensityMatrix> rhos;
  for (int k = 0; k < 3; ++k) rhos.emplace_back(dense::random_density(3, rng));
  MPDOChain chain = build_standard_mpdo(u, DensityMatrix(dense::random_density(2, rng)),
                                        std::span<const DensityMatrix>(rhos));
  CHECK(check_right_normalization_mpdo(chain, 1e-12).pass);
  CHECK(chain.sites.back().right_normalization_deviation() == 0.0);

  // Zeroing one Kraus slice breaks the condition.
  for (auto& family : chain.sites[1].slices) family[0] = ComplexMatrix(2, 2);
  CHECK_FALSE(check_right_normalization_mpdo(chain, 1e-12).pass);
}

TEST_CASE("m_tensor identities") {
  std::mt19937_64 rng(63);
  const ComplexMatrix u = dense::random_unitary(4, rng);
  std::vector<DensityMatrix> rhos;
  for (int k = 0; k < 2; ++k) rhos.emplace_back(dense::random_density(2, rng));
  const MPDOChain chain = build_standard_mpdo(u, DensityMatrix(dense::random_density(2, rng)),
                                              std::span<const DensityMatrix>(rhos));

  // Normalization identity: sum_i M^{ii} applied to vec(I) returns vec(I).
  const MPDOSiteTensor& site = chain.sites[1];
  ComplexMatrix tsum(site.left_dim * site.left_dim, site.right_dim * site.right_dim);
  for (std::size_t i = 0; i < site.physical_dim; ++i) tsum += m_tensor(site, i, i);
  ComplexMatrix vec_id(site.right_dim * site.right_dim, 1);
  for (std::size_t a = 0; a < site.right_dim; ++a) vec_id(a * site.right_dim + a, 0) = 1.0;
  ComplexMatrix lhs = tsum * vec_id;
  ComplexMatrix want(site.left_dim * site.left_dim, 1);
  for (std::size_t a = 0; a < site.left_dim; ++a) want(a * site.left_dim + a, 0) = 1.0;
  CHECK(lhs.max_abs_diff(want) < 1e-12);

  // Single-Kraus chains: M^{ii'} = A^i (x) conj(A^{i'}).
  const std::vector<cplx> phi = dense::random_state(2, rng);
  std::vector<std::vector<cplx>> psis;
  std::vector<DensityMatrix> pure;
  for (int k = 0; k < 2; ++k) {
    psis.push_back(dense::random_state(2, rng));
    pure.push_back(pure_dm(psis.back()));
  }
  const MPDOChain pchain =
      build_standard_mpdo(u, pure_dm(phi), std::span<const DensityMatrix>(pure));
  const MPDOSiteTensor& psite = pchain.sites[1];
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t ip = 0; ip < 2; ++ip) {
      const ComplexMatrix expect =
          kron(psite.slices[i][0], psite.slices[ip][0].conjugate());
      CHECK(m_tensor(psite, i, ip).max_abs_diff(expect) < 1e-14);
    }
}

TEST_CASE("reduced density of leading sites") {
  std::mt19937_64 rng(64);
  // Identity collisions leave the ancillas in their product state.
  std::vector<ComplexMatrix> raw;
  std::vector<DensityMatrix> rhos;
  for (int k = 0; k < 3; ++k) {
    raw.push_back(dense::random_density(2, rng));
    rhos.emplace_back(raw.back());
  }
  const MPDOChain id_chain =
      build_standard_mpdo(ComplexMatrix::identity(4), DensityMatrix(dense::random_density(2, rng)),
                          std::span<const DensityMatrix>(rhos));
  const DensityMatrix two = reduced_density_first_k_mpdo(id_chain, 2);
  CHECK(two.matrix.max_abs_diff(kron(raw[0], raw[1])) < 1e-12);

  // Covering all sites reproduces the full contraction.
  const ComplexMatrix u = dense::random_unitary(4, rng);
  const MPDOChain chain = build_standard_mpdo(u, DensityMatrix(dense::random_density(2, rng)),
                                              std::span<const DensityMatrix>(rhos));
  const DensityMatrix full = reduced_density_first_k_mpdo(chain, chain.length());
  CHECK(full.matrix.max_abs_diff(contract_density(chain).matrix) < 1e-13);

  // Against the dense partial trace for a 4-ancilla chain.
  std::vector<ComplexMatrix> raw4;
  std::vector<DensityMatrix> rhos4;
  for (int k = 0; k < 4; ++k) {
    raw4.push_back(dense::random_density(2, rng));
    rhos4.emplace_back(raw4.back());
  }
  const ComplexMatrix rho_s = dense::random_density(2, rng);
  const MPDOChain chain4 =
      build_standard_mpdo(u, DensityMatrix(rho_s), std::span<const DensityMatrix>(rhos4));
  const ComplexMatrix dense_full = dense::collision_density(u, rho_s, raw4);
  const ComplexMatrix dense_two = partial_trace(dense_full, {2, 2, 2, 2, 2}, {0, 1});
  CHECK(reduced_density_first_k_mpdo(chain4, 2).matrix.max_abs_diff(dense_two) < 1e-12);

  // Past-future independence: replacing the tail with any right-normalized
  // tensors leaves the leading block untouched.
  MPDOChain swapped = chain4;
  const ComplexMatrix u2 = dense::random_unitary(4, rng);
  std::vector<DensityMatrix> tail = {DensityMatrix(dense::random_density(2, rng)),
                                     DensityMatrix(dense::random_density(2, rng))};
  const MPDOChain other = build_standard_mpdo(u2, DensityMatrix(dense::random_density(2, rng)),
                                              std::span<const DensityMatrix>(tail));
  swapped.sites[2] = other.sites[1];
  swapped.sites[3] = other.sites[1];
  CHECK(check_right_normalization_mpdo(swapped, 1e-12).pass);
  CHECK(reduced_density_first_k_mpdo(swapped, 2)
            .matrix.max_abs_diff(reduced_density_first_k_mpdo(chain4, 2).matrix) < 1e-12);
}

TEST_CASE("parameter count scales linearly") {
  std::mt19937_64 rng(65);
  const std::size_t d_s = 2, d = 2, n = 1000;
  const ComplexMatrix u = dense::random_unitary(d_s * d, rng);
  std::vector<DensityMatrix> rhos(n, DensityMatrix(dense::random_density(d, rng)));
  const MPDOChain chain = build_standard_mpdo(u, DensityMatrix(dense::random_density(d_s, rng)),
                                              std::span<const DensityMatrix>(rhos));
  CHECK(chain.length() == n + 1);
  const std::size_t bound = d_s * d_s * d * d + (n - 1) * d_s * d_s * d_s * d_s * d * d;
  CHECK(chain.parameter_count() <= bound);
  CHECK(check_right_normalization_mpdo(chain, 1e-12).pass);
}

TEST_CASE("low-rank inputs shrink the Kraus count") {
  std::mt19937_64 rng(66);
  const ComplexMatrix u = dense::random_unitary(4, rng);
  // Rank-1 ancilla: a single Kraus index survives the spectral cut.
  std::vector<DensityMatrix> rhos = {pure_dm(dense::random_state(2, rng)),
                                     DensityMatrix(dense::random_density(2, rng))};
  const MPDOChain chain = build_standard_mpdo(u, DensityMatrix(dense::random_density(2, rng)),
                                              std::span<const DensityMatrix>(rhos));
  CHECK(chain.sites[0].kraus_count == 2);  // rank(rho_S) * rank(rho_1) = 2 * 1
  CHECK(chain.sites[1].kraus_count == 2);
}
