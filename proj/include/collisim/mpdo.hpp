#pragma once

#include <span>
#include <vector>

#include "collisim/linalg.hpp"
#include "collisim/mps.hpp"

namespace collisim {

// One MPDO site: per (physical index i, Kraus index b) a left_dim x right_dim
// matrix B_b^i. The rank-6 tensor M^{i i'} = sum_b B_b^i (x) conj(B_b^{i'})
// keeps the represented operator positive semidefinite by construction.
struct MPDOSiteTensor {
  std::size_t physical_dim = 0;
  std::size_t left_dim = 0;
  std::size_t right_dim = 0;
  std::size_t kraus_count = 0;
  std::vector<std::vector<ComplexMatrix>> slices;  // slices[i][b]

  void validate() const;
  double right_normalization_deviation() const;
};

struct MPDOChain {
  std::vector<MPDOSiteTensor> sites;

  void validate() const;
  std::size_t length() const { return sites.size(); }
  // Total complex parameters stored in the chain.
  std::size_t parameter_count() const;
};

// Chain produced by the mixed-state standard collision model: n ancilla
// sites followed by the delta-tensor system site. Kraus indices come from
// the spectral decompositions of the inputs; eigenvalues below weight_floor
// are dropped, spectral pairs are enumerated in descending-eigenvalue order
// and eigenvector phases are fixed (largest-magnitude component real
// positive) so the tensors are deterministic across runs.
MPDOChain build_standard_mpdo(const ComplexMatrix& u, const DensityMatrix& rho_s,
                              std::span<const DensityMatrix> rhos,
                              const Tolerances& tols = default_tols(),
                              double weight_floor = 1e-12);
MPDOChain build_standard_mpdo(std::span<const ComplexMatrix> us, const DensityMatrix& rho_s,
                              std::span<const DensityMatrix> rhos,
                              const Tolerances& tols = default_tols(),
                              double weight_floor = 1e-12);

// M_k^{i i'} as a (left^2) x (right^2) matrix.
ComplexMatrix m_tensor(const MPDOSiteTensor& site, std::size_t i, std::size_t i_prime);

// Full contraction to the density operator on (ancilla 1, ..., ancilla n,
// system).
DensityMatrix contract_density(const MPDOChain& chain, std::size_t dim_cap = 512);

NormalizationReport check_right_normalization_mpdo(const MPDOChain& chain, double tol = 1e-12);

// State of the leftmost k sites, contracting only those sites (the right
// closure uses the right-normalization identity).
DensityMatrix reduced_density_first_k_mpdo(const MPDOChain& chain, std::size_t k,
                                           std::size_t dim_cap = 512);

// Spectral decomposition of a density matrix as weighted pure states, in
// descending-eigenvalue order with fixed eigenvector phases. Shared by the
// MPDO construction and the environment module.
struct SpectralEnsemble {
  std::vector<double> weights;
  std::vector<std::vector<cplx>> states;
};
SpectralEnsemble spectral_ensemble(const DensityMatrix& rho, double weight_floor = 1e-12);

}  // namespace collisim
