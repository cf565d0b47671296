#pragma once

#include <span>
#include <vector>

#include "collisim/linalg.hpp"

namespace collisim {

// One site of an MPS: per physical index a left_dim x right_dim matrix slice.
struct MPSSiteTensor {
  std::size_t physical_dim = 0;
  std::size_t left_dim = 0;
  std::size_t right_dim = 0;
  std::vector<ComplexMatrix> slices;  // slices[i] is left_dim x right_dim

  void validate() const;
  // max-abs deviation of sum_i A^i (A^i)^dag from the identity
  double right_normalization_deviation() const;
};

// Open-boundary chain; boundary bond dims are 1.
struct MPSChain {
  std::vector<MPSSiteTensor> sites;

  void validate() const;
  std::size_t length() const { return sites.size(); }
};

struct NormalizationReport {
  std::vector<double> per_site_deviation;
  double max_deviation = 0.0;
  bool pass = false;
};

// Chain produced by the pure-state standard collision model: n ancilla sites
// followed by one system site with the delta terminal tensor. Contracted
// subsystem order is (ancilla 1, ..., ancilla n, system).
MPSChain build_standard_mps(const ComplexMatrix& u, const std::vector<cplx>& phi,
                            std::span<const std::vector<cplx>> psis,
                            const Tolerances& tols = default_tols());
// Per-collision unitaries.
MPSChain build_standard_mps(std::span<const ComplexMatrix> us, const std::vector<cplx>& phi,
                            std::span<const std::vector<cplx>> psis,
                            const Tolerances& tols = default_tols());

// Product of matrix slices for one physical configuration.
cplx amplitude(const MPSChain& chain, std::span<const std::size_t> indices);

// Full contraction into a global state vector (product of physical dims must
// stay within the cap).
std::vector<cplx> contract_statevector(const MPSChain& chain,
                                       std::size_t dim_cap = std::size_t(1) << 16);

NormalizationReport check_right_normalization(const MPSChain& chain, double tol = 1e-12);

// Reduced density matrix of sites 0..k-1 (the leftmost k sites), contracting
// only those sites; requires a right-normalized chain.
DensityMatrix reduced_density_left(const MPSChain& chain, std::size_t k,
                                   std::size_t dim_cap = std::size_t(1) << 10);

// Entanglement entropy across the cut after site k (sites 0..k-1 vs rest),
// from the bond-space Gram matrix; never builds the d^k reduced state.
double entanglement_entropy_cut(const MPSChain& chain, std::size_t k);

}  // namespace collisim
