#pragma once

#include <optional>
#include <vector>

#include "collisim/mpdo.hpp"
#include "collisim/superoperator.hpp"

namespace collisim {

// Initial ancilla environment as a right-canonical MPDO with an explicit
// bond-space density matrix chi0 closing the left edge. A homogeneous
// environment stores one site tensor and is conceptually unbounded; a
// bounded environment stores one tensor per site.
struct EnvironmentMPDO {
  DensityMatrix chi0;
  std::vector<MPDOSiteTensor> site_tensors;
  bool homogeneous = true;
  std::optional<std::size_t> length;  // nullopt: unbounded (homogeneous only)

  const MPDOSiteTensor& site(std::size_t k) const;  // k = 1, 2, ... (collision index)
  std::size_t bond_dim() const { return chi0.dim(); }
  std::size_t physical_dim() const;
  void validate(const Tolerances& tols = default_tols()) const;

  static EnvironmentMPDO factorized(std::vector<DensityMatrix> ancillas,
                                    double weight_floor = 1e-12);
  static EnvironmentMPDO homogeneous_factorized(const DensityMatrix& ancilla,
                                                double weight_floor = 1e-12);
  // Pure homogeneous MPS environment: one bond matrix per physical index.
  static EnvironmentMPDO homogeneous_mps(DensityMatrix chi0, std::vector<ComplexMatrix> a_slices);
  static EnvironmentMPDO homogeneous_mpdo(DensityMatrix chi0, MPDOSiteTensor site);
};

// Full experiment description. The interaction is either a dimensionless
// Hermitian Hamiltonian H (||H|| <= 1, collision unitary exp(-i g tau H)) or
// an explicit unitary.
struct CollisionScenario {
  std::size_t d_s = 0;
  std::size_t d = 0;
  std::optional<ComplexMatrix> hamiltonian;
  std::optional<ComplexMatrix> unitary;
  double g = 1.0;
  double tau = 1.0;
  DensityMatrix rho_s0;
  EnvironmentMPDO env;
  std::size_t steps = 0;

  double g_tau() const { return g * tau; }
  ComplexMatrix collision_unitary() const;
  // Same scenario with the coupling rescaled (used by the perturbative
  // order audits).
  CollisionScenario with_g(double g_new) const;
  void validate(const Tolerances& tols = default_tols()) const;
};

struct Trajectory {
  std::vector<DensityMatrix> states;        // rho_S(k tau), k = 0..steps
  std::vector<DensityMatrix> joint_states;  // optional: R(k tau) on system (x) bond
};

// chi_0 .. chi_k under the interaction-free bond recurrence
// chi_{m+1} = sum_{i,b} (B^i_b)^T chi_m conj(B^i_b).
std::vector<DensityMatrix> chi_sequence(const EnvironmentMPDO& env, std::size_t k);

// The d*D Kraus operators of the embedding map E^{[site]} on system (x) bond:
// K_{jb} = sum_i ((I_S (x) <j|) U (I_S (x) |i>)) (x) (B^i_b)^T.
std::vector<ComplexMatrix> kraus_embedding(const EnvironmentMPDO& env, std::size_t site,
                                           const ComplexMatrix& u);

// Markovian embedding: propagate the joint system (x) bond state through the
// E-maps; the reported system states are bond traces of the propagated joint
// state (the joint state itself is never re-factorized).
Trajectory evolve(const CollisionScenario& scenario, bool record_joint = false);

// Reduced states of the initial environment via transfer contraction (left
// environment chi_{s-1}, right closure by right-normalization). Sites are
// 1-based.
DensityMatrix reduced_site_density(const EnvironmentMPDO& env, std::size_t site);
DensityMatrix reduced_two_site_density(const EnvironmentMPDO& env, std::size_t s1, std::size_t s2);
DensityMatrix reduced_three_site_density(const EnvironmentMPDO& env, std::size_t s1,
                                         std::size_t s2, std::size_t s3);

// Transfer matrix T = sum_i M^{ii} (homogeneous environments only).
ComplexMatrix transfer_matrix(const EnvironmentMPDO& env);
SpectrumResult correlation_spectrum(const EnvironmentMPDO& env);

// Spectrum digest used by the stroboscopic machinery: eigenvalues with
// |lambda - 1| < unit_tol flagged as unit, the rest grouped by proximity.
struct TransferSpectrumSummary {
  std::size_t unit_multiplicity = 0;
  std::vector<cplx> decaying;                 // one representative per group
  std::vector<std::size_t> multiplicities;    // aligned with `decaying`
  bool finite_correlation_length() const { return unit_multiplicity == 1; }
};
TransferSpectrumSummary summarize_transfer_spectrum(const EnvironmentMPDO& env,
                                                    double unit_tol = kEigGroupTol,
                                                    double group_tol = kEigGroupTol);

}  // namespace collisim
