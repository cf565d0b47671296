#pragma once

#include <span>
#include <utility>
#include <vector>

#include "collisim/environment.hpp"

namespace collisim {

// Projection P[R] = tr_bond[R] (x) chi and its complement Q = Id - P, on the
// joint system (x) bond space.
Superoperator projector_P(std::size_t d_s, const DensityMatrix& chi);
Superoperator projector_Q(std::size_t d_s, const DensityMatrix& chi);
ComplexMatrix project_P(const ComplexMatrix& joint, std::size_t d_s, const DensityMatrix& chi);
ComplexMatrix project_Q(const ComplexMatrix& joint, std::size_t d_s, const DensityMatrix& chi);

// Embedding map E^{[site]} as a superoperator on system (x) bond.
Superoperator embedding_superop(const CollisionScenario& scenario, std::size_t site);

// Discrete Nakajima-Zwanzig kernel term K_{km} as a system superoperator.
// m = 0 is the time-local term (latest collision); m >= 1 composes E-maps
// and Q-projections. Both carry the 1/tau prefactor.
Superoperator exact_kernel_term(const CollisionScenario& scenario, std::size_t k, std::size_t m);

// rho_S((k+1)tau) rebuilt from the memory-kernel sum over the evolve()
// trajectory.
DensityMatrix nz_reconstruct(const CollisionScenario& scenario, std::size_t k);

// Connected correlation tables of the initial environment. Order 2 couples
// sites (1, 1+gap); order 3 couples sites (1, 1+gap1, 1+gap1+gap2).
struct CumulantTable {
  int order = 2;
  std::size_t phys_dim = 0;
  std::size_t gap1 = 0, gap2 = 0;
  std::vector<cplx> entries;

  cplx at2(std::size_t i1, std::size_t i1p, std::size_t i2, std::size_t i2p) const;
  cplx at3(std::size_t i1, std::size_t i1p, std::size_t i2, std::size_t i2p, std::size_t i3,
           std::size_t i3p) const;
  double max_abs() const;
  // max-abs of sum_i C_{(i,i),...} over the remaining indices (a cumulant
  // traces to zero in any slot).
  double trace_contraction_deviation() const;
};
CumulantTable two_point_cumulant(const EnvironmentMPDO& env, std::size_t m);
CumulantTable three_point_cumulant(const EnvironmentMPDO& env, std::size_t gap1,
                                   std::size_t gap2);

// Order-N coefficient of the single-collision map tr_anc[U (rho (x) |i><i'|) U^dag]
// in powers of (g tau), as a system superoperator.
Superoperator phi_term(const ComplexMatrix& h, std::size_t d_s, std::size_t d, int order,
                       std::size_t i, std::size_t i_prime);

// Dimensionless perturbative kernel coefficients (the 1/tau, g, g^2 tau, ...
// prefactors of the kernel series belong to the caller).
Superoperator kernel_order2(const CollisionScenario& scenario, std::size_t m);
Superoperator kernel_order3(const CollisionScenario& scenario, std::size_t m);

struct OrderCheckReport {
  double order0_norm = 0.0;       // ||tau K_km|| at g = 0
  std::vector<double> couplings;  // g grid of the fit
  std::vector<double> norms;      // ||K_km|| on the grid
  double fitted_exponent = 0.0;   // log-log slope
  bool vanishes = false;          // kernel identically zero on the grid
  bool pass = false;
};
OrderCheckReport perturbative_order_check(const CollisionScenario& scenario, std::size_t k,
                                          std::size_t m);

// Time-local stroboscopic-limit generator: the exact g^2 tau dissipator
// coefficient of (tr_1[U rho (x) rho_1 U^dag] - rho)/tau, with the Hamiltonian
// part -i g [<H>_anc, .] removed. Unless require_commuting is cleared, the
// removal demands [<H>_anc, rho_S(0)] = 0 within 1e-10.
Superoperator local_generator(const CollisionScenario& scenario, bool require_commuting = true);

struct KossakowskiReport {
  ComplexMatrix hamiltonian;        // effective Hamiltonian part
  ComplexMatrix kossakowski;        // matrix in the traceless Hermitian basis
  std::vector<double> rates;        // eigenvalues, descending
  std::vector<ComplexMatrix> jump_operators;
  double min_rate = 0.0;
  bool gksl_valid = false;
  double reconstruction_error = 0.0;
};
KossakowskiReport kossakowski_analysis(const Superoperator& gen, double psd_tol = 1e-10);

struct StroboscopicGenerator {
  Superoperator local;  // physical prefactor included
  std::vector<std::pair<cplx, Superoperator>> nonlocal_terms;  // (lambda_j, dimensionless map)
  Superoperator effective;
  int order = 1;
  double fit_residual = 0.0;
  KossakowskiReport kossakowski;
};
// order 1: local + g^2 tau sum_j lambda_j/(1-lambda_j) L_j with the L_j
// extracted from K_m = sum_j lambda_j^m L_j (Vandermonde solve over the
// distinct decaying transfer eigenvalues). order 2 additionally resums the
// third-order kernel into g^3 tau^2 terms.
StroboscopicGenerator stroboscopic_generator(const CollisionScenario& scenario, int order = 1);

// Fixed-step classical RK4 integration of d rho/dt = gen[rho] over the grid.
Trajectory integrate_generator(const Superoperator& gen, const DensityMatrix& rho0,
                               std::span<const double> t_grid, std::size_t substeps = 8);

}  // namespace collisim
