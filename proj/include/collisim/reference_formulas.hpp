#pragma once

#include "collisim/superoperator.hpp"

// Closed-form reference expressions used by the validation harness. This file
// is deliberately quarantined: the formulas here are written out literally and
// share no code with the engine paths they check.

namespace collisim::reference {

// W-chain (energy-exchange collisions on ground-state ancillas):
// amplitude with the single excitation on ancilla j (1-based) out of n.
double w_chain_amplitude(std::size_t j, double g_tau);
// amplitude of the all-ground ancilla string with the excitation on the
// system.
double w_chain_terminal_amplitude(std::size_t n, double g_tau);

// GHZ-qutrit spin-exchange collisions: Bloch scaling factors after k
// collisions.
double ghz_lambda_xy(std::size_t k, double g_tau);
double ghz_lambda_z(std::size_t k, double g_tau);

// GHZ-qutrit controlled-Pauli collisions: memory-kernel term (m >= 1) given
// by the product-of-(delta - 1/3) sum over Pauli strings.
Superoperator ghz_controlled_kernel(std::size_t m, double g_tau, double tau);

// Spin-1 chain with nearest-neighbor valence bonds (transfer eigenvalues
// {1, -1/3 x3}): two-site reduced density for sites (1, 1+m):
// (1/9) I (x) I + (1/3)(-1/3)^m sum_a J_a (x) J_a.
ComplexMatrix aklt_pair_density(std::size_t m);
ComplexMatrix aklt_transfer_matrix();

// Stroboscopic master-equation generator for the controlled-Pauli coupling
// to that chain: depolarizing rate g^2 tau / 3 minus the dissipator of
// (sigma_x - sigma_z)/sqrt(2) at the formal rate -g^2 tau / 3.
Superoperator aklt_projective_gksl_generator(double g, double tau);
Superoperator aklt_projective_local_generator(double g, double tau);

// Heisenberg-type coupling to the same chain: exact depolarization factor
// q(k) and related quantities.
double aklt_depolarization_q(std::size_t k, double g_tau);
double aklt_q_step_difference(double g_tau);          // q(2 tau) - q(tau)
double aklt_small_coupling_rate(double g, double tau);  // g^4 tau^3 / 8

}  // namespace collisim::reference
