#pragma once

#include <array>

#include "collisim/complex_matrix.hpp"

namespace collisim::ops {

// Qubit Pauli operators, basis (down, up) = (|0>, |1>).
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// Spin-1 generators in the basis (|1>, |2>, |3>).
ComplexMatrix spin1_x();
ComplexMatrix spin1_y();
ComplexMatrix spin1_z();

// Hermitian generator of the qubit energy-exchange unitary
// exp[g*tau(|01><10| - |10><01|)] = exp(-i g*tau H), index (system, ancilla).
ComplexMatrix energy_exchange_generator();

// H = sum_j sigma_j (x) |j><j| on qubit (x) qutrit (controlled-Pauli form).
ComplexMatrix pauli_projective_hamiltonian();

// H = (1/2) sum_j sigma_j (x) J_j on qubit (x) qutrit.
ComplexMatrix pauli_spin1_exchange_hamiltonian();

// (I + r . sigma)/2
ComplexMatrix qubit_from_bloch(double x, double y, double z);
// (<sx>, <sy>, <sz>)
std::array<double, 3> bloch_vector(const ComplexMatrix& rho);

}  // namespace collisim::ops
