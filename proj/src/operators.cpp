#include "collisim/operators.hpp"

#include <array>
#include <cmath>

#include "collisim/linalg.hpp"

namespace collisim::ops {

namespace {
const cplx kI(0.0, 1.0);
}

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, -kI}, {kI, 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

ComplexMatrix spin1_x() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{0.0, s, 0.0}, {s, 0.0, s}, {0.0, s, 0.0}};
}

ComplexMatrix spin1_y() {
  const cplx s = cplx(0.0, 1.0) / std::sqrt(2.0);
  return {{0.0, -s, 0.0}, {s, 0.0, -s}, {0.0, s, 0.0}};
}

ComplexMatrix spin1_z() { return {{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, -1.0}}; }

ComplexMatrix energy_exchange_generator() {
  // i(|01><10| - |10><01|) on (system, ancilla); |sa> index = 2s+a.
  ComplexMatrix h(4, 4);
  h(1, 2) = kI;
  h(2, 1) = -kI;
  return h;
}

ComplexMatrix pauli_projective_hamiltonian() {
  ComplexMatrix h(6, 6);
  const std::array<ComplexMatrix, 3> sig = {pauli_x(), pauli_y(), pauli_z()};
  for (std::size_t j = 0; j < 3; ++j) {
    ComplexMatrix proj(3, 3);
    proj(j, j) = 1.0;
    h += kron(sig[j], proj);
  }
  return h;
}

ComplexMatrix pauli_spin1_exchange_hamiltonian() {
  ComplexMatrix h = kron(pauli_x(), spin1_x());
  h += kron(pauli_y(), spin1_y());
  h += kron(pauli_z(), spin1_z());
  h *= cplx(0.5, 0.0);
  return h;
}

ComplexMatrix qubit_from_bloch(double x, double y, double z) {
  ComplexMatrix rho = ComplexMatrix::identity(2);
  rho += x * pauli_x();
  rho += y * pauli_y();
  rho += z * pauli_z();
  rho *= cplx(0.5, 0.0);
  return rho;
}

std::array<double, 3> bloch_vector(const ComplexMatrix& rho) {
  return {(rho * pauli_x()).trace().real(), (rho * pauli_y()).trace().real(),
          (rho * pauli_z()).trace().real()};
}

}  // namespace collisim::ops
