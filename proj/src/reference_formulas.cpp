#include "collisim/reference_formulas.hpp"

#include <cmath>

#include "collisim/linalg.hpp"
#include "collisim/operators.hpp"

namespace collisim::reference {

double w_chain_amplitude(std::size_t j, double g_tau) {
  return std::pow(std::cos(g_tau), double(j - 1)) * std::sin(g_tau);
}

double w_chain_terminal_amplitude(std::size_t n, double g_tau) {
  return std::pow(std::cos(g_tau), double(n));
}

double ghz_lambda_xy(std::size_t k, double g_tau) {
  const double theta = 1.5 * g_tau;
  const cplx base1 = 3.0 * (1.0 + 2.0 * std::exp(cplx(0.0, theta)));
  const cplx base2 = 3.0 * (1.0 + 2.0 * std::exp(cplx(0.0, -theta)));
  const double base3 = 5.0 + 4.0 * std::cos(theta);
  const cplx num = std::pow(base1, double(k)) + std::pow(base2, double(k)) +
                   std::pow(cplx(base3, 0.0), double(k));
  return num.real() / std::pow(3.0, double(2 * k + 1));
}

double ghz_lambda_z(std::size_t k, double g_tau) {
  const double theta = 1.5 * g_tau;
  const double base1 = 1.0 + 8.0 * std::cos(theta);
  const double base2 = 5.0 + 4.0 * std::cos(theta);
  return (std::pow(base1, double(k)) + 2.0 * std::pow(base2, double(k))) /
         std::pow(3.0, double(2 * k + 1));
}

Superoperator ghz_controlled_kernel(std::size_t m, double g_tau, double tau) {
  const ComplexMatrix sig[3] = {ops::pauli_x(), ops::pauli_y(), ops::pauli_z()};
  ComplexMatrix v[3];
  for (int j = 0; j < 3; ++j) v[j] = matrix_exp_skew(sig[j], g_tau);

  ComplexMatrix acc(4, 4);
  // Sum over the m+1 ancilla indices of the string i_{k-m+1}..i_{k+1} with
  // the product of (delta_{i_l, i_{l+1}} - 1/3) weights over adjacent pairs.
  std::vector<std::size_t> idx(m + 1, 0);
  while (true) {
    double w = 1.0;
    for (std::size_t l = 0; l + 1 <= m; ++l)
      w *= (idx[l] == idx[l + 1] ? 1.0 : 0.0) - 1.0 / 3.0;
    ComplexMatrix left = ComplexMatrix::identity(2);
    for (std::size_t l = m + 1; l-- > 0;) left = left * v[idx[l]];
    acc += cplx(w / (3.0 * tau), 0.0) * kron(left, left.conjugate());
    // Advance the mixed-radix counter.
    std::size_t pos = 0;
    while (pos <= m && ++idx[pos] == 3) idx[pos++] = 0;
    if (pos > m) break;
  }
  return Superoperator(2, 2, std::move(acc), "ghz-controlled-kernel");
}

ComplexMatrix aklt_pair_density(std::size_t m) {
  ComplexMatrix rho = cplx(1.0 / 9.0, 0.0) * ComplexMatrix::identity(9);
  const double coef = (1.0 / 3.0) * std::pow(-1.0 / 3.0, double(m));
  rho += cplx(coef, 0.0) * (kron(ops::spin1_x(), ops::spin1_x()) +
                            kron(ops::spin1_y(), ops::spin1_y()) +
                            kron(ops::spin1_z(), ops::spin1_z()));
  return rho;
}

ComplexMatrix aklt_transfer_matrix() {
  ComplexMatrix t(4, 4);
  t(0, 0) = 1.0 / 3.0;
  t(0, 3) = 2.0 / 3.0;
  t(1, 1) = -1.0 / 3.0;
  t(2, 2) = -1.0 / 3.0;
  t(3, 0) = 2.0 / 3.0;
  t(3, 3) = 1.0 / 3.0;
  return t;
}

namespace {

Superoperator dissipator(const ComplexMatrix& jump) {
  const std::size_t d = jump.rows();
  const ComplexMatrix id = ComplexMatrix::identity(d);
  const ComplexMatrix jj = jump.adjoint() * jump;
  Superoperator out = sandwich_superop(jump, jump.adjoint());
  out -= cplx(0.5, 0.0) * sandwich_superop(jj, id);
  out -= cplx(0.5, 0.0) * sandwich_superop(id, jj);
  return out;
}

}  // namespace

Superoperator aklt_projective_local_generator(double g, double tau) {
  const double rate = g * g * tau / 3.0;
  Superoperator gen = Superoperator::zero(2, 2, "depolarizer");
  gen += cplx(rate, 0.0) * dissipator(ops::pauli_x());
  gen += cplx(rate, 0.0) * dissipator(ops::pauli_y());
  gen += cplx(rate, 0.0) * dissipator(ops::pauli_z());
  return gen;
}

Superoperator aklt_projective_gksl_generator(double g, double tau) {
  Superoperator gen = aklt_projective_local_generator(g, tau);
  ComplexMatrix tilted = ops::pauli_x() - ops::pauli_z();
  tilted *= cplx(1.0 / std::sqrt(2.0), 0.0);
  gen += cplx(-g * g * tau / 3.0, 0.0) * dissipator(tilted);
  gen.meta = "gksl-reference";
  return gen;
}

double aklt_depolarization_q(std::size_t k, double g_tau) {
  const double theta = 1.5 * g_tau;
  const double x = 2.0 + 7.0 * std::cos(theta);
  const double y = 7.0 + 2.0 * std::cos(theta);
  const double z = 2.0 * std::sqrt(y * y + 27.0 * std::sin(theta) * std::sin(theta));
  return (0.5 + x / z) * std::pow((y + z) / 27.0, double(k)) +
         (0.5 - x / z) * std::pow((y - z) / 27.0, double(k));
}

double aklt_q_step_difference(double g_tau) {
  const double theta = 1.5 * g_tau;
  const double y = 7.0 + 2.0 * std::cos(theta);
  const double s = std::sin(0.75 * g_tau);
  return (32.0 * y / 729.0) * s * s;
}

double aklt_small_coupling_rate(double g, double tau) {
  return std::pow(g, 4) * std::pow(tau, 3) / 8.0;
}

}  // namespace collisim::reference
