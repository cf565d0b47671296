#include "collisim/memory_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "collisim/simd_kernels.hpp"

namespace collisim {

Superoperator projector_P(std::size_t d_s, const DensityMatrix& chi) {
  Superoperator p = lift_with_second(d_s, chi.matrix) * trace_out_second(d_s, chi.dim());
  p.meta = "P";
  return p;
}

Superoperator projector_Q(std::size_t d_s, const DensityMatrix& chi) {
  Superoperator q = Superoperator::identity(d_s * chi.dim()) - projector_P(d_s, chi);
  q.meta = "Q";
  return q;
}

ComplexMatrix project_P(const ComplexMatrix& joint, std::size_t d_s, const DensityMatrix& chi) {
  const std::size_t dbond = chi.dim();
  if (joint.rows() != d_s * dbond || !joint.is_square())
    throw std::invalid_argument("project_P: joint dimension mismatch");
  return kron(partial_trace(joint, {d_s, dbond}, {0}), chi.matrix);
}

ComplexMatrix project_Q(const ComplexMatrix& joint, std::size_t d_s, const DensityMatrix& chi) {
  return joint - project_P(joint, d_s, chi);
}

Superoperator embedding_superop(const CollisionScenario& scenario, std::size_t site) {
  const std::vector<ComplexMatrix> kraus =
      kraus_embedding(scenario.env, site, scenario.collision_unitary());
  Superoperator e = superop_from_kraus(kraus);
  e.meta = "E";
  return e;
}

Superoperator exact_kernel_term(const CollisionScenario& scenario, std::size_t k, std::size_t m) {
  if (m > k) throw std::invalid_argument("exact_kernel_term: need m <= k");
  if (scenario.env.length && k + 1 > *scenario.env.length)
    throw std::invalid_argument("exact_kernel_term: collision index beyond environment length");
  const std::size_t d_s = scenario.d_s;
  const double tau = scenario.tau;

  if (m == 0) {
    // Time-local term: (tr_{k+1}[U rho (x) rho_{k+1} U^dag] - rho)/tau.
    const DensityMatrix rho_next = reduced_site_density(scenario.env, k + 1);
    const ComplexMatrix u = scenario.collision_unitary();
    Superoperator term = trace_out_second(d_s, scenario.d) * sandwich_superop(u, u.adjoint()) *
                         lift_with_second(d_s, rho_next.matrix);
    term -= Superoperator::identity(d_s);
    term *= cplx(1.0 / tau, 0.0);
    term.meta = "K_k0";
    return term;
  }

  const std::vector<DensityMatrix> chis = chi_sequence(scenario.env, k);
  Superoperator acc =
      embedding_superop(scenario, k - m + 1) * lift_with_second(d_s, chis[k - m].matrix);
  for (std::size_t l = k - m + 1; l <= k; ++l)
    acc = embedding_superop(scenario, l + 1) * (projector_Q(d_s, chis[l]) * acc);
  acc = trace_out_second(d_s, scenario.env.bond_dim()) * acc;
  acc *= cplx(1.0 / tau, 0.0);
  acc.meta = "K_km";
  return acc;
}

DensityMatrix nz_reconstruct(const CollisionScenario& scenario, std::size_t k) {
  CollisionScenario upto = scenario;
  upto.steps = k;
  const Trajectory traj = evolve(upto);
  ComplexMatrix next = traj.states[k].matrix;
  for (std::size_t m = 0; m <= k; ++m) {
    const Superoperator kernel = exact_kernel_term(scenario, k, m);
    next += cplx(scenario.tau, 0.0) * kernel.apply(traj.states[k - m].matrix);
  }
  return DensityMatrix(std::move(next));
}

cplx CumulantTable::at2(std::size_t i1, std::size_t i1p, std::size_t i2, std::size_t i2p) const {
  const std::size_t d = phys_dim;
  return entries[((i1 * d + i1p) * d + i2) * d + i2p];
}

cplx CumulantTable::at3(std::size_t i1, std::size_t i1p, std::size_t i2, std::size_t i2p,
                        std::size_t i3, std::size_t i3p) const {
  const std::size_t d = phys_dim;
  return entries[((((i1 * d + i1p) * d + i2) * d + i2p) * d + i3) * d + i3p];
}

double CumulantTable::max_abs() const {
  double m = 0.0;
  for (const cplx& v : entries) m = std::max(m, std::abs(v));
  return m;
}

double CumulantTable::trace_contraction_deviation() const {
  const std::size_t d = phys_dim;
  double dev = 0.0;
  if (order == 2) {
    for (std::size_t i2 = 0; i2 < d; ++i2)
      for (std::size_t i2p = 0; i2p < d; ++i2p) {
        cplx s1(0.0, 0.0), s2(0.0, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
          s1 += at2(i, i, i2, i2p);
          s2 += at2(i2, i2p, i, i);
        }
        dev = std::max({dev, std::abs(s1), std::abs(s2)});
      }
  } else {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t ap = 0; ap < d; ++ap)
        for (std::size_t b = 0; b < d; ++b)
          for (std::size_t bp = 0; bp < d; ++bp) {
            cplx s1(0.0, 0.0), s3(0.0, 0.0);
            for (std::size_t i = 0; i < d; ++i) {
              s1 += at3(i, i, a, ap, b, bp);
              s3 += at3(a, ap, b, bp, i, i);
            }
            dev = std::max({dev, std::abs(s1), std::abs(s3)});
          }
  }
  return dev;
}

CumulantTable two_point_cumulant(const EnvironmentMPDO& env, std::size_t m) {
  if (m == 0) throw std::invalid_argument("two_point_cumulant: offset must be >= 1");
  const std::size_t d = env.physical_dim();
  const DensityMatrix pair = reduced_two_site_density(env, 1, 1 + m);
  const DensityMatrix r1 = reduced_site_density(env, 1);
  const DensityMatrix r2 = reduced_site_density(env, 1 + m);
  CumulantTable table;
  table.order = 2;
  table.phys_dim = d;
  table.gap1 = m;
  table.entries.assign(d * d * d * d, cplx(0.0, 0.0));
  for (std::size_t i1 = 0; i1 < d; ++i1)
    for (std::size_t i1p = 0; i1p < d; ++i1p)
      for (std::size_t i2 = 0; i2 < d; ++i2)
        for (std::size_t i2p = 0; i2p < d; ++i2p)
          table.entries[((i1 * d + i1p) * d + i2) * d + i2p] =
              pair.matrix(i1 * d + i2, i1p * d + i2p) -
              r1.matrix(i1, i1p) * r2.matrix(i2, i2p);
  return table;
}

CumulantTable three_point_cumulant(const EnvironmentMPDO& env, std::size_t gap1,
                                   std::size_t gap2) {
  if (gap1 == 0 || gap2 == 0)
    throw std::invalid_argument("three_point_cumulant: offsets must be >= 1");
  const std::size_t d = env.physical_dim();
  const std::size_t s2 = 1 + gap1, s3 = 1 + gap1 + gap2;
  const DensityMatrix triple = reduced_three_site_density(env, 1, s2, s3);
  const DensityMatrix pair12 = reduced_two_site_density(env, 1, s2);
  const DensityMatrix pair23 = reduced_two_site_density(env, s2, s3);
  const DensityMatrix r1 = reduced_site_density(env, 1);
  const DensityMatrix r2 = reduced_site_density(env, s2);
  const DensityMatrix r3 = reduced_site_density(env, s3);
  CumulantTable table;
  table.order = 3;
  table.phys_dim = d;
  table.gap1 = gap1;
  table.gap2 = gap2;
  table.entries.assign(d * d * d * d * d * d, cplx(0.0, 0.0));
  for (std::size_t i1 = 0; i1 < d; ++i1)
    for (std::size_t i1p = 0; i1p < d; ++i1p)
      for (std::size_t i2 = 0; i2 < d; ++i2)
        for (std::size_t i2p = 0; i2p < d; ++i2p)
          for (std::size_t i3 = 0; i3 < d; ++i3)
            for (std::size_t i3p = 0; i3p < d; ++i3p) {
              // Interval-partition (Waldenfelds) cumulant: the middle slot is
              // never factored out alone.
              const cplx c =
                  triple.matrix((i1 * d + i2) * d + i3, (i1p * d + i2p) * d + i3p) -
                  pair12.matrix(i1 * d + i2, i1p * d + i2p) * r3.matrix(i3, i3p) -
                  r1.matrix(i1, i1p) * pair23.matrix(i2 * d + i3, i2p * d + i3p) +
                  r1.matrix(i1, i1p) * r2.matrix(i2, i2p) * r3.matrix(i3, i3p);
              table.entries[((((i1 * d + i1p) * d + i2) * d + i2p) * d + i3) * d + i3p] = c;
            }
  return table;
}

Superoperator phi_term(const ComplexMatrix& h, std::size_t d_s, std::size_t d, int order,
                       std::size_t i, std::size_t i_prime) {
  if (h.rows() != d_s * d || !h.is_square())
    throw std::invalid_argument("phi_term: Hamiltonian dimension mismatch");
  if (order < 0) throw std::invalid_argument("phi_term: order must be >= 0");
  // Powers of H up to the requested order.
  std::vector<ComplexMatrix> hp{ComplexMatrix::identity(d_s * d)};
  for (int p = 1; p <= order; ++p) hp.push_back(hp.back() * h);

  auto block = [&](const ComplexMatrix& mat, std::size_t j, std::size_t jp) {
    ComplexMatrix blk(d_s, d_s);
    for (std::size_t s = 0; s < d_s; ++s)
      for (std::size_t sp = 0; sp < d_s; ++sp) blk(s, sp) = mat(s * d + j, sp * d + jp);
    return blk;
  };

  double fact[13];
  fact[0] = 1.0;
  for (int p = 1; p <= 12; ++p) fact[p] = fact[p - 1] * p;
  if (order > 12) throw std::invalid_argument("phi_term: order too large");

  Superoperator phi = Superoperator::zero(d_s, d_s, "Phi");
  const cplx iu(0.0, 1.0);
  for (int a = 0; a <= order; ++a) {
    const int b = order - a;
    const cplx coef = std::pow(-iu, a) * std::pow(iu, b) / (fact[a] * fact[b]);
    for (std::size_t j = 0; j < d; ++j) {
      // tr_anc picks (I (x) <j|) H^a (I (x) |i>) rho (I (x) <i'|) H^b (I (x) |j>).
      const ComplexMatrix left = block(hp[a], j, i);
      const ComplexMatrix right = block(hp[b], i_prime, j);
      phi += coef * sandwich_superop(left, right);
    }
  }
  return phi;
}

namespace {

// <i'|H|i> as a system operator.
ComplexMatrix hamiltonian_block(const ComplexMatrix& h, std::size_t d_s, std::size_t d,
                                std::size_t i, std::size_t i_prime) {
  ComplexMatrix blk(d_s, d_s);
  for (std::size_t s = 0; s < d_s; ++s)
    for (std::size_t sp = 0; sp < d_s; ++sp) blk(s, sp) = h(s * d + i_prime, sp * d + i);
  return blk;
}

ComplexMatrix ancilla_average(const ComplexMatrix& h, const DensityMatrix& rho1,
                              std::size_t d_s, std::size_t d) {
  ComplexMatrix avg(d_s, d_s);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t ip = 0; ip < d; ++ip) {
      const cplx w = rho1.matrix(i, ip);
      if (w == cplx(0.0, 0.0)) continue;
      avg += w * hamiltonian_block(h, d_s, d, i, ip);
    }
  return avg;
}

const ComplexMatrix& require_hamiltonian(const CollisionScenario& scenario) {
  if (!scenario.hamiltonian)
    throw std::invalid_argument("operation requires a Hamiltonian-specified scenario");
  return *scenario.hamiltonian;
}

}  // namespace

Superoperator kernel_order2(const CollisionScenario& scenario, std::size_t m) {
  const ComplexMatrix& h = require_hamiltonian(scenario);
  if (!scenario.env.homogeneous)
    throw std::invalid_argument("kernel_order2: homogeneous environment required");
  const std::size_t d_s = scenario.d_s, d = scenario.d;
  const CumulantTable c2 = two_point_cumulant(scenario.env, m);
  Superoperator k = Superoperator::zero(d_s, d_s, "K2");
  for (std::size_t i1 = 0; i1 < d; ++i1)
    for (std::size_t i1p = 0; i1p < d; ++i1p) {
      const Superoperator comm1 = commutator_superop(hamiltonian_block(h, d_s, d, i1, i1p));
      for (std::size_t i2 = 0; i2 < d; ++i2)
        for (std::size_t i2p = 0; i2p < d; ++i2p) {
          const cplx c = c2.at2(i1, i1p, i2, i2p);
          if (std::abs(c) < 1e-18) continue;
          const Superoperator comm2 = commutator_superop(hamiltonian_block(h, d_s, d, i2, i2p));
          k -= c * (comm2 * comm1);
        }
    }
  return k;
}

Superoperator kernel_order3(const CollisionScenario& scenario, std::size_t m) {
  const ComplexMatrix& h = require_hamiltonian(scenario);
  if (!scenario.env.homogeneous)
    throw std::invalid_argument("kernel_order3: homogeneous environment required");
  if (m == 0) throw std::invalid_argument("kernel_order3: m must be >= 1");
  const std::size_t d_s = scenario.d_s, d = scenario.d;

  std::vector<Superoperator> phi1(d * d), phi2(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t ip = 0; ip < d; ++ip) {
      phi1[i * d + ip] = phi_term(h, d_s, d, 1, i, ip);
      phi2[i * d + ip] = phi_term(h, d_s, d, 2, i, ip);
    }

  const CumulantTable c2 = two_point_cumulant(scenario.env, m);
  Superoperator k = Superoperator::zero(d_s, d_s, "K3");
  for (std::size_t i1 = 0; i1 < d; ++i1)
    for (std::size_t i1p = 0; i1p < d; ++i1p)
      for (std::size_t i2 = 0; i2 < d; ++i2)
        for (std::size_t i2p = 0; i2p < d; ++i2p) {
          const cplx c = c2.at2(i1, i1p, i2, i2p);
          if (std::abs(c) < 1e-18) continue;
          k += c * (phi1[i2 * d + i2p] * phi2[i1 * d + i1p] +
                    phi2[i2 * d + i2p] * phi1[i1 * d + i1p]);
        }

  // Interior sites carry first-order insertions weighted by the three-point
  // cumulant with gaps (a, m-a).
  for (std::size_t a = 1; a < m; ++a) {
    const CumulantTable c3 = three_point_cumulant(scenario.env, a, m - a);
    for (std::size_t i1 = 0; i1 < d; ++i1)
      for (std::size_t i1p = 0; i1p < d; ++i1p)
        for (std::size_t il = 0; il < d; ++il)
          for (std::size_t ilp = 0; ilp < d; ++ilp)
            for (std::size_t i2 = 0; i2 < d; ++i2)
              for (std::size_t i2p = 0; i2p < d; ++i2p) {
                const cplx c = c3.at3(i1, i1p, il, ilp, i2, i2p);
                if (std::abs(c) < 1e-18) continue;
                k += c * (phi1[i2 * d + i2p] * (phi1[il * d + ilp] * phi1[i1 * d + i1p]));
              }
  }
  return k;
}

OrderCheckReport perturbative_order_check(const CollisionScenario& scenario, std::size_t k,
                                          std::size_t m) {
  require_hamiltonian(scenario);
  if (m == 0) throw std::invalid_argument("perturbative_order_check: m must be >= 1");
  OrderCheckReport report;
  report.order0_norm = scenario.tau * exact_kernel_term(scenario.with_g(0.0), k, m).norm_max();

  const double gtau_grid[3] = {1e-2, 5e-3, 2.5e-3};
  for (double gt : gtau_grid) {
    const double g = gt / scenario.tau;
    report.couplings.push_back(g);
    report.norms.push_back(exact_kernel_term(scenario.with_g(g), k, m).norm_max());
  }
  report.vanishes = *std::max_element(report.norms.begin(), report.norms.end()) < 1e-13;
  if (report.vanishes) {
    report.fitted_exponent = 0.0;
    report.pass = report.order0_norm < 1e-12;
    return report;
  }
  // Log-log least squares for the g-exponent.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = 3.0;
  for (int p = 0; p < 3; ++p) {
    const double x = std::log(report.couplings[p]);
    const double y = std::log(report.norms[p]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  report.pass = report.order0_norm < 1e-12 && report.fitted_exponent >= 1.9 &&
                report.fitted_exponent <= 2.1;
  return report;
}

Superoperator local_generator(const CollisionScenario& scenario, bool require_commuting) {
  const ComplexMatrix& h = require_hamiltonian(scenario);
  const std::size_t d_s = scenario.d_s, d = scenario.d;
  const DensityMatrix rho1 = reduced_site_density(scenario.env, 1);

  if (require_commuting) {
    const ComplexMatrix havg = ancilla_average(h, rho1, d_s, d);
    const ComplexMatrix comm =
        havg * scenario.rho_s0.matrix - scenario.rho_s0.matrix * havg;
    if (comm.max_abs() > 1e-10)
      throw std::runtime_error(
          "local_generator: [<H>_anc, rho_S(0)] does not vanish; the Hamiltonian part cannot "
          "be removed");
  }

  Superoperator gen = Superoperator::zero(d_s, d_s, "L_local");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t ip = 0; ip < d; ++ip) {
      const cplx w = rho1.matrix(i, ip);
      if (std::abs(w) < 1e-18) continue;
      gen += w * phi_term(h, d_s, d, 2, i, ip);
    }
  gen *= cplx(scenario.g * scenario.g * scenario.tau, 0.0);
  gen.meta = "L_local";
  return gen;
}

namespace {

// Orthonormal Hermitian basis: identity/sqrt(d) first, then the traceless
// generalized Gell-Mann matrices.
std::vector<ComplexMatrix> hermitian_basis(std::size_t d) {
  std::vector<ComplexMatrix> basis;
  ComplexMatrix id = ComplexMatrix::identity(d);
  id *= cplx(1.0 / std::sqrt(double(d)), 0.0);
  basis.push_back(std::move(id));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      ComplexMatrix x(d, d), y(d, d);
      x(j, k) = inv_sqrt2;
      x(k, j) = inv_sqrt2;
      y(j, k) = cplx(0.0, -inv_sqrt2);
      y(k, j) = cplx(0.0, inv_sqrt2);
      basis.push_back(std::move(x));
      basis.push_back(std::move(y));
    }
  for (std::size_t l = 1; l < d; ++l) {
    ComplexMatrix z(d, d);
    const double norm = 1.0 / std::sqrt(double(l * (l + 1)));
    for (std::size_t m2 = 0; m2 < l; ++m2) z(m2, m2) = norm;
    z(l, l) = -double(l) * norm;
    basis.push_back(std::move(z));
  }
  return basis;
}

}  // namespace

KossakowskiReport kossakowski_analysis(const Superoperator& gen, double psd_tol) {
  if (gen.dim_in != gen.dim_out)
    throw std::invalid_argument("kossakowski_analysis: generator must be square");
  const std::size_t d = gen.dim_in;
  const std::vector<ComplexMatrix> basis = hermitian_basis(d);
  const std::size_t nb = basis.size();  // d^2

  // Expansion gen[rho] = sum_{ab} c_ab G_a rho G_b over the orthonormal basis
  // {G_a (x) conj(G_b)} of superoperator space.
  ComplexMatrix coeff(nb, nb);
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      const ComplexMatrix gb = kron(basis[a], basis[b].conjugate());
      cplx acc(0.0, 0.0);
      for (std::size_t u = 0; u < gb.rows(); ++u)
        for (std::size_t v = 0; v < gb.cols(); ++v)
          acc += std::conj(gb(u, v)) * gen.matrix(u, v);
      coeff(a, b) = acc;
    }

  KossakowskiReport report;
  // F collects the alpha=0 / beta=0 parts; its anti-Hermitian half is the
  // Hamiltonian.
  ComplexMatrix f(d, d);
  const double sqrt_d = std::sqrt(double(d));
  for (std::size_t a = 1; a < nb; ++a) f += (coeff(a, 0) / sqrt_d) * basis[a];
  f += (coeff(0, 0) / (2.0 * double(d))) * ComplexMatrix::identity(d);
  ComplexMatrix ham = cplx(0.0, 0.5) * (f - f.adjoint());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      ham(i, j) = 0.5 * (ham(i, j) + std::conj(ham(j, i)));
  report.hamiltonian = ham;

  ComplexMatrix kmat(nb - 1, nb - 1);
  for (std::size_t a = 1; a < nb; ++a)
    for (std::size_t b = 1; b < nb; ++b)
      kmat(a - 1, b - 1) = 0.5 * (coeff(a, b) + std::conj(coeff(b, a)));
  report.kossakowski = kmat;

  const SpectrumResult spec = eig_hermitian(kmat, 1e-8);
  const double scale = std::max(1.0, kmat.max_abs());
  for (std::size_t r = spec.eigenvalues.size(); r-- > 0;) {
    report.rates.push_back(spec.eigenvalues[r].real());
    ComplexMatrix jump(d, d);
    for (std::size_t a = 0; a + 1 < nb; ++a)
      jump += spec.eigenvectors(a, r) * basis[a + 1];
    report.jump_operators.push_back(std::move(jump));
  }
  report.min_rate = report.rates.empty() ? 0.0 : report.rates.back();
  report.gksl_valid = report.min_rate >= -psd_tol * scale;

  // Rebuild the generator from (H, K) and record the residual; a large value
  // flags a generator outside the trace-annihilating Hermiticity-preserving
  // class this decomposition assumes.
  Superoperator rebuilt = cplx(0.0, -1.0) * commutator_superop(ham);
  const ComplexMatrix id = ComplexMatrix::identity(d);
  for (std::size_t a = 1; a < nb; ++a)
    for (std::size_t b = 1; b < nb; ++b) {
      const cplx c = kmat(a - 1, b - 1);
      if (std::abs(c) < 1e-18) continue;
      const ComplexMatrix gbga = basis[b] * basis[a];
      Superoperator diss = sandwich_superop(basis[a], basis[b]);
      diss -= cplx(0.5, 0.0) * sandwich_superop(gbga, id);
      diss -= cplx(0.5, 0.0) * sandwich_superop(id, gbga);
      rebuilt += c * diss;
    }
  report.reconstruction_error = rebuilt.matrix.max_abs_diff(gen.matrix);
  return report;
}

namespace {

// Solve K_m = sum_j lambda_j^m L_j for the maps L_j, m = 1..J, entrywise
// (complex Vandermonde system).
std::vector<Superoperator> vandermonde_maps(const std::vector<cplx>& lambdas,
                                            const std::vector<Superoperator>& k_terms) {
  const std::size_t j = lambdas.size();
  ComplexMatrix v(j, j);
  for (std::size_t m = 0; m < j; ++m)
    for (std::size_t c = 0; c < j; ++c) v(m, c) = std::pow(lambdas[c], double(m + 1));
  const std::size_t entries = k_terms.front().matrix.size();
  ComplexMatrix rhs(j, entries);
  for (std::size_t m = 0; m < j; ++m)
    for (std::size_t e = 0; e < entries; ++e) rhs(m, e) = k_terms[m].matrix.data()[e];
  const ComplexMatrix sol = solve_linear(v, rhs);
  std::vector<Superoperator> maps;
  const std::size_t d = k_terms.front().dim_in;
  for (std::size_t c = 0; c < j; ++c) {
    ComplexMatrix m(d * d, d * d);
    for (std::size_t e = 0; e < entries; ++e) m.data()[e] = sol(c, e);
    maps.emplace_back(d, d, std::move(m), "L_nonlocal");
  }
  return maps;
}

}  // namespace

StroboscopicGenerator stroboscopic_generator(const CollisionScenario& scenario, int order) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("stroboscopic_generator: order must be 1 or 2");
  require_hamiltonian(scenario);
  if (!scenario.env.homogeneous)
    throw std::invalid_argument("stroboscopic_generator: homogeneous environment required");

  const TransferSpectrumSummary spectrum = summarize_transfer_spectrum(scenario.env);
  if (spectrum.unit_multiplicity != 1)
    throw std::runtime_error(
        "stroboscopic_generator: infinite correlation length (degenerate unit transfer "
        "eigenvalue)");

  StroboscopicGenerator gen;
  gen.order = order;
  gen.local = local_generator(scenario, /*require_commuting=*/true);

  // Distinct decaying eigenvalues; lambda = 0 modes contribute nothing for
  // m >= 1 and would make the Vandermonde singular.
  std::vector<cplx> lambdas;
  for (const cplx& lam : spectrum.decaying)
    if (std::abs(lam) > 1e-12) lambdas.push_back(lam);

  const double g2t = scenario.g * scenario.g * scenario.tau;
  gen.effective = gen.local;

  const std::size_t j = lambdas.size();
  std::vector<Superoperator> k_terms;
  for (std::size_t m = 1; m <= j + 2; ++m) k_terms.push_back(kernel_order2(scenario, m));
  if (j > 0) {
    std::vector<Superoperator> head(k_terms.begin(), k_terms.begin() + j);
    const std::vector<Superoperator> maps = vandermonde_maps(lambdas, head);
    for (std::size_t c = 0; c < j; ++c) {
      gen.nonlocal_terms.emplace_back(lambdas[c], maps[c]);
      const cplx weight = lambdas[c] / (cplx(1.0, 0.0) - lambdas[c]);
      gen.effective += (cplx(g2t, 0.0) * weight) * maps[c];
    }
    // Fit residual at the two held-out offsets.
    for (std::size_t m = j + 1; m <= j + 2; ++m) {
      Superoperator predicted = Superoperator::zero(scenario.d_s, scenario.d_s);
      for (std::size_t c = 0; c < j; ++c)
        predicted += std::pow(lambdas[c], double(m)) * maps[c];
      gen.fit_residual =
          std::max(gen.fit_residual, predicted.matrix.max_abs_diff(k_terms[m - 1].matrix));
    }
  } else {
    for (const Superoperator& k : k_terms)
      gen.fit_residual = std::max(gen.fit_residual, k.norm_max());
  }

  if (order == 2) {
    const ComplexMatrix& h = *scenario.hamiltonian;
    const std::size_t d_s = scenario.d_s, d = scenario.d;
    const double g3t2 = std::pow(scenario.g, 3) * scenario.tau * scenario.tau;
    // Local third-order coefficient.
    const DensityMatrix rho1 = reduced_site_density(scenario.env, 1);
    Superoperator local3 = Superoperator::zero(d_s, d_s, "L_local3");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t ip = 0; ip < d; ++ip) {
        const cplx w = rho1.matrix(i, ip);
        if (std::abs(w) < 1e-18) continue;
        local3 += w * phi_term(h, d_s, d, 3, i, ip);
      }
    gen.effective += cplx(g3t2, 0.0) * local3;

    if (j > 0) {
      // Two-point part of the third-order kernel, resummed like the order-1
      // nonlocal terms.
      std::vector<Superoperator> phi1(d * d), phi2(d * d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t ip = 0; ip < d; ++ip) {
          phi1[i * d + ip] = phi_term(h, d_s, d, 1, i, ip);
          phi2[i * d + ip] = phi_term(h, d_s, d, 2, i, ip);
        }
      auto mixed_term = [&](std::size_t m) {
        const CumulantTable c2 = two_point_cumulant(scenario.env, m);
        Superoperator acc = Superoperator::zero(d_s, d_s);
        for (std::size_t i1 = 0; i1 < d; ++i1)
          for (std::size_t i1p = 0; i1p < d; ++i1p)
            for (std::size_t i2 = 0; i2 < d; ++i2)
              for (std::size_t i2p = 0; i2p < d; ++i2p) {
                const cplx c = c2.at2(i1, i1p, i2, i2p);
                if (std::abs(c) < 1e-18) continue;
                acc += c * (phi1[i2 * d + i2p] * phi2[i1 * d + i1p] +
                            phi2[i2 * d + i2p] * phi1[i1 * d + i1p]);
              }
        return acc;
      };
      std::vector<Superoperator> mixed;
      for (std::size_t m = 1; m <= j; ++m) mixed.push_back(mixed_term(m));
      const std::vector<Superoperator> mixed_maps = vandermonde_maps(lambdas, mixed);
      for (std::size_t c = 0; c < j; ++c) {
        const cplx weight = lambdas[c] / (cplx(1.0, 0.0) - lambdas[c]);
        gen.effective += (cplx(g3t2, 0.0) * weight) * mixed_maps[c];
      }

      // Three-point part: decompose B(a,b) = sum_{jj'} lambda_j^a lambda_j'^b
      // D_{jj'} on the grid (a,b) in [1..J]^2 and resum both indices.
      auto triple_term = [&](std::size_t a, std::size_t b) {
        const CumulantTable c3 = three_point_cumulant(scenario.env, a, b);
        Superoperator acc = Superoperator::zero(d_s, d_s);
        for (std::size_t i1 = 0; i1 < d; ++i1)
          for (std::size_t i1p = 0; i1p < d; ++i1p)
            for (std::size_t il = 0; il < d; ++il)
              for (std::size_t ilp = 0; ilp < d; ++ilp)
                for (std::size_t i2 = 0; i2 < d; ++i2)
                  for (std::size_t i2p = 0; i2p < d; ++i2p) {
                    const cplx c = c3.at3(i1, i1p, il, ilp, i2, i2p);
                    if (std::abs(c) < 1e-18) continue;
                    acc += c * (phi1[i2 * d + i2p] *
                                (phi1[il * d + ilp] * phi1[i1 * d + i1p]));
                  }
        return acc;
      };
      // Kronecker-structured Vandermonde: solve sequentially in each index.
      std::vector<std::vector<Superoperator>> grid(j, std::vector<Superoperator>());
      for (std::size_t a = 1; a <= j; ++a) {
        std::vector<Superoperator> row;
        for (std::size_t b = 1; b <= j; ++b) row.push_back(triple_term(a, b));
        // Solve over b for fixed a.
        grid[a - 1] = vandermonde_maps(lambdas, row);
      }
      for (std::size_t c2i = 0; c2i < j; ++c2i) {
        std::vector<Superoperator> col;
        for (std::size_t a = 0; a < j; ++a) col.push_back(grid[a][c2i]);
        const std::vector<Superoperator> solved = vandermonde_maps(lambdas, col);
        for (std::size_t c1i = 0; c1i < j; ++c1i) {
          const cplx w1 = lambdas[c1i] / (cplx(1.0, 0.0) - lambdas[c1i]);
          const cplx w2 = lambdas[c2i] / (cplx(1.0, 0.0) - lambdas[c2i]);
          gen.effective += (cplx(g3t2, 0.0) * w1 * w2) * solved[c1i];
        }
      }
    }
  }

  gen.effective.meta = order == 1 ? "strobo1" : "strobo2";
  gen.kossakowski = kossakowski_analysis(gen.effective);
  return gen;
}

Trajectory integrate_generator(const Superoperator& gen, const DensityMatrix& rho0,
                               std::span<const double> t_grid, std::size_t substeps) {
  if (gen.dim_in != gen.dim_out)
    throw std::invalid_argument("integrate_generator: generator must be square");
  if (rho0.dim() != gen.dim_in)
    throw std::invalid_argument("integrate_generator: state dimension mismatch");
  if (t_grid.empty()) throw std::invalid_argument("integrate_generator: empty time grid");
  if (substeps == 0) substeps = 1;

  Trajectory traj;
  ComplexMatrix v = vectorize(rho0.matrix);
  traj.states.push_back(rho0);
  for (std::size_t p = 1; p < t_grid.size(); ++p) {
    const double dt = (t_grid[p] - t_grid[p - 1]) / double(substeps);
    if (dt < 0) throw std::invalid_argument("integrate_generator: time grid must be ascending");
    for (std::size_t s = 0; s < substeps; ++s) {
      const ComplexMatrix k1 = gen.matrix * v;
      ComplexMatrix v2 = v;
      kernels::axpy(cplx(0.5 * dt, 0.0), k1.data(), v2.data(), v2.size());
      const ComplexMatrix k2 = gen.matrix * v2;
      ComplexMatrix v3 = v;
      kernels::axpy(cplx(0.5 * dt, 0.0), k2.data(), v3.data(), v3.size());
      const ComplexMatrix k3 = gen.matrix * v3;
      ComplexMatrix v4 = v;
      kernels::axpy(cplx(dt, 0.0), k3.data(), v4.data(), v4.size());
      const ComplexMatrix k4 = gen.matrix * v4;
      kernels::axpy(cplx(dt / 6.0, 0.0), k1.data(), v.data(), v.size());
      kernels::axpy(cplx(dt / 3.0, 0.0), k2.data(), v.data(), v.size());
      kernels::axpy(cplx(dt / 3.0, 0.0), k3.data(), v.data(), v.size());
      kernels::axpy(cplx(dt / 6.0, 0.0), k4.data(), v.data(), v.size());
    }
    if (v.max_abs() > 1e6)
      throw std::runtime_error("integrate_generator: step instability (norm blow-up)");
    traj.states.emplace_back(devectorize(v, gen.dim_in, gen.dim_in));
  }
  return traj;
}

}  // namespace collisim
