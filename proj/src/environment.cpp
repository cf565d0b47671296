#include "collisim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collisim {

const MPDOSiteTensor& EnvironmentMPDO::site(std::size_t k) const {
  if (k == 0) throw std::invalid_argument("environment sites are 1-based");
  if (homogeneous) return site_tensors.front();
  if (k > site_tensors.size())
    throw std::invalid_argument("environment site index beyond bounded length");
  return site_tensors[k - 1];
}

std::size_t EnvironmentMPDO::physical_dim() const { return site_tensors.front().physical_dim; }

void EnvironmentMPDO::validate(const Tolerances& tols) const {
  if (site_tensors.empty()) throw std::invalid_argument("environment has no site tensors");
  chi0.validate(tols);
  if (homogeneous && site_tensors.size() != 1)
    throw std::invalid_argument("homogeneous environment must hold exactly one site tensor");
  if (!homogeneous && (!length || *length != site_tensors.size()))
    throw std::invalid_argument("bounded environment length mismatch");
  const std::size_t dbond = bond_dim();
  for (const MPDOSiteTensor& t : site_tensors) {
    t.validate();
    if (t.left_dim != dbond || t.right_dim != dbond)
      throw std::invalid_argument("environment site bond dims must equal dim(chi0)");
    if (t.right_normalization_deviation() > 1e-10)
      throw std::invalid_argument("environment site tensor violates right normalization");
  }
}

EnvironmentMPDO EnvironmentMPDO::factorized(std::vector<DensityMatrix> ancillas,
                                            double weight_floor) {
  if (ancillas.empty()) throw std::invalid_argument("factorized environment needs ancillas");
  EnvironmentMPDO env;
  env.chi0 = DensityMatrix(ComplexMatrix::identity(1));
  env.homogeneous = false;
  env.length = ancillas.size();
  for (const DensityMatrix& rho : ancillas) {
    const SpectralEnsemble ens = spectral_ensemble(rho, weight_floor);
    MPDOSiteTensor site;
    site.physical_dim = rho.dim();
    site.left_dim = site.right_dim = 1;
    site.kraus_count = ens.weights.size();
    site.slices.assign(site.physical_dim,
                       std::vector<ComplexMatrix>(site.kraus_count, ComplexMatrix(1, 1)));
    for (std::size_t b = 0; b < ens.weights.size(); ++b) {
      const double w = std::sqrt(ens.weights[b]);
      for (std::size_t i = 0; i < site.physical_dim; ++i)
        site.slices[i][b](0, 0) = w * ens.states[b][i];
    }
    env.site_tensors.push_back(std::move(site));
  }
  return env;
}

EnvironmentMPDO EnvironmentMPDO::homogeneous_factorized(const DensityMatrix& ancilla,
                                                        double weight_floor) {
  EnvironmentMPDO env = factorized({ancilla}, weight_floor);
  env.homogeneous = true;
  env.length.reset();
  return env;
}

EnvironmentMPDO EnvironmentMPDO::homogeneous_mps(DensityMatrix chi0,
                                                 std::vector<ComplexMatrix> a_slices) {
  if (a_slices.empty()) throw std::invalid_argument("homogeneous_mps: no slices");
  EnvironmentMPDO env;
  MPDOSiteTensor site;
  site.physical_dim = a_slices.size();
  site.left_dim = a_slices.front().rows();
  site.right_dim = a_slices.front().cols();
  site.kraus_count = 1;
  for (ComplexMatrix& a : a_slices) site.slices.push_back({std::move(a)});
  env.chi0 = std::move(chi0);
  env.site_tensors.push_back(std::move(site));
  env.homogeneous = true;
  return env;
}

EnvironmentMPDO EnvironmentMPDO::homogeneous_mpdo(DensityMatrix chi0, MPDOSiteTensor site) {
  EnvironmentMPDO env;
  env.chi0 = std::move(chi0);
  env.site_tensors.push_back(std::move(site));
  env.homogeneous = true;
  return env;
}

ComplexMatrix CollisionScenario::collision_unitary() const {
  if (unitary) return *unitary;
  if (!hamiltonian) throw std::invalid_argument("scenario has neither Hamiltonian nor unitary");
  return matrix_exp_skew(*hamiltonian, g * tau);
}

CollisionScenario CollisionScenario::with_g(double g_new) const {
  if (!hamiltonian)
    throw std::invalid_argument("coupling rescan requires a Hamiltonian scenario");
  CollisionScenario s = *this;
  s.g = g_new;
  s.unitary.reset();
  return s;
}

void CollisionScenario::validate(const Tolerances& tols) const {
  if (d_s == 0 || d == 0) throw std::invalid_argument("scenario dimensions must be positive");
  if (!hamiltonian && !unitary)
    throw std::invalid_argument("scenario needs an interaction (Hamiltonian or unitary)");
  if (hamiltonian) {
    if (hamiltonian->rows() != d_s * d || !hamiltonian->is_square())
      throw std::invalid_argument("Hamiltonian dimension must be d_s*d");
    if (hamiltonian->hermiticity_deviation() > tols.herm)
      throw std::invalid_argument("Hamiltonian not Hermitian within tol_herm");
    const SpectrumResult s = eig_hermitian(*hamiltonian, tols.herm);
    double norm = 0.0;
    for (const cplx& lam : s.eigenvalues) norm = std::max(norm, std::abs(lam.real()));
    if (norm > 1.0 + 1e-9)
      throw std::invalid_argument("Hamiltonian operator norm exceeds 1");
  }
  if (unitary) {
    if (unitary->rows() != d_s * d || !unitary->is_square())
      throw std::invalid_argument("unitary dimension must be d_s*d");
    if (unitary->unitarity_deviation() > tols.unitary)
      throw std::invalid_argument("interaction matrix not unitary within tol_unitary");
  }
  if (rho_s0.dim() != d_s) throw std::invalid_argument("initial state dimension mismatch");
  rho_s0.validate(tols);
  env.validate(tols);
  if (env.physical_dim() != d)
    throw std::invalid_argument("environment physical dimension mismatch");
  if (env.length && steps > *env.length)
    throw std::invalid_argument("steps exceed bounded environment length");
}

std::vector<DensityMatrix> chi_sequence(const EnvironmentMPDO& env, std::size_t k) {
  std::vector<DensityMatrix> chis;
  chis.reserve(k + 1);
  chis.push_back(env.chi0);
  for (std::size_t m = 1; m <= k; ++m) {
    const MPDOSiteTensor& site = env.site(m);
    ComplexMatrix next(env.bond_dim(), env.bond_dim());
    for (const auto& family : site.slices)
      for (const ComplexMatrix& b : family) {
        const ComplexMatrix bt = b.transpose();
        next += bt * chis.back().matrix * bt.adjoint();
      }
    chis.emplace_back(std::move(next));
  }
  return chis;
}

std::vector<ComplexMatrix> kraus_embedding(const EnvironmentMPDO& env, std::size_t site_idx,
                                           const ComplexMatrix& u) {
  const MPDOSiteTensor& site = env.site(site_idx);
  const std::size_t d = site.physical_dim;
  const std::size_t dbond = env.bond_dim();
  const std::size_t d_s = u.rows() / d;
  if (u.rows() != d_s * d || u.cols() != d_s * d)
    throw std::invalid_argument("kraus_embedding: unitary dimension mismatch");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(d * site.kraus_count);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t b = 0; b < site.kraus_count; ++b) {
      ComplexMatrix k(d_s * dbond, d_s * dbond);
      for (std::size_t i = 0; i < d; ++i) {
        // System block (I_S (x) <j|) U (I_S (x) |i>).
        ComplexMatrix ublock(d_s, d_s);
        for (std::size_t s = 0; s < d_s; ++s)
          for (std::size_t sp = 0; sp < d_s; ++sp) ublock(s, sp) = u(s * d + j, sp * d + i);
        k += kron(ublock, site.slices[i][b].transpose());
      }
      kraus.push_back(std::move(k));
    }
  }
  return kraus;
}

Trajectory evolve(const CollisionScenario& scenario, bool record_joint) {
  scenario.validate();
  const ComplexMatrix u = scenario.collision_unitary();
  const std::size_t d_s = scenario.d_s;
  const std::size_t dbond = scenario.env.bond_dim();

  Trajectory traj;
  traj.states.reserve(scenario.steps + 1);
  ComplexMatrix joint = kron(scenario.rho_s0.matrix, scenario.env.chi0.matrix);
  const std::vector<std::size_t> joint_dims = {d_s, dbond};

  auto record = [&](const ComplexMatrix& r) {
    traj.states.emplace_back(partial_trace(r, joint_dims, {0}));
    if (record_joint) traj.joint_states.emplace_back(r);
  };
  record(joint);

  std::vector<ComplexMatrix> kraus;
  for (std::size_t step = 1; step <= scenario.steps; ++step) {
    if (scenario.env.homogeneous) {
      if (kraus.empty()) kraus = kraus_embedding(scenario.env, 1, u);
    } else {
      kraus = kraus_embedding(scenario.env, step, u);
    }
    ComplexMatrix next(joint.rows(), joint.cols());
    for (const ComplexMatrix& k : kraus) next += k * joint * k.adjoint();
    joint = std::move(next);
    record(joint);
  }
  return traj;
}

namespace {

// Row vector over bond pairs carrying the left environment: l_(a,a') = chi_(a,a').
ComplexMatrix left_boundary(const DensityMatrix& chi) {
  const std::size_t dbond = chi.dim();
  ComplexMatrix l(1, dbond * dbond);
  for (std::size_t a = 0; a < dbond; ++a)
    for (std::size_t ap = 0; ap < dbond; ++ap) l(0, a * dbond + ap) = chi.matrix(a, ap);
  return l;
}

// Column closing the right edge by the normalization identity: vec(I).
ComplexMatrix right_closure(std::size_t dbond) {
  ComplexMatrix r(dbond * dbond, 1);
  for (std::size_t a = 0; a < dbond; ++a) r(a * dbond + a, 0) = 1.0;
  return r;
}

ComplexMatrix transfer_of_site(const MPDOSiteTensor& site) {
  ComplexMatrix t(site.left_dim * site.left_dim, site.right_dim * site.right_dim);
  for (std::size_t i = 0; i < site.physical_dim; ++i) t += m_tensor(site, i, i);
  return t;
}

}  // namespace

DensityMatrix reduced_site_density(const EnvironmentMPDO& env, std::size_t site_idx) {
  if (site_idx == 0) throw std::invalid_argument("reduced_site_density: sites are 1-based");
  const std::vector<DensityMatrix> chis = chi_sequence(env, site_idx - 1);
  const MPDOSiteTensor& site = env.site(site_idx);
  const ComplexMatrix l = left_boundary(chis.back());
  const ComplexMatrix r = right_closure(env.bond_dim());
  const std::size_t d = site.physical_dim;
  ComplexMatrix rho(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t ip = 0; ip < d; ++ip) rho(i, ip) = (l * m_tensor(site, i, ip) * r)(0, 0);
  return DensityMatrix(std::move(rho));
}

DensityMatrix reduced_two_site_density(const EnvironmentMPDO& env, std::size_t s1,
                                       std::size_t s2) {
  if (s1 == 0 || s1 >= s2) throw std::invalid_argument("reduced_two_site_density: need 1 <= s1 < s2");
  const std::vector<DensityMatrix> chis = chi_sequence(env, s1 - 1);
  const ComplexMatrix l = left_boundary(chis.back());
  const ComplexMatrix r = right_closure(env.bond_dim());
  // Transfer bridge between the two sites.
  ComplexMatrix bridge = ComplexMatrix::identity(env.bond_dim() * env.bond_dim());
  for (std::size_t s = s1 + 1; s < s2; ++s) bridge = bridge * transfer_of_site(env.site(s));
  const MPDOSiteTensor& t1 = env.site(s1);
  const MPDOSiteTensor& t2 = env.site(s2);
  const std::size_t d = t1.physical_dim;
  ComplexMatrix rho(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t ip = 0; ip < d; ++ip) {
      const ComplexMatrix left_part = l * m_tensor(t1, i, ip) * bridge;
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t jp = 0; jp < d; ++jp)
          rho(i * d + j, ip * d + jp) = (left_part * m_tensor(t2, j, jp) * r)(0, 0);
    }
  return DensityMatrix(std::move(rho));
}

DensityMatrix reduced_three_site_density(const EnvironmentMPDO& env, std::size_t s1,
                                         std::size_t s2, std::size_t s3) {
  if (s1 == 0 || s1 >= s2 || s2 >= s3)
    throw std::invalid_argument("reduced_three_site_density: need 1 <= s1 < s2 < s3");
  const std::vector<DensityMatrix> chis = chi_sequence(env, s1 - 1);
  const ComplexMatrix l = left_boundary(chis.back());
  const ComplexMatrix r = right_closure(env.bond_dim());
  ComplexMatrix bridge12 = ComplexMatrix::identity(env.bond_dim() * env.bond_dim());
  for (std::size_t s = s1 + 1; s < s2; ++s) bridge12 = bridge12 * transfer_of_site(env.site(s));
  ComplexMatrix bridge23 = ComplexMatrix::identity(env.bond_dim() * env.bond_dim());
  for (std::size_t s = s2 + 1; s < s3; ++s) bridge23 = bridge23 * transfer_of_site(env.site(s));
  const MPDOSiteTensor& t1 = env.site(s1);
  const MPDOSiteTensor& t2 = env.site(s2);
  const MPDOSiteTensor& t3 = env.site(s3);
  const std::size_t d = t1.physical_dim;
  ComplexMatrix rho(d * d * d, d * d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t ip = 0; ip < d; ++ip) {
      const ComplexMatrix part1 = l * m_tensor(t1, i, ip) * bridge12;
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t jp = 0; jp < d; ++jp) {
          const ComplexMatrix part2 = part1 * m_tensor(t2, j, jp) * bridge23;
          for (std::size_t k = 0; k < d; ++k)
            for (std::size_t kp = 0; kp < d; ++kp)
              rho((i * d + j) * d + k, (ip * d + jp) * d + kp) =
                  (part2 * m_tensor(t3, k, kp) * r)(0, 0);
        }
    }
  return DensityMatrix(std::move(rho));
}

ComplexMatrix transfer_matrix(const EnvironmentMPDO& env) {
  if (!env.homogeneous)
    throw std::invalid_argument("transfer_matrix: environment must be homogeneous");
  return transfer_of_site(env.site_tensors.front());
}

SpectrumResult correlation_spectrum(const EnvironmentMPDO& env) {
  return eig_general(transfer_matrix(env));
}

TransferSpectrumSummary summarize_transfer_spectrum(const EnvironmentMPDO& env, double unit_tol,
                                                    double group_tol) {
  const SpectrumResult spec = correlation_spectrum(env);
  TransferSpectrumSummary summary;
  std::vector<cplx> decaying;
  for (const cplx& lam : spec.eigenvalues) {
    if (std::abs(lam - cplx(1.0, 0.0)) < unit_tol)
      ++summary.unit_multiplicity;
    else
      decaying.push_back(lam);
  }
  // Group nearby eigenvalues; the representatives keep descending-|lambda|
  // order from the solver.
  for (const cplx& lam : decaying) {
    bool grouped = false;
    for (std::size_t g = 0; g < summary.decaying.size(); ++g) {
      if (std::abs(lam - summary.decaying[g]) < group_tol) {
        ++summary.multiplicities[g];
        grouped = true;
        break;
      }
    }
    if (!grouped) {
      summary.decaying.push_back(lam);
      summary.multiplicities.push_back(1);
    }
  }
  return summary;
}

}  // namespace collisim
