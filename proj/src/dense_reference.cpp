#include "collisim/dense_reference.hpp"

#include <cmath>
#include <stdexcept>

namespace collisim::dense {

namespace {

// Apply u on tensor factors (sys_pos, anc_pos) of a state vector with the
// given factor dims; u is indexed (sys, anc) with sys major.
void apply_pair_unitary(std::vector<cplx>& state, const std::vector<std::size_t>& dims,
                        std::size_t sys_pos, std::size_t anc_pos, const ComplexMatrix& u) {
  const std::size_t nfac = dims.size();
  std::vector<std::size_t> stride(nfac, 1);
  for (std::size_t f = nfac; f-- > 1;) stride[f - 1] = stride[f] * dims[f];
  const std::size_t ds = dims[sys_pos], da = dims[anc_pos];
  const std::size_t pair_dim = ds * da;
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;

  std::vector<cplx> buf(pair_dim);
  // Iterate over all assignments of the remaining factors.
  const std::size_t rest = total / pair_dim;
  std::vector<std::size_t> rest_factors;
  for (std::size_t f = 0; f < nfac; ++f)
    if (f != sys_pos && f != anc_pos) rest_factors.push_back(f);
  for (std::size_t r = 0; r < rest; ++r) {
    std::size_t base = 0, rr = r;
    for (std::size_t f = rest_factors.size(); f-- > 0;) {
      const std::size_t fac = rest_factors[f];
      base += (rr % dims[fac]) * stride[fac];
      rr /= dims[fac];
    }
    for (std::size_t s = 0; s < ds; ++s)
      for (std::size_t a = 0; a < da; ++a)
        buf[s * da + a] = state[base + s * stride[sys_pos] + a * stride[anc_pos]];
    for (std::size_t s = 0; s < ds; ++s)
      for (std::size_t a = 0; a < da; ++a) {
        cplx acc(0.0, 0.0);
        for (std::size_t p = 0; p < pair_dim; ++p) acc += u(s * da + a, p) * buf[p];
        state[base + s * stride[sys_pos] + a * stride[anc_pos]] = acc;
      }
  }
}

// rho -> U_pair rho U_pair^dag with u acting on factors (sys_pos, anc_pos).
void apply_pair_unitary_density(ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                                std::size_t sys_pos, std::size_t anc_pos,
                                const ComplexMatrix& u) {
  const std::size_t nfac = dims.size();
  std::vector<std::size_t> stride(nfac, 1);
  for (std::size_t f = nfac; f-- > 1;) stride[f - 1] = stride[f] * dims[f];
  const std::size_t ds = dims[sys_pos], da = dims[anc_pos];
  const std::size_t pair_dim = ds * da;
  const std::size_t total = rho.rows();
  const std::size_t rest = total / pair_dim;
  std::vector<std::size_t> rest_factors;
  for (std::size_t f = 0; f < nfac; ++f)
    if (f != sys_pos && f != anc_pos) rest_factors.push_back(f);

  std::vector<std::size_t> offsets(pair_dim);
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t a = 0; a < da; ++a)
      offsets[s * da + a] = s * stride[sys_pos] + a * stride[anc_pos];

  std::vector<cplx> buf(pair_dim);
  for (std::size_t r = 0; r < rest; ++r) {
    std::size_t base = 0, rr = r;
    for (std::size_t f = rest_factors.size(); f-- > 0;) {
      const std::size_t fac = rest_factors[f];
      base += (rr % dims[fac]) * stride[fac];
      rr /= dims[fac];
    }
    // Left multiplication on the row index.
    for (std::size_t col = 0; col < total; ++col) {
      for (std::size_t p = 0; p < pair_dim; ++p) buf[p] = rho(base + offsets[p], col);
      for (std::size_t p = 0; p < pair_dim; ++p) {
        cplx acc(0.0, 0.0);
        for (std::size_t q = 0; q < pair_dim; ++q) acc += u(p, q) * buf[q];
        rho(base + offsets[p], col) = acc;
      }
    }
  }
  for (std::size_t r = 0; r < rest; ++r) {
    std::size_t base = 0, rr = r;
    for (std::size_t f = rest_factors.size(); f-- > 0;) {
      const std::size_t fac = rest_factors[f];
      base += (rr % dims[fac]) * stride[fac];
      rr /= dims[fac];
    }
    // Right multiplication by u^dag on the column index.
    for (std::size_t row = 0; row < total; ++row) {
      for (std::size_t p = 0; p < pair_dim; ++p) buf[p] = rho(row, base + offsets[p]);
      for (std::size_t p = 0; p < pair_dim; ++p) {
        cplx acc(0.0, 0.0);
        for (std::size_t q = 0; q < pair_dim; ++q) acc += std::conj(u(p, q)) * buf[q];
        rho(row, base + offsets[p]) = acc;
      }
    }
  }
}

}  // namespace

std::vector<cplx> collision_statevector(const ComplexMatrix& u, const std::vector<cplx>& phi,
                                        const std::vector<std::vector<cplx>>& psis) {
  const std::size_t n = psis.size();
  // Factor order (ancilla 1, ..., ancilla n, system).
  std::vector<std::size_t> dims;
  for (const auto& psi : psis) dims.push_back(psi.size());
  dims.push_back(phi.size());
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;

  std::vector<cplx> state(total, cplx(0.0, 0.0));
  // Product state psi_1 (x) ... (x) psi_n (x) phi.
  for (std::size_t idx = 0; idx < total; ++idx) {
    cplx amp(1.0, 0.0);
    std::size_t rem = idx;
    for (std::size_t f = dims.size(); f-- > 0;) {
      const std::size_t component = rem % dims[f];
      rem /= dims[f];
      amp *= (f == n) ? phi[component] : psis[f][component];
    }
    state[idx] = amp;
  }
  for (std::size_t k = 0; k < n; ++k) apply_pair_unitary(state, dims, n, k, u);
  return state;
}

ComplexMatrix collision_density(const ComplexMatrix& u, const ComplexMatrix& rho_s,
                                const std::vector<ComplexMatrix>& rhos) {
  std::vector<std::size_t> dims;
  ComplexMatrix rho = ComplexMatrix::identity(1);
  for (const ComplexMatrix& r : rhos) {
    rho = kron(rho, r);
    dims.push_back(r.rows());
  }
  rho = kron(rho, rho_s);
  dims.push_back(rho_s.rows());
  const std::size_t n = rhos.size();
  for (std::size_t k = 0; k < n; ++k) apply_pair_unitary_density(rho, dims, n, k, u);
  return rho;
}

ComplexMatrix environment_density(const EnvironmentMPDO& env, std::size_t n) {
  if (n == 0) throw std::invalid_argument("environment_density: need n >= 1");
  if (env.length && n > *env.length)
    throw std::invalid_argument("environment_density: n beyond bounded length");
  const std::size_t d = env.physical_dim();
  const std::size_t dbond = env.bond_dim();
  std::size_t total = 1;
  for (std::size_t s = 0; s < n; ++s) total *= d;

  // rho(i, i') = chi0-weighted bond-pair row pushed through the M-tensor
  // chain, right edge closed by vec(I).
  std::vector<std::vector<ComplexMatrix>> ms(n);
  for (std::size_t s = 0; s < n; ++s) {
    ms[s].reserve(d * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t ip = 0; ip < d; ++ip) ms[s].push_back(m_tensor(env.site(s + 1), i, ip));
  }
  ComplexMatrix lhs(1, dbond * dbond);
  for (std::size_t a = 0; a < dbond; ++a)
    for (std::size_t ap = 0; ap < dbond; ++ap)
      lhs(0, a * dbond + ap) = env.chi0.matrix(a, ap);

  ComplexMatrix rho(total, total);
  std::vector<std::size_t> ket(n), bra(n);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rem = p;
    for (std::size_t s = n; s-- > 0;) {
      ket[s] = rem % d;
      rem /= d;
    }
    for (std::size_t q = 0; q < total; ++q) {
      rem = q;
      for (std::size_t s = n; s-- > 0;) {
        bra[s] = rem % d;
        rem /= d;
      }
      ComplexMatrix row = lhs;
      for (std::size_t s = 0; s < n; ++s) row = row * ms[s][ket[s] * d + bra[s]];
      cplx acc(0.0, 0.0);
      for (std::size_t a = 0; a < dbond; ++a) acc += row(0, a * dbond + a);
      rho(p, q) = acc;
    }
  }
  return rho;
}

std::vector<ComplexMatrix> scenario_trajectory(const CollisionScenario& scenario, std::size_t n) {
  if (scenario.steps > n)
    throw std::invalid_argument("scenario_trajectory: steps exceed the dense ancilla count");
  const ComplexMatrix u = scenario.collision_unitary();
  const std::size_t d = scenario.d, d_s = scenario.d_s;
  ComplexMatrix env_rho = environment_density(scenario.env, n);
  ComplexMatrix rho = kron(env_rho, scenario.rho_s0.matrix);
  std::vector<std::size_t> dims(n, d);
  dims.push_back(d_s);

  std::vector<ComplexMatrix> traj;
  std::set<std::size_t> keep_sys = {n};
  traj.push_back(partial_trace(rho, dims, keep_sys));
  for (std::size_t k = 0; k < scenario.steps; ++k) {
    apply_pair_unitary_density(rho, dims, n, k, u);
    traj.push_back(partial_trace(rho, dims, keep_sys));
  }
  return traj;
}

ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
  // Gram-Schmidt on columns gives a Haar-distributed unitary up to phases.
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      cplx overlap(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) overlap += std::conj(a(i, prev)) * a(i, c);
      for (std::size_t i = 0; i < n; ++i) a(i, c) -= overlap * a(i, prev);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(a(i, c));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) a(i, c) /= norm;
  }
  return a;
}

ComplexMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  ComplexMatrix rho = g * g.adjoint();
  rho *= cplx(1.0, 0.0) / rho.trace();
  return rho;
}

std::vector<cplx> random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> v(n);
  double norm = 0.0;
  for (cplx& x : v) {
    x = cplx(gauss(rng), gauss(rng));
    norm += std::norm(x);
  }
  norm = std::sqrt(norm);
  for (cplx& x : v) x /= norm;
  return v;
}

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = gauss(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v(gauss(rng), gauss(rng));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  return a;
}

}  // namespace collisim::dense
