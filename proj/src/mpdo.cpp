#include "collisim/mpdo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "collisim/simd_kernels.hpp"

namespace collisim {

void MPDOSiteTensor::validate() const {
  if (slices.size() != physical_dim)
    throw std::invalid_argument("MPDOSiteTensor: physical slice count mismatch");
  for (const auto& family : slices) {
    if (family.size() != kraus_count)
      throw std::invalid_argument("MPDOSiteTensor: Kraus slice count mismatch");
    for (const ComplexMatrix& b : family)
      if (b.rows() != left_dim || b.cols() != right_dim)
        throw std::invalid_argument("MPDOSiteTensor: inconsistent slice shape");
  }
}

double MPDOSiteTensor::right_normalization_deviation() const {
  ComplexMatrix acc(left_dim, left_dim);
  for (const auto& family : slices)
    for (const ComplexMatrix& b : family) acc += b * b.adjoint();
  for (std::size_t i = 0; i < left_dim; ++i) acc(i, i) -= 1.0;
  return acc.max_abs();
}

void MPDOChain::validate() const {
  if (sites.empty()) throw std::invalid_argument("MPDOChain: empty chain");
  for (const MPDOSiteTensor& s : sites) s.validate();
  if (sites.front().left_dim != 1 || sites.back().right_dim != 1)
    throw std::invalid_argument("MPDOChain: boundary bond dims must be 1");
  for (std::size_t k = 0; k + 1 < sites.size(); ++k)
    if (sites[k].right_dim != sites[k + 1].left_dim)
      throw std::invalid_argument("MPDOChain: adjacent bond dims mismatch");
}

std::size_t MPDOChain::parameter_count() const {
  std::size_t total = 0;
  for (const MPDOSiteTensor& s : sites)
    total += s.physical_dim * s.kraus_count * s.left_dim * s.right_dim;
  return total;
}

SpectralEnsemble spectral_ensemble(const DensityMatrix& rho, double weight_floor) {
  const SpectrumResult spec = eig_hermitian(rho.matrix);
  const std::size_t n = rho.dim();
  SpectralEnsemble ens;
  // Descending order; drop zero-weight members.
  for (std::size_t k = n; k-- > 0;) {
    const double lam = spec.eigenvalues[k].real();
    if (lam < weight_floor) continue;
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = spec.eigenvectors(i, k);
    // Phase convention: largest-magnitude component real positive.
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(v[i]) > best) best = std::abs(v[i]), arg = i;
    if (best > 0.0) {
      const cplx phase = std::conj(v[arg]) / best;
      for (cplx& x : v) x *= phase;
    }
    ens.weights.push_back(lam);
    ens.states.push_back(std::move(v));
  }
  return ens;
}

MPDOChain build_standard_mpdo(const ComplexMatrix& u, const DensityMatrix& rho_s,
                              std::span<const DensityMatrix> rhos, const Tolerances& tols,
                              double weight_floor) {
  std::vector<ComplexMatrix> us(rhos.size(), u);
  return build_standard_mpdo(std::span<const ComplexMatrix>(us), rho_s, rhos, tols, weight_floor);
}

MPDOChain build_standard_mpdo(std::span<const ComplexMatrix> us, const DensityMatrix& rho_s,
                              std::span<const DensityMatrix> rhos, const Tolerances& tols,
                              double weight_floor) {
  const std::size_t n = rhos.size();
  if (n == 0) throw std::invalid_argument("build_standard_mpdo: no ancillas");
  if (us.size() != n) throw std::invalid_argument("build_standard_mpdo: unitary count mismatch");
  rho_s.validate(tols);
  const std::size_t d_s = rho_s.dim();
  const std::size_t d = rhos.front().dim();
  for (const DensityMatrix& r : rhos) {
    if (r.dim() != d) throw std::invalid_argument("build_standard_mpdo: ancilla dims differ");
    r.validate(tols);
  }
  for (const ComplexMatrix& u : us) {
    if (u.rows() != d_s * d || u.cols() != d_s * d)
      throw std::invalid_argument("build_standard_mpdo: unitary has wrong dimension");
    if (u.unitarity_deviation() > tols.unitary)
      throw std::invalid_argument("build_standard_mpdo: interaction not unitary within tolerance");
  }

  const SpectralEnsemble sys = spectral_ensemble(rho_s, weight_floor);

  MPDOChain chain;
  chain.sites.reserve(n + 1);

  // Site 1, Kraus index b = (l, m) over system and first-ancilla ensembles:
  // B_{lm}^{i}(0, a) = sqrt(w_l v_m) <a| (x) <i| U |phi_l> (x) |psi_m>.
  {
    const SpectralEnsemble anc = spectral_ensemble(rhos[0], weight_floor);
    MPDOSiteTensor site;
    site.physical_dim = d;
    site.left_dim = 1;
    site.right_dim = d_s;
    site.kraus_count = sys.weights.size() * anc.weights.size();
    site.slices.assign(d, std::vector<ComplexMatrix>(site.kraus_count, ComplexMatrix(1, d_s)));
    for (std::size_t l = 0; l < sys.weights.size(); ++l)
      for (std::size_t m = 0; m < anc.weights.size(); ++m) {
        const double w = std::sqrt(sys.weights[l] * anc.weights[m]);
        const std::size_t b = l * anc.weights.size() + m;
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t a = 0; a < d_s; ++a) {
            cplx acc(0.0, 0.0);
            for (std::size_t s = 0; s < d_s; ++s)
              for (std::size_t v = 0; v < d; ++v)
                acc += us[0](a * d + i, s * d + v) * sys.states[l][s] * anc.states[m][v];
            site.slices[i][b](0, a) = w * acc;
          }
      }
    chain.sites.push_back(std::move(site));
  }

  // Sites 2..n, Kraus index b = m over the ancilla ensemble:
  // B_m^{i}(a', a) = sqrt(v_m) <a| (x) <i| U |a'> (x) |psi_m>.
  for (std::size_t k = 1; k < n; ++k) {
    const SpectralEnsemble anc = spectral_ensemble(rhos[k], weight_floor);
    MPDOSiteTensor site;
    site.physical_dim = d;
    site.left_dim = d_s;
    site.right_dim = d_s;
    site.kraus_count = anc.weights.size();
    site.slices.assign(d, std::vector<ComplexMatrix>(site.kraus_count, ComplexMatrix(d_s, d_s)));
    for (std::size_t m = 0; m < anc.weights.size(); ++m) {
      const double w = std::sqrt(anc.weights[m]);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t ap = 0; ap < d_s; ++ap)
          for (std::size_t a = 0; a < d_s; ++a) {
            cplx acc(0.0, 0.0);
            for (std::size_t v = 0; v < d; ++v)
              acc += us[k](a * d + i, ap * d + v) * anc.states[m][v];
            site.slices[i][m](ap, a) = w * acc;
          }
    }
    chain.sites.push_back(std::move(site));
  }

  // Terminal system site: single Kraus slice, B^{i}(a, 0) = delta_{a,i}.
  {
    MPDOSiteTensor site;
    site.physical_dim = d_s;
    site.left_dim = d_s;
    site.right_dim = 1;
    site.kraus_count = 1;
    site.slices.assign(d_s, std::vector<ComplexMatrix>(1, ComplexMatrix(d_s, 1)));
    for (std::size_t i = 0; i < d_s; ++i) site.slices[i][0](i, 0) = 1.0;
    chain.sites.push_back(std::move(site));
  }

  chain.validate();
  return chain;
}

ComplexMatrix m_tensor(const MPDOSiteTensor& site, std::size_t i, std::size_t i_prime) {
  if (i >= site.physical_dim || i_prime >= site.physical_dim)
    throw std::invalid_argument("m_tensor: physical index out of range");
  ComplexMatrix m(site.left_dim * site.left_dim, site.right_dim * site.right_dim);
  for (std::size_t b = 0; b < site.kraus_count; ++b)
    m += kron(site.slices[i][b], site.slices[i_prime][b].conjugate());
  return m;
}

namespace {

// Left-to-right expansion of the M-tensor rows over (ket prefix, bra prefix)
// pairs, up to site `upto` (exclusive). Flat storage: row (p, q) of width
// right_dim^2 starts at (p*dim + q)*stride.
struct MRows {
  std::size_t dim = 1;     // ket prefix count
  std::size_t width = 1;   // bond-pair width of each row
  std::vector<cplx> data;  // dim^2 rows
};

MRows expand_m_rows(const MPDOChain& chain, std::size_t upto, std::size_t dim_cap) {
  MRows rows;
  rows.data.assign(1, cplx(1.0, 0.0));
  for (std::size_t s = 0; s < upto; ++s) {
    const MPDOSiteTensor& site = chain.sites[s];
    const std::size_t d = site.physical_dim;
    if (rows.dim > dim_cap / d)
      throw std::invalid_argument("mpdo contraction: dimension exceeds cap");
    std::vector<ComplexMatrix> ms(d * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t ip = 0; ip < d; ++ip) ms[i * d + ip] = m_tensor(site, i, ip);
    const std::size_t prev = rows.dim;
    const std::size_t win = rows.width;
    const std::size_t wout = site.right_dim * site.right_dim;
    std::vector<cplx> next(prev * d * prev * d * wout, cplx(0.0, 0.0));
    for (std::size_t p = 0; p < prev; ++p)
      for (std::size_t q = 0; q < prev; ++q) {
        const cplx* row = rows.data.data() + (p * prev + q) * win;
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t ip = 0; ip < d; ++ip) {
            cplx* out = next.data() + ((p * d + i) * (prev * d) + (q * d + ip)) * wout;
            kernels::matmul_acc(row, ms[i * d + ip].data(), out, 1, win, wout);
          }
      }
    rows.data = std::move(next);
    rows.dim = prev * d;
    rows.width = wout;
  }
  return rows;
}

}  // namespace

DensityMatrix contract_density(const MPDOChain& chain, std::size_t dim_cap) {
  const MRows rows = expand_m_rows(chain, chain.length(), dim_cap);
  const std::size_t dim = rows.dim;
  ComplexMatrix rho(dim, dim);
  for (std::size_t p = 0; p < dim; ++p)
    for (std::size_t q = 0; q < dim; ++q) rho(p, q) = rows.data[(p * dim + q) * rows.width];
  return DensityMatrix(std::move(rho));
}

NormalizationReport check_right_normalization_mpdo(const MPDOChain& chain, double tol) {
  NormalizationReport report;
  report.per_site_deviation.reserve(chain.length());
  for (const MPDOSiteTensor& site : chain.sites) {
    const double dev = site.right_normalization_deviation();
    report.per_site_deviation.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

DensityMatrix reduced_density_first_k_mpdo(const MPDOChain& chain, std::size_t k,
                                           std::size_t dim_cap) {
  if (k == 0 || k > chain.length())
    throw std::invalid_argument("reduced_density_first_k_mpdo: cut out of range");
  const MRows rows = expand_m_rows(chain, k, dim_cap);
  const std::size_t dim = rows.dim;
  const std::size_t bond = chain.sites[k - 1].right_dim;
  ComplexMatrix rho(dim, dim);
  for (std::size_t p = 0; p < dim; ++p)
    for (std::size_t q = 0; q < dim; ++q) {
      // Right closure by the normalization identity: contract with vec(I).
      const cplx* row = rows.data.data() + (p * dim + q) * rows.width;
      cplx acc(0.0, 0.0);
      for (std::size_t a = 0; a < bond; ++a) acc += row[a * bond + a];
      rho(p, q) = acc;
    }
  return DensityMatrix(std::move(rho));
}

}  // namespace collisim
