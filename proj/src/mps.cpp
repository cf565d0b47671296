#include "collisim/mps.hpp"

#include <cmath>
#include <stdexcept>

namespace collisim {

namespace {

double vec_norm(const std::vector<cplx>& v) {
  double n = 0.0;
  for (const cplx& x : v) n += std::norm(x);
  return std::sqrt(n);
}

}  // namespace

void MPSSiteTensor::validate() const {
  if (slices.size() != physical_dim)
    throw std::invalid_argument("MPSSiteTensor: slice count != physical_dim");
  for (const ComplexMatrix& s : slices)
    if (s.rows() != left_dim || s.cols() != right_dim)
      throw std::invalid_argument("MPSSiteTensor: inconsistent slice shape");
}

double MPSSiteTensor::right_normalization_deviation() const {
  ComplexMatrix acc(left_dim, left_dim);
  for (const ComplexMatrix& s : slices) acc += s * s.adjoint();
  for (std::size_t i = 0; i < left_dim; ++i) acc(i, i) -= 1.0;
  return acc.max_abs();
}

void MPSChain::validate() const {
  if (sites.empty()) throw std::invalid_argument("MPSChain: empty chain");
  for (const MPSSiteTensor& s : sites) s.validate();
  if (sites.front().left_dim != 1 || sites.back().right_dim != 1)
    throw std::invalid_argument("MPSChain: boundary bond dims must be 1");
  for (std::size_t k = 0; k + 1 < sites.size(); ++k)
    if (sites[k].right_dim != sites[k + 1].left_dim)
      throw std::invalid_argument("MPSChain: adjacent bond dims mismatch");
}

MPSChain build_standard_mps(const ComplexMatrix& u, const std::vector<cplx>& phi,
                            std::span<const std::vector<cplx>> psis, const Tolerances& tols) {
  std::vector<ComplexMatrix> us(psis.size(), u);
  return build_standard_mps(std::span<const ComplexMatrix>(us), phi, psis, tols);
}

MPSChain build_standard_mps(std::span<const ComplexMatrix> us, const std::vector<cplx>& phi,
                            std::span<const std::vector<cplx>> psis, const Tolerances& tols) {
  const std::size_t n = psis.size();
  if (n == 0) throw std::invalid_argument("build_standard_mps: no ancillas");
  if (us.size() != n) throw std::invalid_argument("build_standard_mps: unitary count mismatch");
  const std::size_t d_s = phi.size();
  const std::size_t d = psis.front().size();
  if (std::abs(vec_norm(phi) - 1.0) > tols.trace)
    throw std::invalid_argument("build_standard_mps: system state not normalized");
  for (const auto& psi : psis) {
    if (psi.size() != d) throw std::invalid_argument("build_standard_mps: ancilla dims differ");
    if (std::abs(vec_norm(psi) - 1.0) > tols.trace)
      throw std::invalid_argument("build_standard_mps: ancilla state not normalized");
  }
  for (const ComplexMatrix& u : us) {
    if (u.rows() != d_s * d || u.cols() != d_s * d)
      throw std::invalid_argument("build_standard_mps: unitary has wrong dimension");
    if (u.unitarity_deviation() > tols.unitary)
      throw std::invalid_argument("build_standard_mps: interaction not unitary within tolerance");
  }

  MPSChain chain;
  chain.sites.reserve(n + 1);

  // Site 1: A^{[1],i}_{1,a} = <a| (x) <i| U |phi> (x) |psi_1>.
  {
    MPSSiteTensor site;
    site.physical_dim = d;
    site.left_dim = 1;
    site.right_dim = d_s;
    site.slices.assign(d, ComplexMatrix(1, d_s));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t a = 0; a < d_s; ++a) {
        cplx acc(0.0, 0.0);
        for (std::size_t s = 0; s < d_s; ++s)
          for (std::size_t w = 0; w < d; ++w)
            acc += us[0](a * d + i, s * d + w) * phi[s] * psis[0][w];
        site.slices[i](0, a) = acc;
      }
    chain.sites.push_back(std::move(site));
  }

  // Sites 2..n: A^{[k],i}_{a',a} = <a| (x) <i| U |a'> (x) |psi_k>.
  for (std::size_t k = 1; k < n; ++k) {
    MPSSiteTensor site;
    site.physical_dim = d;
    site.left_dim = d_s;
    site.right_dim = d_s;
    site.slices.assign(d, ComplexMatrix(d_s, d_s));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t ap = 0; ap < d_s; ++ap)
        for (std::size_t a = 0; a < d_s; ++a) {
          cplx acc(0.0, 0.0);
          for (std::size_t w = 0; w < d; ++w)
            acc += us[k](a * d + i, ap * d + w) * psis[k][w];
          site.slices[i](ap, a) = acc;
        }
    chain.sites.push_back(std::move(site));
  }

  // Terminal system site: A^{[n+1],i}_{a,1} = delta_{a,i}.
  {
    MPSSiteTensor site;
    site.physical_dim = d_s;
    site.left_dim = d_s;
    site.right_dim = 1;
    site.slices.assign(d_s, ComplexMatrix(d_s, 1));
    for (std::size_t i = 0; i < d_s; ++i) site.slices[i](i, 0) = 1.0;
    chain.sites.push_back(std::move(site));
  }

  chain.validate();
  return chain;
}

cplx amplitude(const MPSChain& chain, std::span<const std::size_t> indices) {
  if (indices.size() != chain.length())
    throw std::invalid_argument("amplitude: index count != chain length");
  ComplexMatrix acc = ComplexMatrix::identity(1);
  for (std::size_t k = 0; k < chain.length(); ++k) {
    const MPSSiteTensor& site = chain.sites[k];
    if (indices[k] >= site.physical_dim)
      throw std::invalid_argument("amplitude: physical index out of range");
    acc = acc * site.slices[indices[k]];
  }
  return acc(0, 0);
}

std::vector<cplx> contract_statevector(const MPSChain& chain, std::size_t dim_cap) {
  std::size_t total = 1;
  for (const MPSSiteTensor& s : chain.sites) {
    if (total > dim_cap / s.physical_dim)
      throw std::invalid_argument("contract_statevector: physical dimension exceeds cap");
    total *= s.physical_dim;
  }
  // Left-to-right expansion: rows[p] = A^{i_1} ... A^{i_k} for prefix p.
  std::vector<ComplexMatrix> rows{ComplexMatrix::identity(1)};
  for (const MPSSiteTensor& site : chain.sites) {
    std::vector<ComplexMatrix> next;
    next.reserve(rows.size() * site.physical_dim);
    for (const ComplexMatrix& r : rows)
      for (std::size_t i = 0; i < site.physical_dim; ++i) next.push_back(r * site.slices[i]);
    rows = std::move(next);
  }
  std::vector<cplx> state(rows.size());
  for (std::size_t p = 0; p < rows.size(); ++p) state[p] = rows[p](0, 0);
  return state;
}

NormalizationReport check_right_normalization(const MPSChain& chain, double tol) {
  NormalizationReport report;
  report.per_site_deviation.reserve(chain.length());
  for (const MPSSiteTensor& site : chain.sites) {
    const double dev = site.right_normalization_deviation();
    report.per_site_deviation.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

DensityMatrix reduced_density_left(const MPSChain& chain, std::size_t k, std::size_t dim_cap) {
  if (k == 0 || k > chain.length())
    throw std::invalid_argument("reduced_density_left: cut out of range");
  std::size_t dim = 1;
  for (std::size_t s = 0; s < k; ++s) {
    if (dim > dim_cap / chain.sites[s].physical_dim)
      throw std::invalid_argument("reduced_density_left: block dimension exceeds cap");
    dim *= chain.sites[s].physical_dim;
  }
  std::vector<ComplexMatrix> rows{ComplexMatrix::identity(1)};
  for (std::size_t s = 0; s < k; ++s) {
    const MPSSiteTensor& site = chain.sites[s];
    std::vector<ComplexMatrix> next;
    next.reserve(rows.size() * site.physical_dim);
    for (const ComplexMatrix& r : rows)
      for (std::size_t i = 0; i < site.physical_dim; ++i) next.push_back(r * site.slices[i]);
    rows = std::move(next);
  }
  ComplexMatrix rho(dim, dim);
  for (std::size_t p = 0; p < dim; ++p)
    for (std::size_t q = 0; q < dim; ++q) {
      cplx acc(0.0, 0.0);
      const std::size_t width = rows[p].cols();
      for (std::size_t a = 0; a < width; ++a) acc += rows[p](0, a) * std::conj(rows[q](0, a));
      rho(p, q) = acc;
    }
  return DensityMatrix(std::move(rho));
}

double entanglement_entropy_cut(const MPSChain& chain, std::size_t k) {
  if (k == 0 || k > chain.length())
    throw std::invalid_argument("entanglement_entropy_cut: cut out of range");
  // Gram matrix G_k = sum_{i_1..i_k} (A^{i_k})^dag ... (A^{i_1})^dag A^{i_1} ... A^{i_k},
  // which shares its nonzero spectrum with the k-site reduced state.
  ComplexMatrix gram = ComplexMatrix::identity(1);
  for (std::size_t s = 0; s < k; ++s) {
    const MPSSiteTensor& site = chain.sites[s];
    ComplexMatrix next(site.right_dim, site.right_dim);
    for (std::size_t i = 0; i < site.physical_dim; ++i)
      next += site.slices[i].adjoint() * gram * site.slices[i];
    gram = std::move(next);
  }
  const SpectrumResult spec = eig_hermitian(gram, 1e-8);
  double entropy = 0.0;
  for (const cplx& lv : spec.eigenvalues) {
    double lam = lv.real();
    if (lam < 1e-14) lam = 0.0;
    if (lam > 0.0) entropy -= lam * std::log2(lam);
  }
  return entropy;
}

}  // namespace collisim
