#include "collisim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace collisim {

const Tolerances& default_tols() {
  static const Tolerances tols = [] {
    Tolerances t;
    if (const char* env = std::getenv("COLLISIM_TOL")) {
      const double v = std::atof(env);
      if (v > 0) t.herm = t.trace = t.psd = t.unitary = v, t.eig = 10 * v;
    }
    return t;
  }();
  return tols;
}

DensityMatrix DensityMatrix::checked(ComplexMatrix m, const Tolerances& tols) {
  DensityMatrix rho(std::move(m));
  rho.validate(tols);
  return rho;
}

double DensityMatrix::trace_deviation() const {
  return std::abs(matrix.trace() - cplx(1.0, 0.0));
}

double DensityMatrix::min_eigenvalue() const {
  const SpectrumResult s = eig_hermitian(matrix, 1.0);  // hermiticity checked separately
  double mn = 0.0;
  if (!s.eigenvalues.empty()) mn = s.eigenvalues.front().real();
  return mn;
}

void DensityMatrix::validate(const Tolerances& tols) const {
  if (!matrix.is_square()) throw std::invalid_argument("density matrix must be square");
  if (!matrix.all_finite()) throw std::invalid_argument("density matrix has non-finite entries");
  if (herm_deviation() > tols.herm)
    throw std::invalid_argument("density matrix not Hermitian within tol_herm");
  if (trace_deviation() > tols.trace)
    throw std::invalid_argument("density matrix trace differs from 1 beyond tol_trace");
  if (min_eigenvalue() < -tols.psd)
    throw std::invalid_argument("density matrix has eigenvalue below -tol_psd");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t entry_cap) {
  const std::size_t r = a.rows() * b.rows();
  const std::size_t c = a.cols() * b.cols();
  if (r == 0 || c == 0) return ComplexMatrix(r, c);
  if (r > entry_cap / c)
    throw std::invalid_argument("kron: result exceeds dimension cap (scenario too large)");
  ComplexMatrix out(r, c);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx av = a(i, j);
      if (av == cplx(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = av * b(k, l);
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::set<std::size_t>& keep) {
  if (!m.is_square()) throw std::invalid_argument("partial_trace: matrix not square");
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (total != m.rows())
    throw std::invalid_argument("partial_trace: dims product does not match matrix dimension");
  for (std::size_t s : keep)
    if (s >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");

  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::vector<std::size_t> traced;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (!keep.count(s)) traced.push_back(s);

  std::size_t dim_keep = 1, dim_tr = 1;
  for (std::size_t s : kept) dim_keep *= dims[s];
  for (std::size_t s : traced) dim_tr *= dims[s];

  // Strides of each subsystem in the full index.
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) stride[s - 1] = stride[s] * dims[s];

  auto expand = [&](std::size_t compact, const std::vector<std::size_t>& subs) {
    std::size_t full = 0;
    for (std::size_t idx = subs.size(); idx-- > 0;) {
      const std::size_t s = subs[idx];
      full += (compact % dims[s]) * stride[s];
      compact /= dims[s];
    }
    return full;
  };

  ComplexMatrix out(dim_keep, dim_keep);
  for (std::size_t i = 0; i < dim_keep; ++i) {
    const std::size_t fi = expand(i, kept);
    for (std::size_t j = 0; j < dim_keep; ++j) {
      const std::size_t fj = expand(j, kept);
      cplx acc(0.0, 0.0);
      for (std::size_t t = 0; t < dim_tr; ++t) {
        const std::size_t ft = expand(t, traced);
        acc += m(fi + ft, fj + ft);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexMatrix matrix_exp_skew(const ComplexMatrix& h, double theta, double tol_herm) {
  if (!h.is_square()) throw std::invalid_argument("matrix_exp_skew: matrix not square");
  if (h.hermiticity_deviation() > tol_herm)
    throw std::invalid_argument("matrix_exp_skew: generator not Hermitian within tolerance");
  const SpectrumResult s = eig_hermitian(h, tol_herm);
  const std::size_t n = h.rows();
  ComplexMatrix phases(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lam = s.eigenvalues[i].real();
    phases(i, i) = std::exp(cplx(0.0, -theta * lam));
  }
  return s.eigenvectors * phases * s.eigenvectors.adjoint();
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition: cyclic complex Jacobi.
// ---------------------------------------------------------------------------

SpectrumResult eig_hermitian(const ComplexMatrix& m, double tol_herm) {
  if (!m.is_square()) throw std::invalid_argument("eig_hermitian: matrix not square");
  if (m.hermiticity_deviation() > tol_herm)
    throw std::invalid_argument("eig_hermitian: matrix not Hermitian within tolerance");
  const std::size_t n = m.rows();
  // Work on the Hermitian average to scrub rounding asymmetry.
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.frobenius_norm(), 1e-300);
  const double off_tol = 1e-15 * scale;

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    off = std::sqrt(2.0 * off);
    if (off <= off_tol) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double abs_apq = std::abs(apq);
        if (abs_apq <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Absorb the phase so the 2x2 block is real symmetric, then rotate.
        const cplx phase = apq / abs_apq;
        const double zeta = (aqq - app) / (2.0 * abs_apq);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Columns transform: col_p' = c*col_p - s*conj(phase)*col_q,
        //                    col_q' = s*phase*col_p + c*col_q.
        const cplx gp = s * std::conj(phase);
        const cplx gq = s * phase;
        for (std::size_t i = 0; i < n; ++i) {
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - gp * aiq;
          a(i, q) = gq * aip + c * aiq;
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - gp * viq;
          v(i, q) = gq * vip + c * viq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - std::conj(gp) * aqj;
          a(q, j) = std::conj(gq) * apj + c * aqj;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  SpectrumResult result;
  result.is_hermitian_path = true;
  result.eigenvalues.resize(n);
  result.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    result.eigenvalues[k] = cplx(a(order[k], order[k]).real(), 0.0);
    for (std::size_t i = 0; i < n; ++i) result.eigenvectors(i, k) = v(i, order[k]);
  }
  return result;
}

// ---------------------------------------------------------------------------
// General eigendecomposition: Hessenberg + explicit shifted QR (Givens),
// eigenvectors by triangular back-substitution on the Schur form.
// ---------------------------------------------------------------------------

namespace {

void hessenberg(ComplexMatrix& a, ComplexMatrix& q) {
  const std::size_t n = a.rows();
  q = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Householder vector for column k below the subdiagonal.
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm <= 1e-300) continue;
    cplx x0 = a(k + 1, k);
    const double ax0 = std::abs(x0);
    const cplx phase = ax0 > 0 ? x0 / ax0 : cplx(1.0, 0.0);
    const cplx alpha = -phase * xnorm;
    std::vector<cplx> w(n, cplx(0.0, 0.0));
    w[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) w[i] = a(i, k);
    double wnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) wnorm2 += std::norm(w[i]);
    if (wnorm2 <= 1e-300) continue;
    const double beta = 2.0 / wnorm2;
    // a <- (I - beta w w^dag) a (I - beta w w^dag), q <- q (I - beta w w^dag)
    for (std::size_t j = 0; j < n; ++j) {
      cplx dot(0.0, 0.0);
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(w[i]) * a(i, j);
      dot *= beta;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= dot * w[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx dot(0.0, 0.0);
      for (std::size_t j = k + 1; j < n; ++j) dot += a(i, j) * w[j];
      dot *= beta;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= dot * std::conj(w[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx dot(0.0, 0.0);
      for (std::size_t j = k + 1; j < n; ++j) dot += q(i, j) * w[j];
      dot *= beta;
      for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= dot * std::conj(w[j]);
    }
  }
  // Clean the sub-subdiagonal.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j) a(i, j) = cplx(0.0, 0.0);
}

struct Givens {
  cplx c, s;  // [c, s; -conj(s), conj(c)] applied to rows (i, i+1)
};

// Eigenvalue of the trailing 2x2 of the active window closest to its last
// diagonal entry (Wilkinson shift).
cplx wilkinson_shift(const ComplexMatrix& h, std::size_t hi) {
  const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
  const cplx c = h(hi, hi - 1), d = h(hi, hi);
  const cplx tr = a + d;
  const cplx det = a * d - b * c;
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  const cplx l1 = 0.5 * (tr + disc);
  const cplx l2 = 0.5 * (tr - disc);
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

SpectrumResult eig_general(const ComplexMatrix& m, double tol_eig, std::size_t max_sweeps) {
  if (!m.is_square()) throw std::invalid_argument("eig_general: matrix not square");
  const std::size_t n = m.rows();
  SpectrumResult result;
  result.is_hermitian_path = false;
  if (n == 0) return result;
  if (max_sweeps == 0) max_sweeps = 40 * n + 40;

  ComplexMatrix t = m;
  ComplexMatrix q;
  hessenberg(t, q);

  const double scale = std::max(t.frobenius_norm(), 1e-300);
  const double eps = 2.3e-16;

  std::size_t hi = n - 1;
  std::size_t iters_at_hi = 0;
  std::size_t total_iters = 0;
  while (hi > 0) {
    // Deflation scan.
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(t(lo, lo - 1));
      const double local = std::abs(t(lo - 1, lo - 1)) + std::abs(t(lo, lo));
      if (sub <= eps * std::max(local, 1e-3 * scale)) {
        t(lo, lo - 1) = cplx(0.0, 0.0);
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      iters_at_hi = 0;
      continue;
    }

    if (++total_iters > max_sweeps)
      throw std::runtime_error("eig_general: QR iteration did not converge");
    ++iters_at_hi;

    cplx mu = wilkinson_shift(t, hi);
    if (iters_at_hi % 11 == 10) {
      // Exceptional shift to break rare limit cycles.
      mu = t(hi, hi) + cplx(0.75 * std::abs(t(hi, hi - 1)), 0.0);
    }

    // Explicit QR step on the window [lo, hi]: factor (T - mu I) with Givens
    // rotations, then multiply back in reverse and add the shift.
    for (std::size_t i = lo; i <= hi; ++i) t(i, i) -= mu;
    std::vector<Givens> rot(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      const cplx f = t(i, i), g = t(i + 1, i);
      const double r = std::sqrt(std::norm(f) + std::norm(g));
      Givens gv;
      if (r <= 1e-300) {
        gv.c = cplx(1.0, 0.0);
        gv.s = cplx(0.0, 0.0);
      } else {
        gv.c = std::conj(f) / r;
        gv.s = std::conj(g) / r;
      }
      rot[i - lo] = gv;
      // Rows of the similarity transform run through the full trailing
      // block so the Schur form stays valid outside the window.
      for (std::size_t j = i; j < n; ++j) {
        const cplx t1 = t(i, j), t2 = t(i + 1, j);
        t(i, j) = gv.c * t1 + gv.s * t2;
        t(i + 1, j) = -std::conj(gv.s) * t1 + std::conj(gv.c) * t2;
      }
    }
    for (std::size_t i = lo; i < hi; ++i) {
      const Givens& gv = rot[i - lo];
      for (std::size_t r3 = 0; r3 <= std::min(hi, i + 1); ++r3) {
        const cplx t1 = t(r3, i), t2 = t(r3, i + 1);
        t(r3, i) = t1 * std::conj(gv.c) + t2 * std::conj(gv.s);
        t(r3, i + 1) = -t1 * gv.s + t2 * gv.c;
      }
      for (std::size_t r4 = 0; r4 < n; ++r4) {
        const cplx q1 = q(r4, i), q2 = q(r4, i + 1);
        q(r4, i) = q1 * std::conj(gv.c) + q2 * std::conj(gv.s);
        q(r4, i + 1) = -q1 * gv.s + q2 * gv.c;
      }
    }
    for (std::size_t i = lo; i <= hi; ++i) t(i, i) += mu;
  }

  // Rows above the window were never part of a QR step's column updates for
  // indices < lo; with full-row updates above they already are. Zero the
  // numerically negligible subdiagonal leftovers.
  for (std::size_t i = 1; i < n; ++i) t(i, i - 1) = cplx(0.0, 0.0);

  // Eigenvectors of the triangular factor, then rotate back.
  ComplexMatrix vecs(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx lam = t(k, k);
    std::vector<cplx> y(n, cplx(0.0, 0.0));
    y[k] = cplx(1.0, 0.0);
    for (std::size_t i = k; i-- > 0;) {
      cplx rhs(0.0, 0.0);
      for (std::size_t j = i + 1; j <= k; ++j) rhs += t(i, j) * y[j];
      cplx denom = t(i, i) - lam;
      const double smin = std::max(eps * std::abs(lam), 1e-30 * scale + 1e-300);
      if (std::abs(denom) < smin) denom = cplx(smin, 0.0);
      y[i] = -rhs / denom;
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i <= k; ++i) nrm += std::norm(y[i]);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i <= k; ++i) y[i] /= nrm;
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc(0.0, 0.0);
      for (std::size_t j = 0; j <= k; ++j) acc += q(i, j) * y[j];
      vecs(i, k) = acc;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double ai = std::abs(t(i, i)), aj = std::abs(t(j, j));
    if (ai != aj) return ai > aj;
    if (t(i, i).real() != t(j, j).real()) return t(i, i).real() > t(j, j).real();
    return t(i, i).imag() > t(j, j).imag();
  });

  result.eigenvalues.resize(n);
  result.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    result.eigenvalues[k] = t(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) result.eigenvectors(i, k) = vecs(i, order[k]);
  }

  // Residual audit against the requested tolerance.
  for (std::size_t k = 0; k < n; ++k) {
    double res = 0.0, vn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * result.eigenvectors(j, k);
      acc -= result.eigenvalues[k] * result.eigenvectors(i, k);
      res += std::norm(acc);
      vn += std::norm(result.eigenvectors(i, k));
    }
    if (std::sqrt(res) > tol_eig * std::max(1.0, scale) * std::sqrt(std::max(vn, 1e-300)))
      throw std::runtime_error("eig_general: eigenpair residual exceeds tolerance");
  }
  return result;
}

double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tols) {
  rho.validate(tols);
  const SpectrumResult s = eig_hermitian(rho.matrix, tols.herm);
  double entropy = 0.0;
  for (const cplx& lv : s.eigenvalues) {
    double lam = lv.real();
    if (lam < 1e-14) lam = 0.0;  // rounding noise
    if (lam > 0.0) entropy -= lam * std::log2(lam);
  }
  return entropy;
}

ComplexMatrix vectorize(const ComplexMatrix& m) {
  ComplexMatrix v(m.rows() * m.cols(), 1);
  for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) v(i, 0) = m.data()[i];
  return v;
}

ComplexMatrix devectorize(const ComplexMatrix& v, std::size_t rows, std::size_t cols) {
  if (v.cols() != 1 || v.rows() != rows * cols)
    throw std::invalid_argument("devectorize: shape mismatch");
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) m.data()[i] = v(i, 0);
  return m;
}

ComplexMatrix solve_linear(ComplexMatrix a, ComplexMatrix b) {
  if (!a.is_square()) throw std::invalid_argument("solve_linear: matrix not square");
  if (a.rows() != b.rows()) throw std::invalid_argument("solve_linear: rhs shape mismatch");
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) best = std::abs(a(i, k)), piv = i;
    if (best <= 1e-300) throw std::runtime_error("solve_linear: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      if (f == cplx(0.0, 0.0)) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx acc = b(i, j);
      for (std::size_t l = i + 1; l < n; ++l) acc -= a(i, l) * b(l, j);
      b(i, j) = acc / a(i, i);
    }
  }
  return b;
}

cplx determinant(ComplexMatrix a) {
  if (!a.is_square()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = a.rows();
  cplx det(1.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) best = std::abs(a(i, k)), piv = i;
    if (best == 0.0) return cplx(0.0, 0.0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      if (f == cplx(0.0, 0.0)) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

}  // namespace collisim
