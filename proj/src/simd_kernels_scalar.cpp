#include "collisim/simd_kernels.hpp"

namespace collisim::kernels::scalar {

void matmul_acc(const cplx* a, const cplx* b, cplx* c,
                std::size_t m, std::size_t k, std::size_t n) {
  // i-k-j loop order keeps the inner loop streaming over contiguous rows of
  // b and c.
  for (std::size_t i = 0; i < m; ++i) {
    const cplx* arow = a + i * k;
    cplx* crow = c + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      const cplx av = arow[l];
      if (av == cplx(0.0, 0.0)) continue;
      const cplx* brow = b + l * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

cplx dot_conj(const cplx* x, const cplx* y, std::size_t n) {
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

void scale(cplx alpha, cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double norm_sq(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::norm(x[i]);
  return acc;
}

}  // namespace collisim::kernels::scalar
