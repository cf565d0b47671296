#include "collisim/simd_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// Compiled for generic x86-64; every function carries an avx2+fma target
// attribute and is only reachable through the dispatch layer after a CPU
// capability check.
#define COLLISIM_AVX2 __attribute__((target("avx2,fma")))

namespace collisim::kernels::avx2 {

namespace {

// One __m256d holds two interleaved complex doubles (re0, im0, re1, im1).
// Complex multiply-accumulate of a broadcast scalar a against a vector b:
//   acc += a * b
// re = ar*br - ai*bi, im = ar*bi + ai*br, realized as fmaddsub(ar, b, ai*swap(b)).
COLLISIM_AVX2 inline __m256d cmul_acc(__m256d acc, __m256d ar, __m256d ai, __m256d b) {
  __m256d bswap = _mm256_permute_pd(b, 0x5);
  __m256d t = _mm256_mul_pd(ai, bswap);
  return _mm256_add_pd(acc, _mm256_fmaddsub_pd(ar, b, t));
}

}  // namespace

COLLISIM_AVX2
void matmul_acc(const cplx* a, const cplx* b, cplx* c,
                std::size_t m, std::size_t k, std::size_t n) {
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  const std::size_t n2 = (n / 2) * 2;
  for (std::size_t i = 0; i < m; ++i) {
    const cplx* arow = a + i * k;
    double* crow = cd + i * 2 * n;
    for (std::size_t l = 0; l < k; ++l) {
      const cplx av = arow[l];
      if (av == cplx(0.0, 0.0)) continue;
      const __m256d ar = _mm256_set1_pd(av.real());
      const __m256d ai = _mm256_set1_pd(av.imag());
      const double* brow = bd + l * 2 * n;
      std::size_t j = 0;
      for (; j < n2; j += 2) {
        __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        __m256d cv = _mm256_loadu_pd(crow + 2 * j);
        _mm256_storeu_pd(crow + 2 * j, cmul_acc(cv, ar, ai, bv));
      }
      if (j < n) {
        const cplx bv = b[l * n + j];
        cplx cv(crow[2 * j], crow[2 * j + 1]);
        cv += av * bv;
        crow[2 * j] = cv.real();
        crow[2 * j + 1] = cv.imag();
      }
    }
  }
}

COLLISIM_AVX2
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const std::size_t n2 = (n / 2) * 2;
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, cmul_acc(yv, ar, ai, xv));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

COLLISIM_AVX2
cplx dot_conj(const cplx* x, const cplx* y, std::size_t n) {
  // conj(x)*y: re = xr*yr + xi*yi, im = xr*yi - xi*yr.
  // fmsubadd(xr, y, xi*swap(y)) gives (xr*yr + xi*yi, xr*yi - xi*yr).
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n2 = (n / 2) * 2;
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d xr = _mm256_shuffle_pd(xv, xv, 0x0);  // (xr0,xr0,xr1,xr1)
    __m256d xi = _mm256_shuffle_pd(xv, xv, 0xF);  // (xi0,xi0,xi1,xi1)
    __m256d yswap = _mm256_permute_pd(yv, 0x5);
    __m256d t = _mm256_mul_pd(xi, yswap);
    acc = _mm256_add_pd(acc, _mm256_fmsubadd_pd(xr, yv, t));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  cplx result(lanes[0] + lanes[2], lanes[1] + lanes[3]);
  for (; i < n; ++i) result += std::conj(x[i]) * y[i];
  return result;
}

COLLISIM_AVX2
void scale(cplx alpha, cplx* x, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  double* xd = reinterpret_cast<double*>(x);
  const std::size_t n2 = (n / 2) * 2;
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d xswap = _mm256_permute_pd(xv, 0x5);
    __m256d t = _mm256_mul_pd(ai, xswap);
    _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(ar, xv, t));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

COLLISIM_AVX2
double norm_sq(const cplx* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n2 = (n / 2) * 2;
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double result = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) result += std::norm(x[i]);
  return result;
}

}  // namespace collisim::kernels::avx2

#endif  // x86_64
