#pragma once

#include <complex>
#include <cstddef>

// Low-level dense complex kernels. Every contraction in the library funnels
// through these, so they exist in a scalar reference version and an AVX2+FMA
// version selected at runtime. The two are equivalence-tested against each
// other; results may differ by rounding only.

namespace collisim::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

// Backend resolution order: COLLISIM_SIMD env var ("scalar"/"avx2"/"auto"),
// then CPU capability probe, then scalar.
Backend active_backend();
const char* backend_name(Backend b);

// Force a backend (primarily for the equivalence tests). Throws if the
// requested backend is not available on this CPU.
void set_backend(Backend b);
void reset_backend();

// c (m x n) += a (m x k) * b (k x n), all row-major contiguous.
void matmul_acc(const cplx* a, const cplx* b, cplx* c,
                std::size_t m, std::size_t k, std::size_t n);

// y += alpha * x
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);

// sum_i conj(x_i) * y_i
cplx dot_conj(const cplx* x, const cplx* y, std::size_t n);

// x *= alpha
void scale(cplx alpha, cplx* x, std::size_t n);

// sum_i |x_i|^2
double norm_sq(const cplx* x, std::size_t n);

// Reference implementations, always available (used as the oracle in the
// backend equivalence tests).
namespace scalar {
void matmul_acc(const cplx* a, const cplx* b, cplx* c,
                std::size_t m, std::size_t k, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
cplx dot_conj(const cplx* x, const cplx* y, std::size_t n);
void scale(cplx alpha, cplx* x, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
}  // namespace scalar

bool avx2_available();

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void matmul_acc(const cplx* a, const cplx* b, cplx* c,
                std::size_t m, std::size_t k, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
cplx dot_conj(const cplx* x, const cplx* y, std::size_t n);
void scale(cplx alpha, cplx* x, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
}  // namespace avx2
#endif

}  // namespace collisim::kernels
