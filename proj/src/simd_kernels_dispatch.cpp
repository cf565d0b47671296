#include "collisim/simd_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace collisim::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend resolve_default() {
  if (const char* env = std::getenv("COLLISIM_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) {
      if (!avx2_available())
        throw std::runtime_error("COLLISIM_SIMD=avx2 requested but AVX2+FMA is not available");
      return Backend::avx2;
    }
    // anything else, including "auto", falls through to the probe
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<int> g_backend{-1};

Backend current() {
  int b = g_backend.load(std::memory_order_acquire);
  if (b < 0) {
    Backend resolved = resolve_default();
    g_backend.store(static_cast<int>(resolved), std::memory_order_release);
    return resolved;
  }
  return static_cast<Backend>(b);
}

}  // namespace

Backend active_backend() { return current(); }

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available())
    throw std::runtime_error("AVX2 backend not available on this CPU");
  g_backend.store(static_cast<int>(b), std::memory_order_release);
}

void reset_backend() { g_backend.store(-1, std::memory_order_release); }

#if defined(__x86_64__) || defined(_M_X64)
#define COLLISIM_DISPATCH(fn, ...)                              \
  (current() == Backend::avx2 ? avx2::fn(__VA_ARGS__)           \
                              : scalar::fn(__VA_ARGS__))
#else
#define COLLISIM_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void matmul_acc(const cplx* a, const cplx* b, cplx* c,
                std::size_t m, std::size_t k, std::size_t n) {
  COLLISIM_DISPATCH(matmul_acc, a, b, c, m, k, n);
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  COLLISIM_DISPATCH(axpy, alpha, x, y, n);
}

cplx dot_conj(const cplx* x, const cplx* y, std::size_t n) {
  return COLLISIM_DISPATCH(dot_conj, x, y, n);
}

void scale(cplx alpha, cplx* x, std::size_t n) {
  COLLISIM_DISPATCH(scale, alpha, x, n);
}

double norm_sq(const cplx* x, std::size_t n) {
  return COLLISIM_DISPATCH(norm_sq, x, n);
}

}  // namespace collisim::kernels
