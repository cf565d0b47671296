#include <doctest.h>

#include <array>
#include <random>
#include <vector>

#include "collisim/simd_kernels.hpp"

using namespace collisim;
using kernels::cplx;

namespace {

std::vector<cplx> random_buf(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> v(n);
  for (cplx& x : v) x = cplx(gauss(rng), gauss(rng));
  return v;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("scalar and avx2 matmul agree") {
  if (!kernels::avx2_available())
    MESSAGE("AVX2 not available on this host; cross-backend checks skipped");
  std::mt19937_64 rng(1234);
  // Odd column counts exercise the vector remainder handling.
  const std::array<std::size_t, 3> shapes[] = {{3, 5, 7}, {4, 4, 4}, {1, 9, 2}, {13, 3, 11}};
  for (const auto& [m, k, n] : shapes) {
    const std::vector<cplx> a = random_buf(m * k, rng);
    const std::vector<cplx> b = random_buf(k * n, rng);
    std::vector<cplx> c_scalar = random_buf(m * n, rng);
    std::vector<cplx> c_simd = c_scalar;
    kernels::scalar::matmul_acc(a.data(), b.data(), c_scalar.data(), m, k, n);
#if defined(__x86_64__)
    if (kernels::avx2_available()) {
      kernels::avx2::matmul_acc(a.data(), b.data(), c_simd.data(), m, k, n);
      CHECK(max_abs_diff(c_scalar, c_simd) < 1e-13);
    }
#endif
    std::vector<cplx> c_dispatch(m * n, cplx(0, 0));
    std::vector<cplx> c_ref(m * n, cplx(0, 0));
    kernels::matmul_acc(a.data(), b.data(), c_dispatch.data(), m, k, n);
    kernels::scalar::matmul_acc(a.data(), b.data(), c_ref.data(), m, k, n);
    CHECK(max_abs_diff(c_dispatch, c_ref) < 1e-13);
  }
}

TEST_CASE("axpy, dot, scale, norm backends agree") {
  std::mt19937_64 rng(99);
  for (const std::size_t n : {std::size_t(1), std::size_t(2), std::size_t(5), std::size_t(16),
                              std::size_t(33)}) {
    const std::vector<cplx> x = random_buf(n, rng);
    const cplx alpha(0.7, -0.3);

    std::vector<cplx> y1 = random_buf(n, rng);
#if defined(__x86_64__)
    if (kernels::avx2_available()) {
      std::vector<cplx> y2 = y1;
      kernels::scalar::axpy(alpha, x.data(), y1.data(), n);
      kernels::avx2::axpy(alpha, x.data(), y2.data(), n);
      CHECK(max_abs_diff(y1, y2) < 1e-13);

      const cplx d1 = kernels::scalar::dot_conj(x.data(), y1.data(), n);
      const cplx d2 = kernels::avx2::dot_conj(x.data(), y1.data(), n);
      CHECK(std::abs(d1 - d2) < 1e-12);

      std::vector<cplx> s1 = x, s2 = x;
      kernels::scalar::scale(alpha, s1.data(), n);
      kernels::avx2::scale(alpha, s2.data(), n);
      CHECK(max_abs_diff(s1, s2) < 1e-13);

      CHECK(kernels::scalar::norm_sq(x.data(), n) ==
            doctest::Approx(kernels::avx2::norm_sq(x.data(), n)).epsilon(1e-13));
    }
#endif
  }
}

TEST_CASE("backend selection") {
  const kernels::Backend active = kernels::active_backend();
  CHECK((active == kernels::Backend::scalar || active == kernels::Backend::avx2));
  if (active == kernels::Backend::avx2) CHECK(kernels::avx2_available());
  kernels::set_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  kernels::reset_backend();
  CHECK(kernels::active_backend() == active);
  CHECK(std::string(kernels::backend_name(kernels::Backend::scalar)) == "scalar");
}
