#include <doctest.h>

#include <cmath>
#include <random>

#include "collisim/dense_reference.hpp"
#include "collisim/linalg.hpp"
#include "collisim/operators.hpp"
#include "collisim/superoperator.hpp"

using namespace collisim;

TEST_CASE("kron basics") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(kron(i2, i2).max_abs_diff(ComplexMatrix::identity(4)) == 0.0);

  // sigma_x (x) sigma_x has ones on the antidiagonal.
  const ComplexMatrix xx = kron(ops::pauli_x(), ops::pauli_x());
  ComplexMatrix want(4, 4);
  for (std::size_t i = 0; i < 4; ++i) want(i, 3 - i) = 1.0;
  CHECK(xx.max_abs_diff(want) == 0.0);

  // Entry formula on a random rectangular pair.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  ComplexMatrix a(2, 3), b(3, 2);
  for (std::size_t e = 0; e < 6; ++e) {
    a.data()[e] = cplx(gauss(rng), gauss(rng));
    b.data()[e] = cplx(gauss(rng), gauss(rng));
  }
  const ComplexMatrix k = kron(a, b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t q = 0; q < 2; ++q)
          CHECK(std::abs(k(i * 3 + p, j * 2 + q) - a(i, j) * b(p, q)) == 0.0);

  CHECK_THROWS_AS(kron(ComplexMatrix(1 << 14, 1), ComplexMatrix(1 << 14, 1)),
                  std::invalid_argument);
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(11);
  const ComplexMatrix rho = dense::random_density(2, rng);
  const ComplexMatrix sigma = dense::random_density(3, rng);

  // Product state: trace over the second factor returns the first.
  const ComplexMatrix joint = kron(rho, sigma);
  CHECK(partial_trace(joint, {2, 3}, {0}).max_abs_diff(rho) < 1e-14);

  // Bell projector reduces to the maximally mixed state.
  ComplexMatrix bell(4, 1);
  bell(0, 0) = bell(3, 0) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix proj = bell * bell.adjoint();
  ComplexMatrix half = ComplexMatrix::identity(2);
  half *= cplx(0.5, 0.0);
  CHECK(partial_trace(proj, {2, 2}, {1}).max_abs_diff(half) < 1e-15);

  // Tracing over subsystems {0, 2} at once equals doing it one at a time.
  const ComplexMatrix three = dense::random_hermitian(8, rng);
  const ComplexMatrix direct = partial_trace(three, {2, 2, 2}, {1});
  const ComplexMatrix drop_last = partial_trace(three, {2, 2, 2}, {0, 1});
  const ComplexMatrix sequential = partial_trace(drop_last, {2, 2}, {1});
  CHECK(sequential.max_abs_diff(direct) < 1e-13);

  // Trace preserved for dimensions up to 256.
  const ComplexMatrix big = dense::random_density(256, rng);
  const ComplexMatrix reduced = partial_trace(big, {4, 8, 8}, {1});
  CHECK(std::abs(reduced.trace() - big.trace()) < 1e-13);

  CHECK_THROWS_AS(partial_trace(big, {4, 8}, {0}), std::invalid_argument);
}

TEST_CASE("matrix_exp_skew") {
  const ComplexMatrix id = matrix_exp_skew(ops::pauli_x(), 0.0);
  CHECK(id.max_abs_diff(ComplexMatrix::identity(2)) < 1e-15);

  const double theta = 0.7;
  ComplexMatrix want = ComplexMatrix::identity(2);
  want *= cplx(std::cos(theta), 0.0);
  want += cplx(0.0, -std::sin(theta)) * ops::pauli_x();
  CHECK(matrix_exp_skew(ops::pauli_x(), theta).max_abs_diff(want) < 1e-14);

  ComplexMatrix non_herm(2, 2);
  non_herm(0, 1) = 1.0;
  CHECK_THROWS_AS(matrix_exp_skew(non_herm, 1.0), std::invalid_argument);

  // Unitarity for random Hermitian generators.
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix h = dense::random_hermitian(5, rng);
    const ComplexMatrix u = matrix_exp_skew(h, 0.3 + 0.1 * t);
    CHECK(u.unitarity_deviation() < 1e-10);
  }
}

TEST_CASE("eig_hermitian") {
  const SpectrumResult d123 = eig_hermitian(ComplexMatrix::diagonal({1.0, 2.0, 3.0}));
  CHECK(d123.is_hermitian_path);
  CHECK(d123.eigenvalues[0].real() == doctest::Approx(1.0));
  CHECK(d123.eigenvalues[1].real() == doctest::Approx(2.0));
  CHECK(d123.eigenvalues[2].real() == doctest::Approx(3.0));

  const SpectrumResult sz = eig_hermitian(ops::pauli_z());
  CHECK(sz.eigenvalues[0].real() == doctest::Approx(-1.0));
  CHECK(sz.eigenvalues[1].real() == doctest::Approx(1.0));

  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix h = dense::random_hermitian(6, rng);
    const SpectrumResult s = eig_hermitian(h);
    // Reconstruction V diag(lambda) V^dag.
    ComplexMatrix lam(6, 6);
    for (std::size_t i = 0; i < 6; ++i) lam(i, i) = s.eigenvalues[i];
    const ComplexMatrix rebuilt = s.eigenvectors * lam * s.eigenvectors.adjoint();
    CHECK(rebuilt.max_abs_diff(h) < 1e-12);
    CHECK(s.eigenvectors.unitarity_deviation() < 1e-12);
    cplx sum(0.0, 0.0);
    for (const cplx& l : s.eigenvalues) sum += l;
    CHECK(std::abs(sum - h.trace()) < 1e-11);
  }

  ComplexMatrix nh(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(nh), std::invalid_argument);
}

TEST_CASE("eig_general") {
  // Upper-triangular: spectrum is the diagonal.
  ComplexMatrix tri(3, 3);
  tri(0, 0) = cplx(1.0, 1.0);
  tri(0, 1) = 5.0;
  tri(1, 1) = cplx(-2.0, 0.5);
  tri(1, 2) = 1.0;
  tri(2, 2) = cplx(0.25, 0.0);
  const SpectrumResult st = eig_general(tri);
  std::vector<cplx> want = {cplx(1.0, 1.0), cplx(-2.0, 0.5), cplx(0.25, 0.0)};
  for (const cplx& w : want) {
    double best = 1e9;
    for (const cplx& l : st.eigenvalues) best = std::min(best, std::abs(l - w));
    CHECK(best < 1e-10);
  }

  // Random matrices: eigenvalues are roots of det(A - lambda I) and the
  // eigenpair residual stays within tolerance.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 12; ++t) {
    ComplexMatrix a(4, 4);
    for (std::size_t e = 0; e < 16; ++e) a.data()[e] = cplx(gauss(rng), gauss(rng));
    const SpectrumResult s = eig_general(a);
    for (std::size_t i = 0; i < 4; ++i) {
      ComplexMatrix shifted = a;
      for (std::size_t r = 0; r < 4; ++r) shifted(r, r) -= s.eigenvalues[i];
      CHECK(std::abs(determinant(shifted)) < 1e-8);
      // Residual ||A v - lambda v||.
      ComplexMatrix v(4, 1);
      for (std::size_t r = 0; r < 4; ++r) v(r, 0) = s.eigenvectors(r, i);
      const ComplexMatrix res = a * v - s.eigenvalues[i] * v;
      CHECK(res.frobenius_norm() < 1e-9 * std::max(1.0, a.frobenius_norm()));
    }
  }
}

TEST_CASE("eig_general handles degeneracy and larger sizes") {
  std::mt19937_64 rng(19);
  // Normal matrix with an exactly threefold eigenvalue.
  const ComplexMatrix u = dense::random_unitary(4, rng);
  const ComplexMatrix deg =
      u * ComplexMatrix::diagonal({1.0, cplx(-1.0 / 3.0, 0.0), cplx(-1.0 / 3.0, 0.0),
                                   cplx(-1.0 / 3.0, 0.0)}) *
      u.adjoint();
  const SpectrumResult s = eig_general(deg);
  CHECK(std::abs(s.eigenvalues[0] - cplx(1.0, 0.0)) < 1e-10);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(s.eigenvalues[i] + cplx(1.0 / 3.0, 0.0)) < 1e-10);

  // 8x8 random complex matrix: residuals and determinant roots.
  std::normal_distribution<double> gauss;
  ComplexMatrix a(8, 8);
  for (std::size_t e = 0; e < 64; ++e) a.data()[e] = cplx(gauss(rng), gauss(rng));
  const SpectrumResult big = eig_general(a);
  for (std::size_t i = 0; i < 8; ++i) {
    ComplexMatrix shifted = a;
    for (std::size_t r = 0; r < 8; ++r) shifted(r, r) -= big.eigenvalues[i];
    CHECK(std::abs(determinant(shifted)) < 1e-6);
  }

  // Trivial sizes.
  ComplexMatrix one(1, 1);
  one(0, 0) = cplx(2.0, -3.0);
  CHECK(std::abs(eig_general(one).eigenvalues[0] - cplx(2.0, -3.0)) == 0.0);
}

TEST_CASE("von Neumann entropy") {
  ComplexMatrix pure(2, 2);
  pure(0, 0) = 1.0;
  CHECK(von_neumann_entropy(DensityMatrix(pure)) == doctest::Approx(0.0).epsilon(1e-12));

  ComplexMatrix mixed = ComplexMatrix::identity(4);
  mixed *= cplx(0.25, 0.0);
  CHECK(von_neumann_entropy(DensityMatrix(mixed)) == doctest::Approx(2.0).epsilon(1e-12));

  const double expected = 2.0 - 0.75 * std::log2(3.0);
  CHECK(von_neumann_entropy(DensityMatrix(ComplexMatrix::diagonal({0.75, 0.25}))) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.811278).epsilon(1e-6));

  ComplexMatrix bad = ComplexMatrix::identity(2);  // trace 2
  CHECK_THROWS_AS(von_neumann_entropy(DensityMatrix(bad)), std::invalid_argument);
}

TEST_CASE("vectorization and Kraus superoperators") {
  std::mt19937_64 rng(3);
  const ComplexMatrix rho = dense::random_density(3, rng);
  CHECK(devectorize(vectorize(rho), 3, 3).max_abs_diff(rho) == 0.0);

  // vec convention: row-major, entry (i*d + j) = rho_ij.
  CHECK(vectorize(rho)(0 * 3 + 1, 0) == rho(0, 1));

  const std::vector<ComplexMatrix> id_kraus = {ComplexMatrix::identity(2)};
  CHECK(superop_from_kraus(id_kraus).matrix.max_abs_diff(ComplexMatrix::identity(4)) == 0.0);

  // sigma_x maps |0><0| to |1><1|.
  const std::vector<ComplexMatrix> flip = {ops::pauli_x()};
  ComplexMatrix ket0(2, 2);
  ket0(0, 0) = 1.0;
  ComplexMatrix ket1(2, 2);
  ket1(1, 1) = 1.0;
  CHECK(superop_from_kraus(flip).apply(ket0).max_abs_diff(ket1) == 0.0);

  // Random Kraus pair: superoperator action equals the direct sum.
  std::vector<ComplexMatrix> pair;
  for (int i = 0; i < 2; ++i) {
    ComplexMatrix k(3, 3);
    std::normal_distribution<double> gauss;
    for (std::size_t e = 0; e < 9; ++e) k.data()[e] = cplx(gauss(rng), gauss(rng));
    pair.push_back(std::move(k));
  }
  const Superoperator s = superop_from_kraus(pair);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix x = dense::random_density(3, rng);
    ComplexMatrix direct(3, 3);
    for (const ComplexMatrix& k : pair) direct += k * x * k.adjoint();
    CHECK(s.apply(x).max_abs_diff(direct) < 1e-12);
  }

  // A complete Kraus family preserves the trace.
  const ComplexMatrix u = dense::random_unitary(4, rng);
  std::vector<ComplexMatrix> iso;
  for (std::size_t j = 0; j < 2; ++j) {
    ComplexMatrix k(2, 2);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) k(r, c) = u(r * 2 + j, c * 2);
    iso.push_back(std::move(k));
  }
  ComplexMatrix comp(2, 2);
  for (const ComplexMatrix& k : iso) comp += k.adjoint() * k;
  CHECK(comp.max_abs_diff(ComplexMatrix::identity(2)) < 1e-12);
  const Superoperator cs = superop_from_kraus(iso);
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix x = dense::random_density(2, rng);
    CHECK(std::abs(cs.apply(x).trace() - cplx(1.0, 0.0)) < 1e-11);
  }

  std::vector<ComplexMatrix> bad = {ComplexMatrix::identity(2), ComplexMatrix::identity(3)};
  CHECK_THROWS_AS(superop_from_kraus(bad), std::invalid_argument);

  // Joint-space helpers against the generic partial trace.
  const ComplexMatrix joint = dense::random_density(6, rng);
  CHECK(trace_out_second(2, 3).apply(joint).max_abs_diff(
            partial_trace(joint, {2, 3}, {0})) < 1e-13);
  CHECK(trace_out_first(2, 3).apply(joint).max_abs_diff(
            partial_trace(joint, {2, 3}, {1})) < 1e-13);
  const ComplexMatrix sys = dense::random_density(2, rng);
  const ComplexMatrix bond = dense::random_density(3, rng);
  CHECK(lift_with_second(2, bond).apply(sys).max_abs_diff(kron(sys, bond)) < 1e-14);
}

TEST_CASE("solve_linear and determinant") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  ComplexMatrix a(4, 4), b(4, 2);
  for (std::size_t e = 0; e < 16; ++e) a.data()[e] = cplx(gauss(rng), gauss(rng));
  for (std::size_t e = 0; e < 8; ++e) b.data()[e] = cplx(gauss(rng), gauss(rng));
  const ComplexMatrix x = solve_linear(a, b);
  CHECK((a * x).max_abs_diff(b) < 1e-11);

  const ComplexMatrix u = dense::random_unitary(4, rng);
  CHECK(std::abs(std::abs(determinant(u)) - 1.0) < 1e-12);
}
