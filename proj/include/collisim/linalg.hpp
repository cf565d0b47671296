#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "collisim/complex_matrix.hpp"

namespace collisim {

// Default numeric tolerances. COLLISIM_TOL=<x> overrides all of them at once;
// individual call sites accept explicit overrides.
struct Tolerances {
  double herm = 1e-10;
  double trace = 1e-10;
  double psd = 1e-10;
  double unitary = 1e-10;
  double eig = 1e-9;
};
const Tolerances& default_tols();

// Eigenvalues within this distance are grouped as one mode for the spectral
// decompositions in the kernel module.
inline constexpr double kEigGroupTol = 1e-8;

// Square Hermitian PSD unit-trace matrix. Construction through checked()
// enforces the invariants; the raw constructor is for values already known
// valid (library-internal outputs).
struct DensityMatrix {
  ComplexMatrix matrix;

  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix m) : matrix(std::move(m)) {}

  static DensityMatrix checked(ComplexMatrix m, const Tolerances& tols = default_tols());
  // Deviations from Hermiticity / unit trace / positive semidefiniteness.
  double herm_deviation() const { return matrix.hermiticity_deviation(); }
  double trace_deviation() const;
  double min_eigenvalue() const;
  void validate(const Tolerances& tols = default_tols()) const;

  std::size_t dim() const { return matrix.rows(); }
};

struct SpectrumResult {
  std::vector<cplx> eigenvalues;
  ComplexMatrix eigenvectors;  // columns, aligned with eigenvalues
  bool is_hermitian_path = false;
};

// Kronecker product, a-index major. Errors if the result would exceed the
// dimension cap (default 2^26 entries).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t entry_cap = std::size_t(1) << 26);

// Partial trace over the complement of `keep`. `dims` are the subsystem
// dimensions (product must equal the matrix dimension); kept subsystems
// retain their original order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::set<std::size_t>& keep);

// exp(-i*theta*h) for Hermitian h, via eigendecomposition.
ComplexMatrix matrix_exp_skew(const ComplexMatrix& h, double theta,
                              double tol_herm = default_tols().herm);

// Hermitian eigendecomposition (cyclic complex Jacobi). Real eigenvalues in
// ascending order, orthonormal eigenvectors.
SpectrumResult eig_hermitian(const ComplexMatrix& m, double tol_herm = default_tols().herm);

// General complex eigendecomposition: Hessenberg reduction + shifted QR to a
// Schur form, eigenvectors by triangular back-substitution. Eigenvalues
// sorted by descending magnitude.
SpectrumResult eig_general(const ComplexMatrix& m, double tol_eig = default_tols().eig,
                           std::size_t max_sweeps = 0);

// -sum lambda log2 lambda with 0 log 0 := 0. Eigenvalues below 1e-14 are
// clamped to zero before the log.
double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tols = default_tols());

// Row-major vectorization: vec(rho)_(i*d+j) = rho_ij, so A rho B -> A (x) B^T.
ComplexMatrix vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(const ComplexMatrix& v, std::size_t rows, std::size_t cols);

// Solve A x = b by LU with partial pivoting (A square, b may have multiple
// columns).
ComplexMatrix solve_linear(ComplexMatrix a, ComplexMatrix b);

// Determinant via LU (used by spectral validity probes).
cplx determinant(ComplexMatrix a);

}  // namespace collisim
