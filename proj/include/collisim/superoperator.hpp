#pragma once

#include <span>
#include <string>

#include "collisim/complex_matrix.hpp"

namespace collisim {

// Linear map on vectorized operator space. `matrix` acts on row-major vec:
// vec(rho)_(i*d+j) = rho_ij, so the map rho -> A rho B has matrix A (x) B^T.
struct Superoperator {
  std::size_t dim_in = 0;   // operator dimension on the input side
  std::size_t dim_out = 0;  // operator dimension on the output side
  ComplexMatrix matrix;     // (dim_out^2) x (dim_in^2)
  std::string meta;

  Superoperator() = default;
  Superoperator(std::size_t din, std::size_t dout, ComplexMatrix m, std::string label = {});

  static Superoperator identity(std::size_t d, std::string label = {});
  static Superoperator zero(std::size_t din, std::size_t dout, std::string label = {});

  ComplexMatrix apply(const ComplexMatrix& op) const;

  Superoperator& operator+=(const Superoperator& other);
  Superoperator& operator-=(const Superoperator& other);
  Superoperator& operator*=(cplx alpha);

  double norm_max() const { return matrix.max_abs(); }
};

Superoperator operator+(Superoperator a, const Superoperator& b);
Superoperator operator-(Superoperator a, const Superoperator& b);
Superoperator operator*(cplx alpha, Superoperator s);
// Composition: (a * b)[rho] = a[b[rho]].
Superoperator operator*(const Superoperator& a, const Superoperator& b);

// rho -> sum_k K_k rho K_k^dag. Kraus operators must be square and equal
// sized.
Superoperator superop_from_kraus(std::span<const ComplexMatrix> kraus);

// rho -> a rho b
Superoperator sandwich_superop(const ComplexMatrix& a, const ComplexMatrix& b);
// rho -> [x, rho]
Superoperator commutator_superop(const ComplexMatrix& x);

// Joint-space helpers for a bipartite space A (x) B of dims (da, db):
//   lift:  rho_A -> rho_A (x) sigma_B        (da^2 -> (da*db)^2)
//   trace: R_AB  -> tr_B[R]                  ((da*db)^2 -> da^2)
Superoperator lift_with_second(std::size_t da, const ComplexMatrix& sigma_b);
Superoperator trace_out_second(std::size_t da, std::size_t db);
Superoperator trace_out_first(std::size_t da, std::size_t db);

}  // namespace collisim
