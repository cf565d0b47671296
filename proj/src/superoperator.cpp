#include "collisim/superoperator.hpp"

#include <stdexcept>

#include "collisim/linalg.hpp"

namespace collisim {

Superoperator::Superoperator(std::size_t din, std::size_t dout, ComplexMatrix m, std::string label)
    : dim_in(din), dim_out(dout), matrix(std::move(m)), meta(std::move(label)) {
  if (matrix.rows() != dim_out * dim_out || matrix.cols() != dim_in * dim_in)
    throw std::invalid_argument("Superoperator: matrix shape must be dim_out^2 x dim_in^2");
}

Superoperator Superoperator::identity(std::size_t d, std::string label) {
  return Superoperator(d, d, ComplexMatrix::identity(d * d), std::move(label));
}

Superoperator Superoperator::zero(std::size_t din, std::size_t dout, std::string label) {
  return Superoperator(din, dout, ComplexMatrix(dout * dout, din * din), std::move(label));
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& op) const {
  if (op.rows() != dim_in || op.cols() != dim_in)
    throw std::invalid_argument("Superoperator::apply: operand dimension mismatch");
  return devectorize(matrix * vectorize(op), dim_out, dim_out);
}

Superoperator& Superoperator::operator+=(const Superoperator& other) {
  matrix += other.matrix;
  return *this;
}

Superoperator& Superoperator::operator-=(const Superoperator& other) {
  matrix -= other.matrix;
  return *this;
}

Superoperator& Superoperator::operator*=(cplx alpha) {
  matrix *= alpha;
  return *this;
}

Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
Superoperator operator-(Superoperator a, const Superoperator& b) { return a -= b; }
Superoperator operator*(cplx alpha, Superoperator s) { return s *= alpha; }

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.dim_in != b.dim_out)
    throw std::invalid_argument("superoperator composition: dimension mismatch");
  return Superoperator(b.dim_in, a.dim_out, a.matrix * b.matrix);
}

Superoperator superop_from_kraus(std::span<const ComplexMatrix> kraus) {
  if (kraus.empty()) throw std::invalid_argument("superop_from_kraus: no Kraus operators");
  const std::size_t d = kraus.front().rows();
  ComplexMatrix s(d * d, d * d);
  for (const ComplexMatrix& k : kraus) {
    if (!k.is_square() || k.rows() != d)
      throw std::invalid_argument("superop_from_kraus: Kraus operators must be square, equal dims");
    s += kron(k, k.conjugate());
  }
  return Superoperator(d, d, std::move(s), "kraus-sum");
}

Superoperator sandwich_superop(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("sandwich_superop: incompatible operator pair");
  return Superoperator(a.cols(), a.rows(), kron(a, b.transpose()));
}

Superoperator commutator_superop(const ComplexMatrix& x) {
  if (!x.is_square()) throw std::invalid_argument("commutator_superop: matrix not square");
  const std::size_t d = x.rows();
  ComplexMatrix m = kron(x, ComplexMatrix::identity(d));
  m -= kron(ComplexMatrix::identity(d), x.transpose());
  return Superoperator(d, d, std::move(m));
}

Superoperator lift_with_second(std::size_t da, const ComplexMatrix& sigma_b) {
  const std::size_t db = sigma_b.rows();
  const std::size_t dj = da * db;
  ComplexMatrix m(dj * dj, da * da);
  for (std::size_t s = 0; s < da; ++s)
    for (std::size_t sp = 0; sp < da; ++sp)
      for (std::size_t c = 0; c < db; ++c)
        for (std::size_t cp = 0; cp < db; ++cp)
          m((s * db + c) * dj + (sp * db + cp), s * da + sp) = sigma_b(c, cp);
  return Superoperator(da, dj, std::move(m), "lift");
}

Superoperator trace_out_second(std::size_t da, std::size_t db) {
  const std::size_t dj = da * db;
  ComplexMatrix m(da * da, dj * dj);
  for (std::size_t s = 0; s < da; ++s)
    for (std::size_t sp = 0; sp < da; ++sp)
      for (std::size_t b = 0; b < db; ++b)
        m(s * da + sp, (s * db + b) * dj + (sp * db + b)) = 1.0;
  return Superoperator(dj, da, std::move(m), "tr_second");
}

Superoperator trace_out_first(std::size_t da, std::size_t db) {
  const std::size_t dj = da * db;
  ComplexMatrix m(db * db, dj * dj);
  for (std::size_t b = 0; b < db; ++b)
    for (std::size_t bp = 0; bp < db; ++bp)
      for (std::size_t s = 0; s < da; ++s)
        m(b * db + bp, (s * db + b) * dj + (s * db + bp)) = 1.0;
  return Superoperator(dj, db, std::move(m), "tr_first");
}

}  // namespace collisim
