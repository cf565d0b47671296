#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace collisim {

using cplx = std::complex<double>;

// Dense row-major complex matrix. The substrate for states, unitaries,
// tensor slices and superoperators throughout the library. Products route
// through the runtime-dispatched SIMD kernels.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(const std::vector<cplx>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  const std::vector<cplx>& entries() const { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx alpha);

  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix adjoint() const;

  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  // max |a_ij - b_ij|
  double max_abs_diff(const ComplexMatrix& other) const;
  bool all_finite() const;

  // max |a_ij - conj(a_ji)|
  double hermiticity_deviation() const;
  bool is_hermitian(double tol) const { return hermiticity_deviation() <= tol; }
  // max-abs deviation of m * m^dag from the identity
  double unitarity_deviation() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx alpha, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, cplx alpha);

std::string to_string(const ComplexMatrix& m, int precision = 6);

}  // namespace collisim
