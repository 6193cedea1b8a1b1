#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace qslab {

using cplx = std::complex<double>;

// Dense d x d complex matrix stored row-major. Dimensions are limited to
// 1..tol::kMaxDim; everything here is written for small operators.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::span<const cplx> values);
  // |a><b|
  static ComplexMatrix outer(std::span<const cplx> a, std::span<const cplx> b);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const cplx> entries() const noexcept { return entries_; }
  std::span<cplx> entries() noexcept { return entries_; }

  cplx& operator()(std::size_t r, std::size_t c) noexcept { return entries_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * dim_ + c];
  }

  std::vector<cplx> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const cplx> v);

  ComplexMatrix adjoint() const;
  cplx trace() const noexcept;
  double max_abs() const noexcept;
  bool is_finite() const noexcept;
  bool is_hermitian(double tol) const noexcept;
  // max |(A - A^dag)_ij|
  double hermiticity_defect() const noexcept;
  // (A + A^dag) / 2
  ComplexMatrix hermitian_part() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s) noexcept;

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<cplx> entries_;
};

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v);

// <a|b>, conjugating a.
cplx inner(std::span<const cplx> a, std::span<const cplx> b) noexcept;
// <a|M|b>
cplx sandwich(std::span<const cplx> a, const ComplexMatrix& m, std::span<const cplx> b) noexcept;
// tr(A B) without forming the product.
cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column i pairs with values[i]
};

/// Cyclic complex Jacobi diagonalization. Throws NotHermitian when
/// max|A - A^dag| exceeds tol::kHerm (scaled by max(1, max|A|)), and
/// NoConvergence after tol::kJacobiSweeps sweeps.
HermitianEigen herm_eig(const ComplexMatrix& a);

// V diag(f(lambda)) V^dag
ComplexMatrix from_spectrum(const HermitianEigen& eig, std::span<const cplx> values);

std::vector<double> singular_values(const ComplexMatrix& a);

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// Schatten-p norm for p in [1, inf]. Throws InvalidOrder for p < 1.
double schatten_norm(const ComplexMatrix& a, double p);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(s A) for Hermitian A through its spectrum.
ComplexMatrix mat_exp_hermitian_scaled(const ComplexMatrix& a, cplx s);
ComplexMatrix mat_exp_hermitian_scaled(const HermitianEigen& eig, cplx s);

}  // namespace qslab
