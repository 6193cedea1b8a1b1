#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "qslab/linalg.hpp"

namespace qslab {

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
  double dot(const BlochVector& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
  BlochVector cross(const BlochVector& o) const noexcept {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  BlochVector scaled(double s) const noexcept { return {x * s, y * s, z * s}; }
  BlochVector normalized() const;
  bool is_direction(double tol = 1e-10) const noexcept { return std::abs(norm() - 1.0) <= tol; }

  friend BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend BlochVector operator+(const BlochVector& a, const BlochVector& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
};

// n . sigma
ComplexMatrix pauli_combination(const BlochVector& n);

class DensityMatrix {
 public:
  /// Validates hermiticity, unit trace and eigenvalues >= -tol::kStateNegEig.
  explicit DensityMatrix(ComplexMatrix mat);

  static DensityMatrix from_bloch(const BlochVector& r);
  static DensityMatrix pure(std::span<const cplx> ket);
  static DensityMatrix maximally_mixed(std::size_t dim);

  const ComplexMatrix& mat() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.dim(); }
  double purity() const;
  /// Qubits only.
  BlochVector bloch() const;

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix mat, Unchecked) : mat_(std::move(mat)) {}
  friend DensityMatrix unchecked_state(ComplexMatrix mat);

  ComplexMatrix mat_;
};

// For integrator internals that re-validate at their own cadence.
DensityMatrix unchecked_state(ComplexMatrix mat);

class Observable {
 public:
  explicit Observable(ComplexMatrix mat);
  Observable(ComplexMatrix mat, HermitianEigen eig);

  static Observable from_axis(const BlochVector& n) { return Observable(pauli_combination(n)); }

  const ComplexMatrix& mat() const noexcept { return mat_; }
  const HermitianEigen& eigen() const noexcept { return eig_; }
  std::size_t dim() const noexcept { return mat_.dim(); }
  double operator_norm() const noexcept;

 private:
  ComplexMatrix mat_;
  HermitianEigen eig_;
};

class OrthoBasis {
 public:
  /// Columns of `vectors` are the kets; V^dag V = I within tol::kHerm.
  explicit OrthoBasis(ComplexMatrix vectors);

  static OrthoBasis computational(std::size_t dim);
  static OrthoBasis eigenbasis(const Observable& k) { return OrthoBasis(k.eigen().vectors); }

  const ComplexMatrix& vectors() const noexcept { return vectors_; }
  std::size_t dim() const noexcept { return vectors_.dim(); }
  std::vector<cplx> ket(std::size_t i) const { return vectors_.column(i); }
  ComplexMatrix projector(std::size_t i) const;

 private:
  ComplexMatrix vectors_;
};

double expectation(const DensityMatrix& rho, const Observable& o);
double variance(const DensityMatrix& rho, const Observable& o);

/// <x|rho|x>
double probability(const DensityMatrix& rho, std::span<const cplx> x);

/// <x|K rho|x> / <x|rho|x>; VanishingPostselection when <x|rho|x> <= POSTSELECT_EPS.
cplx weak_value(const DensityMatrix& rho, const Observable& k, std::span<const cplx> x);

// table(k, c) = <c|k><k|rho|c>
struct KdTable {
  std::size_t dim;
  std::vector<cplx> entries;  // row-major (k, c)

  const cplx& operator()(std::size_t k, std::size_t c) const { return entries[k * dim + c]; }
  cplx total() const;
};

KdTable kd_quasiprob(const DensityMatrix& rho, const OrthoBasis& kbasis, const OrthoBasis& cbasis);

struct GibbsState {
  DensityMatrix state;
  double partition;      // may overflow to +inf for large beta; use log_partition
  double log_partition;
};

GibbsState gibbs_state(const Observable& hb, double beta);

struct MubBases {
  OrthoBasis x;
  OrthoBasis y;
  OrthoBasis z;
};

/// |x+-> = (|z+> +- |z->)/sqrt2, |y+-> = (|z+> +- i|z->)/sqrt2, |z+> = (1,0).
MubBases mub_qubit_bases();

}  // namespace qslab
