#include "qslab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qslab/error.hpp"
#include "qslab/tolerances.hpp"

namespace qslab {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

BlochVector BlochVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero Bloch vector");
  return scaled(1.0 / n);
}

ComplexMatrix pauli_combination(const BlochVector& n) {
  return ComplexMatrix{{n.z, cplx(n.x, -n.y)}, {cplx(n.x, n.y), -n.z}};
}

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
  if (!mat_.is_finite()) throw Error(ErrorCode::NonFinite, "density matrix");
  if (mat_.hermiticity_defect() > tol::kHerm) {
    throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
  }
  const cplx tr = mat_.trace();
  if (std::abs(tr - 1.0) > tol::kHerm) {
    throw Error(ErrorCode::InvalidState, "trace " + std::to_string(tr.real()) + " != 1");
  }
  mat_ = mat_.hermitian_part();
  const auto eig = herm_eig(mat_);
  if (eig.values.front() < -tol::kStateNegEig) {
    throw Error(ErrorCode::InvalidState,
                "negative eigenvalue " + std::to_string(eig.values.front()));
  }
}

DensityMatrix unchecked_state(ComplexMatrix mat) {
  return DensityMatrix(std::move(mat), DensityMatrix::Unchecked{});
}

DensityMatrix DensityMatrix::from_bloch(const BlochVector& r) {
  if (r.norm() > 1.0 + 1e-10) {
    throw Error(ErrorCode::InvalidState, "Bloch vector outside the unit ball");
  }
  ComplexMatrix m = ComplexMatrix::identity(2) + pauli_combination(r);
  m *= 0.5;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> ket) {
  double n2 = 0.0;
  for (const auto& z : ket) n2 += std::norm(z);
  if (n2 == 0.0) throw Error(ErrorCode::InvalidState, "zero ket");
  std::vector<cplx> psi(ket.begin(), ket.end());
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& z : psi) z *= inv;
  return DensityMatrix(ComplexMatrix::outer(psi, psi));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix(std::move(m));
}

double DensityMatrix::purity() const {
  double p = 0.0;
  for (const auto& z : mat_.entries()) p += std::norm(z);
  return p;
}

BlochVector DensityMatrix::bloch() const {
  if (dim() != 2) throw Error(ErrorCode::DimMismatch, "Bloch vector needs a qubit state");
  const cplx off = mat_(0, 1);
  return {2.0 * off.real(), -2.0 * off.imag(), (mat_(0, 0) - mat_(1, 1)).real()};
}

Observable::Observable(ComplexMatrix mat) : mat_(std::move(mat)), eig_(herm_eig(mat_)) {
  mat_ = mat_.hermitian_part();
}

Observable::Observable(ComplexMatrix mat, HermitianEigen eig)
    : mat_(std::move(mat)), eig_(std::move(eig)) {
  if (mat_.hermiticity_defect() > tol::kHerm * std::max(1.0, mat_.max_abs())) {
    throw Error(ErrorCode::NotHermitian, "observable");
  }
  if (eig_.values.size() != mat_.dim() || eig_.vectors.dim() != mat_.dim()) {
    throw Error(ErrorCode::DimMismatch, "eigendata does not match observable");
  }
  mat_ = mat_.hermitian_part();
}

double Observable::operator_norm() const noexcept {
  return std::max(std::abs(eig_.values.front()), std::abs(eig_.values.back()));
}

OrthoBasis::OrthoBasis(ComplexMatrix vectors) : vectors_(std::move(vectors)) {
  const ComplexMatrix gram = vectors_.adjoint() * vectors_;
  if (max_abs_diff(gram, ComplexMatrix::identity(vectors_.dim())) > tol::kHerm) {
    throw Error(ErrorCode::NotOrthonormal, "basis columns are not orthonormal");
  }
}

OrthoBasis OrthoBasis::computational(std::size_t dim) {
  return OrthoBasis(ComplexMatrix::identity(dim));
}

ComplexMatrix OrthoBasis::projector(std::size_t i) const {
  const auto k = ket(i);
  return ComplexMatrix::outer(k, k);
}

double expectation(const DensityMatrix& rho, const Observable& o) {
  require_same_dim(rho.dim(), o.dim(), "expectation");
  const cplx v = trace_of_product(o.mat(), rho.mat());
  if (std::abs(v.imag()) > tol::kNonReal) {
    throw Error(ErrorCode::NonRealExpectation, "imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

double variance(const DensityMatrix& rho, const Observable& o) {
  const double mean = expectation(rho, o);
  ComplexMatrix centered = o.mat() - ComplexMatrix::identity(o.dim()) * mean;
  const double v = trace_of_product(centered * centered, rho.mat()).real();
  return std::max(0.0, v);
}

double probability(const DensityMatrix& rho, std::span<const cplx> x) {
  require_same_dim(rho.dim(), x.size(), "probability");
  return sandwich(x, rho.mat(), x).real();
}

cplx weak_value(const DensityMatrix& rho, const Observable& k, std::span<const cplx> x) {
  require_same_dim(rho.dim(), k.dim(), "weak_value");
  require_same_dim(rho.dim(), x.size(), "weak_value");
  const double p = probability(rho, x);
  if (p <= tol::kPostselect) {
    throw Error(ErrorCode::VanishingPostselection, "<x|rho|x> = " + std::to_string(p));
  }
  return sandwich(x, k.mat() * rho.mat(), x) / p;
}

cplx KdTable::total() const {
  cplx s = 0.0;
  for (const auto& z : entries) s += z;
  return s;
}

KdTable kd_quasiprob(const DensityMatrix& rho, const OrthoBasis& kbasis, const OrthoBasis& cbasis) {
  require_same_dim(rho.dim(), kbasis.dim(), "kd_quasiprob");
  require_same_dim(rho.dim(), cbasis.dim(), "kd_quasiprob");
  const std::size_t d = rho.dim();
  KdTable table{d, std::vector<cplx>(d * d)};
  for (std::size_t k = 0; k < d; ++k) {
    const auto kk = kbasis.ket(k);
    for (std::size_t c = 0; c < d; ++c) {
      const auto cc = cbasis.ket(c);
      table.entries[k * d + c] = inner(cc, kk) * sandwich(kk, rho.mat(), cc);
    }
  }
  return table;
}

GibbsState gibbs_state(const Observable& hb, double beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "beta must be finite and >= 0");
  }
  const auto& eig = hb.eigen();
  const double ground = eig.values.front();
  std::vector<cplx> w(eig.values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double wi = std::exp(-beta * (eig.values[i] - ground));
    w[i] = wi;
    sum += wi;
  }
  for (auto& wi : w) wi /= sum;
  const double log_z = -beta * ground + std::log(sum);
  return GibbsState{DensityMatrix(from_spectrum(eig, w)), std::exp(log_z), log_z};
}

MubBases mub_qubit_bases() {
  const double h = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  return MubBases{
      OrthoBasis(ComplexMatrix{{h, h}, {h, -h}}),
      OrthoBasis(ComplexMatrix{{h, h}, {h * i, -h * i}}),
      OrthoBasis(ComplexMatrix::identity(2)),
  };
}

}  // namespace qslab
