#include "qslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qslab/error.hpp"
#include "qslab/tolerances.hpp"

namespace qslab {

namespace {

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > tol::kMaxDim) {
    throw Error(ErrorCode::InvalidDimension,
                "matrix dimension " + std::to_string(dim) + " outside 1.." +
                    std::to_string(tol::kMaxDim));
  }
}

void check_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

double scaled_herm_tol(const ComplexMatrix& a) {
  return tol::kHerm * std::max(1.0, a.max_abs());
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  check_dim(dim);
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), entries_(std::move(entries)) {
  check_dim(dim);
  if (entries_.size() != dim * dim) {
    throw Error(ErrorCode::DimMismatch, "expected " + std::to_string(dim * dim) +
                                            " entries, got " + std::to_string(entries_.size()));
  }
  if (!is_finite()) throw Error(ErrorCode::NonFinite, "matrix has NaN or Inf entries");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()), entries_() {
  check_dim(dim_);
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw Error(ErrorCode::DimMismatch, "ragged matrix literal");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimMismatch, "outer product of unequal kets");
  ComplexMatrix m(a.size());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < b.size(); ++c) m(r, c) = a[r] * std::conj(b[c]);
  return m;
}

std::vector<cplx> ComplexMatrix::column(std::size_t c) const {
  std::vector<cplx> v(dim_);
  for (std::size_t r = 0; r < dim_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const cplx> v) {
  if (v.size() != dim_) throw Error(ErrorCode::DimMismatch, "column length");
  for (std::size_t r = 0; r < dim_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

cplx ComplexMatrix::trace() const noexcept {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::is_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double ComplexMatrix::hermiticity_defect() const noexcept {
  double d = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return d;
}

bool ComplexMatrix::is_hermitian(double tol) const noexcept {
  return hermiticity_defect() <= tol;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    m(r, r) = (*this)(r, r).real();
    for (std::size_t c = r + 1; c < dim_; ++c) {
      const cplx v = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
      m(r, c) = v;
      m(c, r) = std::conj(v);
    }
  }
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  check_same_dim(*this, o);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  check_same_dim(*this, o);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) noexcept {
  for (auto& z : entries_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  const std::size_t d = a.dim();
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < d; ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v) {
  if (v.size() != a.dim()) throw Error(ErrorCode::DimMismatch, "matrix-vector product");
  std::vector<cplx> out(a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r) {
    cplx s = 0.0;
    for (std::size_t c = 0; c < a.dim(); ++c) s += a(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) noexcept {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

cplx sandwich(std::span<const cplx> a, const ComplexMatrix& m, std::span<const cplx> b) noexcept {
  cplx s = 0.0;
  const std::size_t d = m.dim();
  for (std::size_t r = 0; r < d; ++r) {
    cplx row = 0.0;
    for (std::size_t c = 0; c < d; ++c) row += m(r, c) * b[c];
    s += std::conj(a[r]) * row;
  }
  return s;
}

cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  cplx t = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) t += a(i, k) * b(k, i);
  return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

HermitianEigen herm_eig(const ComplexMatrix& a) {
  if (!a.is_finite()) throw Error(ErrorCode::NonFinite, "herm_eig input");
  if (a.hermiticity_defect() > scaled_herm_tol(a)) {
    throw Error(ErrorCode::NotHermitian,
                "max|A - A^dag| = " + std::to_string(a.hermiticity_defect()));
  }
  const std::size_t d = a.dim();
  ComplexMatrix w = a.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(d);

  double total = 0.0;
  for (const auto& z : w.entries()) total += std::norm(z);
  const double stop = total * 1e-32;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) s += std::norm(w(p, q));
    return s;
  };

  int sweep = 0;
  for (; sweep <= tol::kJacobiSweeps; ++sweep) {
    const double off = off_norm();
    if (off <= stop || off == 0.0) break;
    if (sweep == tol::kJacobiSweeps) {
      throw Error(ErrorCode::NoConvergence,
                  "Jacobi sweep budget exhausted, off-diagonal norm " + std::to_string(off));
    }
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const cplx apq = w(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = w(p, p).real();
        const double aqq = w(q, q).real();
        if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
            std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
          w(p, q) = 0.0;
          w(q, p) = 0.0;
          continue;
        }
        const cplx phase = apq / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // W = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on (p, q).
        const cplx wpp = c;
        const cplx wpq = s;
        const cplx wqp = -s * std::conj(phase);
        const cplx wqq = c * std::conj(phase);

        for (std::size_t k = 0; k < d; ++k) {
          const cplx akp = w(k, p);
          const cplx akq = w(k, q);
          w(k, p) = akp * wpp + akq * wqp;
          w(k, q) = akp * wpq + akq * wqq;
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * wpp + vkq * wqp;
          v(k, q) = vkp * wpq + vkq * wqq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const cplx bpk = w(p, k);
          const cplx bqk = w(q, k);
          w(p, k) = std::conj(wpp) * bpk + std::conj(wqp) * bqk;
          w(q, k) = std::conj(wpq) * bpk + std::conj(wqq) * bqk;
        }
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        w(p, p) = w(p, p).real();
        w(q, q) = w(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return w(i, i).real() < w(j, j).real(); });

  HermitianEigen out{std::vector<double>(d), ComplexMatrix(d)};
  for (std::size_t n = 0; n < d; ++n) {
    const std::size_t src = order[n];
    out.values[n] = w(src, src).real();
    // Fix the global phase: largest-magnitude component real and positive.
    std::size_t lead = 0;
    for (std::size_t r = 1; r < d; ++r)
      if (std::abs(v(r, src)) > std::abs(v(lead, src)) + 1e-14) lead = r;
    const cplx ph = std::conj(v(lead, src)) / std::abs(v(lead, src));
    for (std::size_t r = 0; r < d; ++r) out.vectors(r, n) = v(r, src) * ph;
  }
  return out;
}

ComplexMatrix from_spectrum(const HermitianEigen& eig, std::span<const cplx> values) {
  const std::size_t d = eig.vectors.dim();
  if (values.size() != d) throw Error(ErrorCode::DimMismatch, "spectrum length");
  ComplexMatrix m(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        s += eig.vectors(r, i) * values[i] * std::conj(eig.vectors(c, i));
      m(r, c) = s;
    }
  return m;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  if (!a.is_finite()) throw Error(ErrorCode::NonFinite, "singular_values input");
  const double scale = std::max(1.0, a.max_abs());
  std::vector<double> sv;
  const ComplexMatrix adj = a.adjoint();
  if (max_abs_diff(a, adj) <= 1e-12 * scale) {
    sv = herm_eig(a).values;
    for (auto& x : sv) x = std::abs(x);
  } else if (max_abs_diff(a, adj * -1.0) <= 1e-12 * scale) {
    sv = herm_eig(a * cplx(0, -1)).values;
    for (auto& x : sv) x = std::abs(x);
  } else {
    const ComplexMatrix gram = a * adj;
    sv = herm_eig(gram).values;
    const double clamp = tol::kEigClamp * std::max(1.0, gram.max_abs());
    for (auto& x : sv) {
      if (x < 0.0) {
        if (x < -clamp) throw Error(ErrorCode::NoConvergence, "A A^dag has a negative eigenvalue");
        x = 0.0;
      }
      x = std::sqrt(x);
    }
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double schatten_norm(const ComplexMatrix& a, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw Error(ErrorCode::InvalidOrder, "Schatten order must be >= 1, got " + std::to_string(p));
  }
  const auto sv = singular_values(a);
  if (std::isinf(p)) return sv.empty() ? 0.0 : sv.front();
  if (p == 1.0) return std::accumulate(sv.begin(), sv.end(), 0.0);
  double s = 0.0;
  for (double x : sv) s += std::pow(x, p);
  return std::pow(s, 1.0 / p);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  return a * b - b * a;
}

ComplexMatrix mat_exp_hermitian_scaled(const HermitianEigen& eig, cplx s) {
  std::vector<cplx> f(eig.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(s * eig.values[i]);
  return from_spectrum(eig, f);
}

ComplexMatrix mat_exp_hermitian_scaled(const ComplexMatrix& a, cplx s) {
  return mat_exp_hermitian_scaled(herm_eig(a), s);
}

}  // namespace qslab
