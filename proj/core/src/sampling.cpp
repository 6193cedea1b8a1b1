#include "qslab/sampling.hpp"

#include <cmath>
#include <numbers>

#include "qslab/error.hpp"

namespace qslab {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t CounterRng::mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::substream_key(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index + kGamma));
}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

BlochVector random_unit_vector(CounterRng& rng) {
  for (;;) {
    BlochVector v{rng.normal(), rng.normal(), rng.normal()};
    const double n = v.norm();
    if (n > 1e-12) return v.scaled(1.0 / n);
  }
}

BlochVector random_ball_vector(CounterRng& rng) {
  const BlochVector dir = random_unit_vector(rng);
  return dir.scaled(std::cbrt(rng.uniform()));
}

std::vector<cplx> random_ket(std::size_t dim, CounterRng& rng) {
  std::vector<cplx> psi(dim);
  double n2 = 0.0;
  while (n2 < 1e-24) {
    n2 = 0.0;
    for (auto& z : psi) {
      const double re = rng.normal();
      z = cplx(re, rng.normal());
      n2 += std::norm(z);
    }
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& z : psi) z *= inv;
  return psi;
}

ComplexMatrix random_unitary(std::size_t dim, CounterRng& rng) {
  ComplexMatrix q(dim);
  for (auto& z : q.entries()) {
    const double re = rng.normal();
    z = cplx(re, rng.normal());
  }
  // Modified Gram-Schmidt; the positive diagonal of R is the phase fix.
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      cplx proj = 0.0;
      for (std::size_t r = 0; r < dim; ++r) proj += std::conj(q(r, i)) * q(r, j);
      for (std::size_t r = 0; r < dim; ++r) q(r, j) -= proj * q(r, i);
    }
    double n2 = 0.0;
    for (std::size_t r = 0; r < dim; ++r) n2 += std::norm(q(r, j));
    if (n2 < 1e-24) throw Error(ErrorCode::NoConvergence, "rank-deficient Ginibre sample");
    const double inv = 1.0 / std::sqrt(n2);
    for (std::size_t r = 0; r < dim; ++r) q(r, j) *= inv;
  }
  return q;
}

ComplexMatrix random_hermitian(std::size_t dim, CounterRng& rng) {
  ComplexMatrix h(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    h(r, r) = rng.normal();
    for (std::size_t c = r + 1; c < dim; ++c) {
      const double re = rng.normal();
      const cplx z(re, rng.normal());
      h(r, c) = z * std::sqrt(0.5);
      h(c, r) = std::conj(h(r, c));
    }
  }
  return h;
}

ComplexMatrix random_unit_hermitian(std::size_t dim, CounterRng& rng) {
  for (;;) {
    ComplexMatrix h = random_hermitian(dim, rng);
    const auto eig = herm_eig(h);
    const double n = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    if (n < 1e-12) continue;
    std::vector<cplx> scaled(eig.values.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = eig.values[i] / n;
    return from_spectrum(eig, scaled).hermitian_part();
  }
}

DensityMatrix random_density(std::size_t dim, CounterRng& rng) {
  ComplexMatrix g(dim);
  for (auto& z : g.entries()) {
    const double re = rng.normal();
    z = cplx(re, rng.normal());
  }
  ComplexMatrix m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  return DensityMatrix(m.hermitian_part());
}

DensityMatrix random_pure_state(std::size_t dim, CounterRng& rng) {
  return DensityMatrix::pure(random_ket(dim, rng));
}

}  // namespace qslab
