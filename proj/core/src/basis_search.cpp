#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qslab/error.hpp"
#include "qslab/quantify.hpp"
#include "qslab/sampling.hpp"

namespace qslab {

namespace {

using Ket2 = std::array<cplx, 2>;

struct QubitBasis {
  Ket2 up;
  Ket2 down;
};

QubitBasis qubit_basis(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const cplx e = std::polar(1.0, phi);
  return {{c, e * s}, {s, -e * c}};
}

QubitBasis qubit_basis(const BlochVector& n) {
  const double z = std::clamp(n.z / n.norm(), -1.0, 1.0);
  return qubit_basis(std::acos(z), std::atan2(n.y, n.x));
}

double score_basis(const KetScore& score, const QubitBasis& b) {
  return score(b.up) + score(b.down);
}

double score_basis(const KetScore& score, const ComplexMatrix& v) {
  double s = 0.0;
  std::vector<cplx> col(v.dim());
  for (std::size_t c = 0; c < v.dim(); ++c) {
    for (std::size_t r = 0; r < v.dim(); ++r) col[r] = v(r, c);
    s += score(col);
  }
  return s;
}

ComplexMatrix to_matrix(const QubitBasis& b) {
  return ComplexMatrix{{b.up[0], b.down[0]}, {b.up[1], b.down[1]}};
}

// Golden-section maximization of f on [lo, hi]; returns the best abscissa seen.
template <typename F>
double golden_max(F&& f, double lo, double hi, int iters) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

BasisSearchResult search_qubit(const KetScore& score, const BasisOptimizerConfig& cfg) {
  const double pi = std::numbers::pi;
  const int np = cfg.n_polar;
  const int na = cfg.n_azimuth;
  double best = -1.0;
  double best_theta = 0.0;
  double best_phi = 0.0;
  for (int i = 0; i < np; ++i) {
    const double theta = np == 1 ? 0.5 * pi : pi * i / (np - 1);
    for (int j = 0; j < na; ++j) {
      const double phi = 2.0 * pi * j / na;
      const double v = score_basis(score, qubit_basis(theta, phi));
      if (v > best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  // Tangent frame at the best grid direction keeps the refinement well
  // conditioned near the poles.
  const BlochVector n0{std::sin(best_theta) * std::cos(best_phi),
                       std::sin(best_theta) * std::sin(best_phi), std::cos(best_theta)};
  const BlochVector seed = std::abs(n0.x) < 0.9 ? BlochVector{1, 0, 0} : BlochVector{0, 1, 0};
  const BlochVector e1 = (seed - n0.scaled(seed.dot(n0))).normalized();
  const BlochVector e2 = n0.cross(e1);

  QubitBasis best_basis = qubit_basis(best_theta, best_phi);
  auto direction = [&](double u, double v) { return n0 + e1.scaled(u) + e2.scaled(v); };
  auto eval = [&](double u, double v) {
    const QubitBasis b = qubit_basis(direction(u, v));
    const double val = score_basis(score, b);
    if (val > best) {
      best = val;
      best_basis = b;
    }
    return val;
  };

  const double step = std::max(pi / std::max(np - 1, 1), 2.0 * pi / na);
  const double half = 1.5 * step;
  double u = 0.0;
  double v = 0.0;
  double prev = best;
  for (int round = 0; round < 8; ++round) {
    u = golden_max([&](double x) { return eval(x, v); }, u - half, u + half, cfg.refine_iters);
    v = golden_max([&](double y) { return eval(u, y); }, v - half, v + half, cfg.refine_iters);
    if (round > 0 && best - prev <= 1e-15 * std::max(1.0, best)) break;
    prev = best;
  }
  return {best, to_matrix(best_basis)};
}

BasisSearchResult search_generic(std::size_t dim, const KetScore& score,
                                 const BasisOptimizerConfig& cfg, const ComplexMatrix* hint) {
  double best = -1.0;
  ComplexMatrix best_basis = ComplexMatrix::identity(dim);
  auto consider = [&](const ComplexMatrix& v) {
    const double s = score_basis(score, v);
    if (s > best) {
      best = s;
      best_basis = v;
      return true;
    }
    return false;
  };

  if (hint != nullptr) consider(herm_eig(hint->hermitian_part()).vectors);
  consider(ComplexMatrix::identity(dim));
  for (int i = 0; i < cfg.generic_samples; ++i) {
    CounterRng rng = CounterRng::substream(cfg.seed, static_cast<std::uint64_t>(i));
    consider(random_unitary(dim, rng));
  }

  double eps = 0.3;
  for (int step = 0; step < cfg.local_steps; ++step) {
    CounterRng rng = CounterRng::substream(
        cfg.seed, static_cast<std::uint64_t>(cfg.generic_samples) + static_cast<std::uint64_t>(step));
    const ComplexMatrix g = random_hermitian(dim, rng);
    const ComplexMatrix rot = mat_exp_hermitian_scaled(g, cplx(0.0, -eps));
    if (consider(rot * best_basis)) {
      eps = std::min(1.0, eps * 1.5);
    } else {
      eps = std::max(1e-7, eps * 0.7);
    }
  }
  return {best, best_basis};
}

}  // namespace

void BasisOptimizerConfig::validate() const {
  if (n_polar < 1 || n_azimuth < 1 || refine_iters < 1 || generic_samples < 1 || local_steps < 1) {
    throw Error(ErrorCode::InvalidConfig, "basis optimizer counts must all be >= 1");
  }
}

BasisSearchResult maximize_over_bases(std::size_t dim, const KetScore& score,
                                      const BasisOptimizerConfig& cfg, const ComplexMatrix* hint) {
  cfg.validate();
  if (dim == 1) {
    const std::array<cplx, 1> one{1.0};
    return {score(one), ComplexMatrix::identity(1)};
  }
  if (hint != nullptr && hint->dim() != dim) throw Error(ErrorCode::DimMismatch, "basis hint");
  if (dim == 2) return search_qubit(score, cfg);
  return search_generic(dim, score, cfg, hint);
}

}  // namespace qslab
