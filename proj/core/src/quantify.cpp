#include "qslab/quantify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qslab/dynamics.hpp"
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

// (M - M^dag) / (2i): its diagonal in any basis is Im <x|M|x>.
ComplexMatrix imaginary_part(const ComplexMatrix& m) {
  ComplexMatrix b = m - m.adjoint();
  b *= cplx(0.0, -0.5);
  return b.hermitian_part();
}

double clamp_eig(double x) { return x < 0.0 ? 0.0 : x; }

}  // namespace

double trace_norm_asymmetry(const DensityMatrix& rho, const Observable& k) {
  require_same_dim(rho.dim(), k.dim(), "trace_norm_asymmetry");
  return 0.5 * schatten_norm(commutator(rho.mat(), k.mat()), 1.0);
}

double weak_value_objective(const DensityMatrix& rho, const Observable& k,
                            const OrthoBasis& basis) {
  require_same_dim(rho.dim(), k.dim(), "weak_value_objective");
  require_same_dim(rho.dim(), basis.dim(), "weak_value_objective");
  double s = 0.0;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto x = basis.ket(i);
    const double p = probability(rho, x);
    if (p <= tol::kPostselect) continue;
    s += std::abs(weak_value(rho, k, x).imag()) * p;
  }
  return s;
}

double asymmetry_via_weak_values(const DensityMatrix& rho, const Observable& k,
                                 const BasisOptimizerConfig& cfg) {
  require_same_dim(rho.dim(), k.dim(), "asymmetry_via_weak_values");
  const ComplexMatrix krho = k.mat() * rho.mat();
  const ComplexMatrix& r = rho.mat();
  KetScore score = [&](std::span<const cplx> x) {
    const double p = sandwich(x, r, x).real();
    if (p <= tol::kPostselect) return 0.0;
    const cplx kw = sandwich(x, krho, x) / p;
    return std::abs(kw.imag()) * p;
  };
  const ComplexMatrix hint = imaginary_part(krho);
  return maximize_over_bases(rho.dim(), score, cfg, &hint).value;
}

double qfi(const DensityMatrix& rho, const Observable& k) {
  require_same_dim(rho.dim(), k.dim(), "qfi");
  const auto eig = herm_eig(rho.mat());
  const ComplexMatrix kk = eig.vectors.adjoint() * k.mat() * eig.vectors;
  const std::size_t d = rho.dim();
  double f = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double li = clamp_eig(eig.values[i]);
    for (std::size_t j = 0; j < d; ++j) {
      const double lj = clamp_eig(eig.values[j]);
      const double sum = li + lj;
      if (sum <= tol::kQfi) continue;
      const double diff = li - lj;
      f += diff * diff / sum * std::norm(kk(i, j));
    }
  }
  return 2.0 * f;
}

double c_l1(const DensityMatrix& rho, const OrthoBasis& basis) {
  require_same_dim(rho.dim(), basis.dim(), "c_l1");
  const ComplexMatrix m = basis.vectors().adjoint() * rho.mat() * basis.vectors();
  double s = 0.0;
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c)
      if (r != c) s += std::abs(m(r, c));
  return s;
}

double c_kd_nonreality(const DensityMatrix& rho, const OrthoBasis& kbasis,
                       const BasisOptimizerConfig& cfg) {
  require_same_dim(rho.dim(), kbasis.dim(), "c_kd_nonreality");
  double total = 0.0;
  for (std::size_t k = 0; k < rho.dim(); ++k) {
    // <c|k><k|rho|c> = <c| (|k><k| rho) |c>
    const ComplexMatrix m = kbasis.projector(k) * rho.mat();
    KetScore score = [&](std::span<const cplx> c) { return std::abs(sandwich(c, m, c).imag()); };
    const ComplexMatrix hint = imaginary_part(m);
    total += maximize_over_bases(rho.dim(), score, cfg, &hint).value;
  }
  return total;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double l : herm_eig(rho.mat()).values)
    if (l > tol::kSupport) s -= l * std::log(l);
  return s;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "relative_entropy");
  const auto es = herm_eig(sigma.mat());
  double cross = 0.0;
  double outside = 0.0;
  for (std::size_t j = 0; j < es.values.size(); ++j) {
    const auto v = es.vectors.column(j);
    const double weight = sandwich(v, rho.mat(), v).real();
    if (es.values[j] > tol::kSupport) {
      cross += weight * std::log(es.values[j]);
    } else {
      outside += weight;
    }
  }
  if (outside > tol::kSupport) return std::numeric_limits<double>::infinity();
  return -von_neumann_entropy(rho) - cross;
}

double entropy_production_rate(const DensityMatrix& rho, const ComplexMatrix& drho_dt,
                               const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), drho_dt.dim(), "entropy_production_rate");
  require_same_dim(rho.dim(), sigma.dim(), "entropy_production_rate");
  if (drho_dt.hermiticity_defect() > 1e-9 || std::abs(drho_dt.trace()) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "drho/dt must be traceless and Hermitian");
  }
  const auto es = herm_eig(sigma.mat());
  std::vector<cplx> logs(es.values.size());
  for (std::size_t j = 0; j < logs.size(); ++j) {
    if (es.values[j] <= tol::kSupport) {
      throw Error(ErrorCode::SingularReference,
                  "reference state eigenvalue " + std::to_string(es.values[j]));
    }
    logs[j] = std::log(es.values[j]);
  }
  const ComplexMatrix log_sigma = from_spectrum(es, logs);
  return -trace_of_product(drho_dt, log_sigma).real();
}

double thermo_speed_limit(const DensityMatrix& rho, const Observable& hb, double beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "beta must be finite and >= 0");
  }
  return beta * trace_norm_asymmetry(rho, hb);
}

double BoundReport::slack(std::string_view name) const {
  for (const auto& [n, v] : slacks)
    if (n == name) return v;
  throw Error(ErrorCode::InvalidArgument, "unknown slack " + std::string(name));
}

bool BoundReport::saturated(std::string_view name) const {
  for (const auto& [n, v] : saturation_flags)
    if (n == name) return v;
  throw Error(ErrorCode::InvalidArgument, "unknown slack " + std::string(name));
}

double BoundReport::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : slacks) m = std::min(m, s.second);
  return m;
}

std::string BoundReport::worst_slack_name() const {
  std::string name;
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [n, v] : slacks) {
    if (v < m) {
      m = v;
      name = n;
    }
  }
  return name;
}

BoundReport bound_report(const DensityMatrix& rho, const Observable& k, const Observable& h,
                         const BasisOptimizerConfig& cfg) {
  require_same_dim(rho.dim(), k.dim(), "bound_report");
  require_same_dim(rho.dim(), h.dim(), "bound_report");
  const double h_norm = h.operator_norm();
  const double k_norm = k.operator_norm();
  if (h_norm == 0.0) throw Error(ErrorCode::ZeroOperator, "generator is the zero matrix");
  if (k_norm == 0.0) throw Error(ErrorCode::ZeroOperator, "observable is the zero matrix");

  const Observable h_unit(h.mat() * (1.0 / h_norm));
  const OrthoBasis kbasis = OrthoBasis::eigenbasis(k);

  BoundReport r;
  r.h_norm = h_norm;
  r.k_norm = k_norm;
  r.v_K = instantaneous_speed(rho, h_unit, k);
  r.asym = trace_norm_asymmetry(rho, k);
  r.asym_normalized = r.asym / k_norm;
  r.weakval_bound = asymmetry_via_weak_values(rho, k, cfg);
  r.qfi = qfi(rho, k);
  r.stddev_K = std::sqrt(variance(rho, k));
  r.stddev_H = std::sqrt(variance(rho, h_unit));
  r.c_kd_nre = c_kd_nonreality(rho, kbasis, cfg);
  r.c_l1 = c_l1(rho, kbasis);

  r.slacks = {
      {"eq5", r.asym - r.v_K},
      {"eq2", r.stddev_K * r.stddev_H - r.v_K},
      {"eq10", 0.5 * std::sqrt(r.qfi) - r.asym},
      {"eq12", r.stddev_K - r.asym},
      {"eq15", r.c_kd_nre - r.asym_normalized},
      {"eq16", r.c_l1 - r.c_kd_nre},
  };
  for (const auto& [name, value] : r.slacks)
    r.saturation_flags.emplace_back(name, std::abs(value) < tol::kSat);
  return r;
}

}  // namespace qslab
