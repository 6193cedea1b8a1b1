#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qslab/linalg.hpp"
#include "qslab/qstate.hpp"

namespace qslab {

struct BasisOptimizerConfig {
  int n_polar = 181;
  int n_azimuth = 360;
  int refine_iters = 40;
  int generic_samples = 2000;
  int local_steps = 200;
  std::uint64_t seed = 0x51AB5EEDULL;

  void validate() const;
};

struct BasisSearchResult {
  double value;
  ComplexMatrix basis;  // columns are the maximizing kets
};

// Score of a single basis ket; a basis scores the sum over its kets.
using KetScore = std::function<double(std::span<const cplx>)>;

/// Maximizes the basis score over orthonormal bases of C^dim.
///
/// dim == 2: polar/azimuth grid on the Bloch sphere of the first ket, then
/// coordinate-wise golden-section refinement in a tangent frame at the best
/// grid point.
/// dim > 2: seeded Haar candidates (candidate i draws from substream(seed, i)),
/// optionally preceded by the eigenbasis of `hint`, then greedy local
/// perturbations V -> exp(-i eps G) V. Ties keep the lowest candidate index.
///
/// The result is always the score of an explicit basis, hence a lower bound
/// on the supremum.
BasisSearchResult maximize_over_bases(std::size_t dim, const KetScore& score,
                                      const BasisOptimizerConfig& cfg,
                                      const ComplexMatrix* hint = nullptr);

// ||[rho, K]||_1 / 2
double trace_norm_asymmetry(const DensityMatrix& rho, const Observable& k);

// sup over bases of sum_x |Im K_w(x|rho)| Pr(x|rho). Terms with
// Pr(x|rho) <= POSTSELECT_EPS contribute 0.
double asymmetry_via_weak_values(const DensityMatrix& rho, const Observable& k,
                                 const BasisOptimizerConfig& cfg);
double weak_value_objective(const DensityMatrix& rho, const Observable& k,
                            const OrthoBasis& basis);

double qfi(const DensityMatrix& rho, const Observable& k);

double c_l1(const DensityMatrix& rho, const OrthoBasis& basis);

double c_kd_nonreality(const DensityMatrix& rho, const OrthoBasis& kbasis,
                       const BasisOptimizerConfig& cfg);

/// S(rho || sigma); +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
double von_neumann_entropy(const DensityMatrix& rho);

/// -tr(drho_dt ln sigma). SingularReference when sigma is rank deficient.
double entropy_production_rate(const DensityMatrix& rho, const ComplexMatrix& drho_dt,
                               const DensityMatrix& sigma);

// (beta / 2) ||[rho, Hb]||_1
double thermo_speed_limit(const DensityMatrix& rho, const Observable& hb, double beta);

struct BoundReport {
  double v_K = 0.0;
  double asym = 0.0;
  double weakval_bound = 0.0;
  double qfi = 0.0;
  double stddev_K = 0.0;
  double stddev_H = 0.0;
  double c_kd_nre = 0.0;
  double c_l1 = 0.0;
  double asym_normalized = 0.0;  // asym / ||K||_inf
  double h_norm = 0.0;           // ||H||_inf before rescaling
  double k_norm = 0.0;           // ||K||_inf
  std::vector<std::pair<std::string, double>> slacks;
  std::vector<std::pair<std::string, bool>> saturation_flags;

  double slack(std::string_view name) const;
  bool saturated(std::string_view name) const;
  double min_slack() const;
  std::string worst_slack_name() const;
};

/// Evaluates the whole chain for one (rho, K, H). H is rescaled to unit
/// operator norm; the coherence bounds compare against asym / ||K||_inf.
/// ZeroOperator when H or K vanishes.
BoundReport bound_report(const DensityMatrix& rho, const Observable& k, const Observable& h,
                         const BasisOptimizerConfig& cfg);

}  // namespace qslab
