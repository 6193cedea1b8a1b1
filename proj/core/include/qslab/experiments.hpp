#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qslab/dynamics.hpp"
#include "qslab/qstate.hpp"
#include "qslab/quantify.hpp"
#include "qslab/sampling.hpp"

namespace qslab {

// ---------------------------------------------------------------------------
// Monte-Carlo minimum-time scatter for single qubits.

struct ExperimentConfig {
  int trials = 2000;
  std::uint64_t seed = 42;
  double tau = 1.0;
  double dt = 1e-3;
  std::vector<int> dims{2};
  double optimal_fraction = 0.25;
  std::string output_path;
  unsigned workers = 0;  // 0: QSLAB_THREADS or hardware concurrency

  void validate() const;
};

struct TrialRecord {
  int id = 0;
  std::uint64_t substream = 0;
  BlochVector r0;
  BlochVector n_k;
  double purity = 0.0;
  double delta_k = 0.0;
  double time_avg_c_l1 = 0.0;
  double tau_min = 0.0;
  double tau = 0.0;
  bool is_optimal = false;
  bool degenerate = false;
  double slack = 0.0;  // tau - tau_min
};

struct Figure1Result {
  ExperimentConfig config;
  std::vector<TrialRecord> records;  // sorted by id

  // Trials with tau - tau_min < -rel_tol * tau.
  int violations(double rel_tol = 1e-6) const;
  // Optimal-protocol trials with tau_min / tau >= ratio.
  int saturated_optimal(double ratio = 0.99) const;
  int optimal_count() const;
  double min_relative_slack() const;
};

/// One qubit run: n_U(t) drawn fresh from `axis_rng` each step (random
/// protocol) or the adaptive saturating axis n_K x r_S(t) (optimal protocol).
TrialRecord simulate_qubit_trial(const BlochVector& r0, const BlochVector& n_k, bool optimal,
                                 double tau, double dt, CounterRng& axis_rng);

/// Trial i draws, from substream(seed, i): is_optimal (u < optimal_fraction),
/// n_K uniform on the sphere, r_S(0) uniform in the ball, then per-step axes.
TrialRecord run_figure1_trial(const ExperimentConfig& cfg, int id);
Figure1Result run_figure1(const ExperimentConfig& cfg);

void write_figure1_csv(std::ostream& out, const Figure1Result& result);
std::string figure1_csv(const Figure1Result& result);
/// tau_min vs tau scatter, marker area scaled by purity, optimal trials green.
std::string render_figure1_svg(const Figure1Result& result);

// ---------------------------------------------------------------------------
// Mutually-unbiased-basis complementarity with adjudication of printed constants.

struct ComplementarityReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  double max_sq_sum_residual = 0.0;  // |sum C^2 - 2|r|^2|
  double max_coherence_sum = 0.0;   // max sum C
  double special_coherence_sum = 0.0;
  double special_each[3] = {0.0, 0.0, 0.0};

  double max_speed_sum = 0.0;
  double max_speed_sq_sum = 0.0;
  double max_speed_sq_identity_residual = 0.0;  // |sum v^2 - 2(2P - 1)|
  double max_speed_coherence_gap = 0.0;         // max |v_QSL^axis - C_axis|
  // Printed claims, measured.
  double printed_speed_sum_bound = 0.0;           // 2 sqrt 6
  double max_printed_identity_residual = 0.0;   // |sum v - 8(2P - 1)|
  bool printed_identity_holds = false;
  bool printed_bound_tight = false;

  bool sq_sum_ok() const { return max_sq_sum_residual < 1e-9; }
  bool sum_bound_ok() const;
  bool special_ok() const;
  bool internal_ok() const { return max_speed_sq_identity_residual < 1e-8; }
  bool passed() const { return sq_sum_ok() && sum_bound_ok() && special_ok() && internal_ok(); }
};

ComplementarityReport run_complementarity(std::size_t samples, std::uint64_t seed,
                                          unsigned workers = 0);
std::string format_complementarity(const ComplementarityReport& r);

// ---------------------------------------------------------------------------
// Thermodynamic speed limit along a driven trajectory.

struct ThermoNode {
  double t = 0.0;
  double v_K = 0.0;          // K = -ln sigma
  double bound = 0.0;        // (beta / 2) ||[rho, Hb]||_1
  double bound_half_beta = 0.0;
  double spohn_rate = 0.0;   // -tr(drho/dt ln sigma)
  double relative_entropy = 0.0;
};

struct ThermoReport {
  double beta = 0.0;
  double log_partition = 0.0;
  double entropy_production = 0.0;  // S(rho(tau) || sigma)
  bool singular_reference = false;
  std::vector<ThermoNode> nodes;
  double min_slack = 0.0;            // min over nodes of bound - v_K
  double linearity_residual = 0.0;   // max |bound(beta) - 2 bound(beta/2)|
  double rate_speed_residual = 0.0;  // max ||rate| - 2 v_K|

  bool passed() const { return min_slack >= -1e-9 && linearity_residual <= 1e-9; }
};

ThermoReport run_thermo(const DensityMatrix& rho0, const Observable& hb, double beta,
                        const GeneratorProtocol& protocol, double dt);
std::string format_thermo(const ThermoReport& r);

// ---------------------------------------------------------------------------
// Seeded property sweep over every bound and equality.

struct VerifyConfig {
  int cases = 500;
  std::uint64_t seed = 1;
  std::vector<int> dims{2, 3, 4};
  BasisOptimizerConfig optimizer{37, 72, 40, 32, 32, 0x51AB5EEDULL};
  unsigned workers = 0;
};

struct CheckResult {
  std::string name;
  int dim = 0;
  int cases = 0;
  int violations = 0;
  double worst = 0.0;                  // most negative margin seen
  std::vector<std::string> failures;   // reproducers, capped
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

VerifyReport run_verify(const VerifyConfig& cfg);
std::string format_verify(const VerifyReport& r);

}  // namespace qslab
