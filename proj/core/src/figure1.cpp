#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "qslab/error.hpp"
#include "qslab/experiments.hpp"
#include "qslab/parallel.hpp"

namespace qslab {

void ExperimentConfig::validate() const {
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  if (!(tau > 0.0) || !(dt > 0.0) || dt > tau) {
    throw Error(ErrorCode::InvalidConfig, "need 0 < dt <= tau");
  }
  if (!(optimal_fraction >= 0.0 && optimal_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "optimal fraction must lie in [0, 1]");
  }
  if (dims.empty()) throw Error(ErrorCode::InvalidConfig, "dims must not be empty");
}

int Figure1Result::violations(double rel_tol) const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [&](const TrialRecord& r) {
    return r.slack < -rel_tol * r.tau;
  }));
}

int Figure1Result::saturated_optimal(double ratio) const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [&](const TrialRecord& r) {
    return r.is_optimal && r.tau_min >= ratio * r.tau;
  }));
}

int Figure1Result::optimal_count() const {
  return static_cast<int>(
      std::count_if(records.begin(), records.end(), [](const TrialRecord& r) { return r.is_optimal; }));
}

double Figure1Result::min_relative_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records) m = std::min(m, r.slack / r.tau);
  return m;
}

TrialRecord simulate_qubit_trial(const BlochVector& r0, const BlochVector& n_k, bool optimal,
                                 double tau, double dt, CounterRng& axis_rng) {
  const DensityMatrix rho0 = DensityMatrix::from_bloch(r0);
  const Observable k = Observable::from_axis(n_k);
  GeneratorPolicy policy;
  if (optimal) {
    policy = saturating_qubit_policy(n_k, dt);
  } else {
    policy = [&axis_rng](double, const DensityMatrix&) {
      return Observable::from_axis(random_unit_vector(axis_rng));
    };
  }
  const Trajectory traj = evolve_adaptive(rho0, tau, dt, policy, k);
  const TimeBound bound = tau_min_qubit(traj, n_k);

  TrialRecord rec;
  rec.r0 = r0;
  rec.n_k = n_k;
  rec.purity = rho0.purity();
  rec.delta_k = bound.delta_k;
  rec.time_avg_c_l1 = bound.time_avg;
  rec.tau_min = bound.value;
  rec.degenerate = bound.degenerate;
  rec.tau = traj.tau();
  rec.is_optimal = optimal;
  rec.slack = rec.tau - rec.tau_min;
  return rec;
}

TrialRecord run_figure1_trial(const ExperimentConfig& cfg, int id) {
  CounterRng rng = CounterRng::substream(cfg.seed, static_cast<std::uint64_t>(id));
  const bool optimal = rng.uniform() < cfg.optimal_fraction;
  const BlochVector n_k = random_unit_vector(rng);
  const BlochVector r0 = random_ball_vector(rng);
  TrialRecord rec = simulate_qubit_trial(r0, n_k, optimal, cfg.tau, cfg.dt, rng);
  rec.id = id;
  rec.substream = rng.key();
  return rec;
}

Figure1Result run_figure1(const ExperimentConfig& cfg) {
  cfg.validate();
  Figure1Result result;
  result.config = cfg;
  result.records.resize(static_cast<std::size_t>(cfg.trials));
  const unsigned workers = cfg.workers == 0 ? default_worker_count() : cfg.workers;
  parallel_for(result.records.size(), workers, [&](std::size_t i) {
    result.records[i] = run_figure1_trial(cfg, static_cast<int>(i));
  });
  std::sort(result.records.begin(), result.records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.id < b.id; });
  return result;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_figure1_csv(std::ostream& out, const Figure1Result& result) {
  const auto& c = result.config;
  out << "# qslab figure1 csv v1\n";
  out << "# seed=" << c.seed << " trials=" << c.trials << " tau=" << num(c.tau)
      << " dt=" << num(c.dt) << " optimal_fraction=" << num(c.optimal_fraction) << "\n";
  out << "# initial_state_measure=uniform Bloch ball (normalized Gaussian direction, radius u^(1/3))\n";
  out << "# observable_axis_measure=uniform unit sphere\n";
  out << "# random_protocol=fresh uniform unit axis n_U per step; "
         "optimal_protocol=n_U = n_K x r_S(t) normalized, re-derived every step\n";
  out << "# rng=splitmix64 counter streams, trial i uses substream(seed, i)\n";
  out << "trial,substream,r0_x,r0_y,r0_z,nK_x,nK_y,nK_z,purity,delta_K,time_avg_c_l1,"
         "tau_min,tau,is_optimal,slack\n";
  for (const auto& r : result.records) {
    out << r.id << ',' << r.substream << ',' << num(r.r0.x) << ',' << num(r.r0.y) << ','
        << num(r.r0.z) << ',' << num(r.n_k.x) << ',' << num(r.n_k.y) << ',' << num(r.n_k.z)
        << ',' << num(r.purity) << ',' << num(r.delta_k) << ',' << num(r.time_avg_c_l1) << ','
        << num(r.tau_min) << ',' << num(r.tau) << ',' << (r.is_optimal ? 1 : 0) << ','
        << num(r.slack) << '\n';
  }
}

std::string figure1_csv(const Figure1Result& result) {
  std::ostringstream os;
  write_figure1_csv(os, result);
  return os.str();
}

}  // namespace qslab
