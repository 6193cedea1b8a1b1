// One PASS/FAIL line per acceptance criterion. Exit status 0 only when all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "qslab/dynamics.hpp"
#include "qslab/experiments.hpp"
#include "qslab/parallel.hpp"
#include "qslab/quantify.hpp"
#include "qslab/sampling.hpp"

using namespace qslab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Line {
  int id;
  bool pass;
  std::string text;
};

std::vector<Line> g_lines;

void report(int id, bool pass, const char* fmt, double a = 0, double b = 0, double c = 0,
            double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  std::printf("AC%-2d %s  %s\n", id, pass ? "PASS" : "FAIL", buf);
  std::fflush(stdout);
  g_lines.push_back({id, pass, buf});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Worst value across slots, reduced after the parallel loop so the result is
// independent of scheduling.
double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

const BasisOptimizerConfig kSweepOptimizer = VerifyConfig{}.optimizer;

void ac1_chain() {
  constexpr std::size_t n = 10000;
  double worst = 1.0;
  std::string worst_name;
  int violations = 0;
  for (std::size_t d = 2; d <= 4; ++d) {
    std::vector<double> margin(n);
    std::vector<std::string> name(n);
    parallel_for(n, default_worker_count(), [&](std::size_t i) {
      CounterRng rng = CounterRng::substream(1001 + d, i);
      const DensityMatrix rho = (i % 4 == 0) ? random_pure_state(d, rng) : random_density(d, rng);
      const Observable k(random_hermitian(d, rng));
      const Observable h(random_unit_hermitian(d, rng));
      const BoundReport r = bound_report(rho, k, h, kSweepOptimizer);
      margin[i] = r.min_slack();
      name[i] = r.worst_slack_name();
    });
    for (std::size_t i = 0; i < n; ++i) {
      if (margin[i] < -1e-9) ++violations;
      if (margin[i] < worst) {
        worst = margin[i];
        worst_name = name[i];
      }
    }
  }
  std::string fmt = "inequality chain, 3x10^4 instances d=2..4: violations=%.0f worst slack=%.3e (" +
                    worst_name + ")";
  report(1, violations == 0, fmt.c_str(), violations, worst);
}

void ac2_tightness() {
  constexpr std::size_t n = 10000;
  std::vector<double> gap(n);
  parallel_for(n, default_worker_count(), [&](std::size_t i) {
    CounterRng rng = CounterRng::substream(2002, i);
    const DensityMatrix rho = random_density(2, rng);
    const Observable k(random_hermitian(2, rng));
    const auto g = optimal_qubit_generator(rho, k);
    gap[i] = std::abs(instantaneous_speed(rho, g.h, k) - trace_norm_asymmetry(rho, k));
  });
  const double max_gap = max_of(gap);

  // Brute (alpha, beta) grid at one-degree resolution.
  constexpr std::size_t pairs = 50;
  std::vector<double> over(pairs), under(pairs);
  parallel_for(pairs, default_worker_count(), [&](std::size_t p) {
    CounterRng rng = CounterRng::substream(2003, p);
    const DensityMatrix rho = random_density(2, rng);
    const Observable k(random_hermitian(2, rng));
    const double v_opt = instantaneous_speed(rho, optimal_qubit_generator(rho, k).h, k);
    double best = 0.0;
    for (int a = 0; a <= 180; ++a)
      for (int b = 0; b < 360; ++b) {
        const Observable h = qubit_generator_in_frame(k, a * kPi / 180.0, b * kPi / 180.0);
        best = std::max(best, instantaneous_speed(rho, h, k));
      }
    over[p] = best - v_opt;
    const double c = std::cos(kPi / 360.0);
    under[p] = best - v_opt * c * c;
  });
  const bool pass = max_gap <= 1e-9 && max_of(over) <= 1e-9 && min_of(under) >= -1e-12;
  report(2, pass,
         "optimal generator, 10^4 qubit pairs: max |v_K - asym|=%.3e; 181x360 grid on 50 pairs: "
         "max(grid - analytic)=%.3e, min(grid - analytic*cos^2(0.5deg))=%.3e",
         max_gap, max_of(over), min_of(under));
}

void ac3_pure() {
  constexpr std::size_t n = 10000;
  double worst_sd = 0.0, worst_qfi = 0.0;
  for (std::size_t d = 2; d <= 4; ++d) {
    std::vector<double> sd(n), qf(n);
    parallel_for(n, default_worker_count(), [&](std::size_t i) {
      CounterRng rng = CounterRng::substream(3000 + d, i);
      const DensityMatrix rho = random_pure_state(d, rng);
      const Observable k(random_hermitian(d, rng));
      const double a = trace_norm_asymmetry(rho, k);
      sd[i] = std::abs(a - std::sqrt(std::max(0.0, variance(rho, k))));
      qf[i] = std::abs(std::sqrt(qfi(rho, k)) / 2.0 - a);
    });
    worst_sd = std::max(worst_sd, max_of(sd));
    worst_qfi = std::max(worst_qfi, max_of(qf));
  }
  report(3, worst_sd <= 1e-8 && worst_qfi <= 1e-8,
         "pure states, 10^4 per d=2..4: max |asym - stddev_K|=%.3e, max |sqrt(qfi)/2 - asym|=%.3e",
         worst_sd, worst_qfi);
}

void ac4_qubit_coherence() {
  constexpr std::size_t n = 1000;
  std::vector<double> kd(n), l1(n);
  const BasisOptimizerConfig cfg;
  parallel_for(n, default_worker_count(), [&](std::size_t i) {
    CounterRng rng = CounterRng::substream(4004, i);
    const DensityMatrix rho = DensityMatrix::from_bloch(random_ball_vector(rng));
    const Observable k = Observable::from_axis(random_unit_vector(rng));
    const OrthoBasis kb = OrthoBasis::eigenbasis(k);
    const double a = trace_norm_asymmetry(rho, k);
    kd[i] = std::abs(a - c_kd_nonreality(rho, kb, cfg));
    l1[i] = std::abs(a - c_l1(rho, kb));
  });
  report(4, max_of(kd) <= 1e-6 && max_of(l1) <= 1e-6,
         "qubit coherences, 10^3 states: max |asym - C_KD|=%.3e, max |asym - C_l1|=%.3e", max_of(kd),
         max_of(l1));
}

void ac5_figure1() {
  ExperimentConfig cfg;  // 2000 trials, seed 42, tau 1, dt 1e-3
  const auto t0 = std::chrono::steady_clock::now();
  const Figure1Result a = run_figure1(cfg);
  const double elapsed = seconds_since(t0);
  ExperimentConfig serial = cfg;
  serial.workers = 1;
  const Figure1Result b = run_figure1(serial);
  const bool identical = figure1_csv(a) == figure1_csv(b);
  const int violations = a.violations();
  const int saturated = a.saturated_optimal(0.99);
  const bool pass = violations == 0 && saturated >= 200 && identical && elapsed <= 60.0;
  report(5, pass,
         "minimum-time scatter, 2000 trials: violations=%.0f saturated optimal=%.0f "
         "csv identical across reruns=%.0f runtime=%.1fs",
         violations, saturated, identical ? 1 : 0, elapsed);
}

void ac6_mub_coherence() {
  const auto r = run_complementarity(10000, 6006);
  report(6, r.sq_sum_ok() && r.sum_bound_ok() && r.special_ok(),
         "MUB coherences, 10^4 samples: max |sum C^2 - 2|r|^2|=%.3e, max sum C=%.12f (sqrt6=%.12f), "
         "special state sum=%.12f",
         r.max_sq_sum_residual, r.max_coherence_sum, std::sqrt(6.0), r.special_coherence_sum);
}

void ac7_speed_sum() {
  const auto r = run_complementarity(1000000, 7);
  report(7, r.internal_ok(),
         (std::string("speed sums, 10^6 samples: |sum v^2 - 2(2P-1)| max=%.3e; max sum v=%.6f vs "
                      "printed 2sqrt6=%.6f; max |sum v - 8(2P-1)|=%.3f (printed identity ") +
          (r.printed_identity_holds ? "holds)" : "does not hold)"))
             .c_str(),
         r.max_speed_sq_identity_residual, r.max_speed_sum, r.printed_speed_sum_bound,
         r.max_printed_identity_residual);
}

void ac8_thermo() {
  constexpr std::size_t n = 1000;
  std::vector<double> slack(n), lin(n);
  parallel_for(n, default_worker_count(), [&](std::size_t i) {
    CounterRng rng = CounterRng::substream(8008, i);
    const DensityMatrix rho0 = DensityMatrix::from_bloch(random_ball_vector(rng));
    const Observable hb(random_hermitian(2, rng));
    const double beta = 0.05 + 4.95 * rng.uniform();
    std::vector<Segment> segs;
    for (int s = 0; s < 3; ++s)
      segs.push_back(Segment{Observable::from_axis(random_unit_vector(rng)), 0.1 + 0.2 * rng.uniform()});
    const auto r = run_thermo(rho0, hb, beta, GeneratorProtocol(std::move(segs)), 1e-3);
    slack[i] = r.min_slack;
    lin[i] = r.linearity_residual;
  });
  const int violations =
      static_cast<int>(std::count_if(slack.begin(), slack.end(), [](double s) { return s < -1e-9; }));
  report(8, violations == 0 && max_of(lin) <= 1e-9,
         "thermodynamic limit, 10^3 qubit runs: node violations=%.0f min slack=%.3e "
         "max linearity residual=%.3e",
         violations, min_of(slack), max_of(lin));
}

void ac9_finite_difference() {
  constexpr int runs = 100;
  std::vector<double> ratios;
  for (std::uint64_t t = 0; static_cast<int>(ratios.size()) < runs; ++t) {
    CounterRng rng = CounterRng::substream(9009, t);
    const auto rho = DensityMatrix::from_bloch(random_ball_vector(rng));
    const Observable h = Observable::from_axis(random_unit_vector(rng));
    const Observable k = Observable::from_axis(random_unit_vector(rng));
    const double v = instantaneous_speed(rho, h, k);
    if (v < 1e-2) continue;  // error ratio is meaningless near a stationary point
    double err[2];
    const double steps[2] = {1e-3, 1e-4};
    for (int s = 0; s < 2; ++s) {
      const auto up = mat_exp_hermitian_scaled(h.mat(), cplx(0, -steps[s]));
      const auto down = up.adjoint();
      const DensityMatrix plus((up * rho.mat() * up.adjoint()).hermitian_part());
      const DensityMatrix minus((down * rho.mat() * down.adjoint()).hermitian_part());
      const double fd = std::abs(expectation(plus, k) - expectation(minus, k)) / (2.0 * steps[s]);
      err[s] = std::abs(fd - 2.0 * v);
    }
    ratios.push_back(err[0] / err[1]);
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  report(9, lo >= 80.0 && hi <= 120.0,
         "finite differences, 100 qubit runs: error ratio for dt/10 in [%.2f, %.2f]", lo, hi);
}

void ac10_weak_values() {
  constexpr std::size_t n = 1000;
  std::vector<double> eq(n), ub(n);
  const BasisOptimizerConfig cfg;
  parallel_for(n, default_worker_count(), [&](std::size_t i) {
    CounterRng rng = CounterRng::substream(10010, i);
    const DensityMatrix rho = random_density(2, rng);
    const Observable k(random_hermitian(2, rng));
    eq[i] = std::abs(asymmetry_via_weak_values(rho, k, cfg) - trace_norm_asymmetry(rho, k));
  });
  parallel_for(n, default_worker_count(), [&](std::size_t i) {
    CounterRng rng = CounterRng::substream(10011, i);
    const DensityMatrix rho = random_density(3, rng);
    const Observable k(random_hermitian(3, rng));
    ub[i] = asymmetry_via_weak_values(rho, k, kSweepOptimizer) - trace_norm_asymmetry(rho, k);
  });
  report(10, max_of(eq) <= 1e-6 && max_of(ub) <= 1e-9,
         "weak-value optimizer, 10^3 states: d=2 max |opt - asym|=%.3e; d=3 max (opt - asym)=%.3e",
         max_of(eq), max_of(ub));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  void (*const criteria[])() = {ac1_chain,        ac2_tightness,  ac3_pure,   ac4_qubit_coherence,
                                ac5_figure1,      ac6_mub_coherence, ac7_speed_sum, ac8_thermo,
                                ac9_finite_difference, ac10_weak_values};
  for (auto* c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      const int id = static_cast<int>(g_lines.size()) + 1;
      std::printf("AC%-2d FAIL  exception: %s\n", id, e.what());
      g_lines.push_back({id, false, e.what()});
    }
  }
  const auto failed = std::count_if(g_lines.begin(), g_lines.end(), [](const Line& l) { return !l.pass; });
  std::printf("acceptance: %zu/%zu passed in %.1fs\n", g_lines.size() - static_cast<std::size_t>(failed),
              g_lines.size(), seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
