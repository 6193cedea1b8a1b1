#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "qslab/error.hpp"
#include "qslab/experiments.hpp"
#include "qslab/parallel.hpp"

namespace qslab {

namespace {

constexpr double kChainTol = 1e-9;
constexpr double kPureTol = 1e-8;
constexpr double kQubitTol = 1e-6;
constexpr double kSaturationTol = 1e-9;
constexpr double kTauRelTol = 1e-6;
constexpr double kAdversarialTol = 1e-9;
constexpr std::size_t kMaxReproducers = 10;

// One evaluated case: the smallest margin (negative means the assertion
// failed by that much) and a short description of the offending quantity.
struct Outcome {
  double margin = std::numeric_limits<double>::infinity();
  bool violated = false;
  std::string what;

  // lhs >= rhs - tol
  void at_least(const char* name, double lhs, double rhs, double tol) {
    record(name, lhs - rhs, lhs - rhs < -tol);
  }
  // |a - b| <= tol
  void equal(const char* name, double a, double b, double tol) {
    const double gap = std::abs(a - b);
    record(name, -gap, !(gap <= tol));
  }

 private:
  void record(const char* name, double m, bool bad) {
    if (bad && !violated) {
      violated = true;
      what = name;
    }
    if (m < margin) {
      margin = m;
      if (!violated) what = name;
    }
  }
};

using CaseFn = std::function<Outcome(std::size_t dim, CounterRng& rng, const VerifyConfig& cfg)>;

struct CheckSpec {
  const char* name;
  bool qubit_only;
  CaseFn run;
};

DensityMatrix chain_state(std::size_t dim, CounterRng& rng, bool pure) {
  return pure ? random_pure_state(dim, rng) : random_density(dim, rng);
}

Outcome check_chain(std::size_t dim, CounterRng& rng, const VerifyConfig& cfg) {
  const bool pure = rng.uniform() < 0.25;
  const DensityMatrix rho = chain_state(dim, rng, pure);
  const Observable k(random_hermitian(dim, rng));
  const Observable h(random_hermitian(dim, rng));
  const BoundReport r = bound_report(rho, k, h, cfg.optimizer);
  Outcome o;
  for (const auto& [name, value] : r.slacks) o.at_least(name.c_str(), value, 0.0, kChainTol);
  o.at_least("weakval<=asym", r.asym, r.weakval_bound, kChainTol);
  return o;
}

Outcome check_weak_value(std::size_t dim, CounterRng& rng, const VerifyConfig& cfg) {
  const DensityMatrix rho = random_density(dim, rng);
  const Observable k(random_hermitian(dim, rng));
  const double asym = trace_norm_asymmetry(rho, k);
  const double wv = asymmetry_via_weak_values(rho, k, cfg.optimizer);
  Outcome o;
  if (dim == 2) {
    o.equal("weakval=asym", wv, asym, kQubitTol);
  } else {
    o.at_least("weakval<=asym", asym, wv, kChainTol);
  }
  return o;
}

Outcome check_pure(std::size_t dim, CounterRng& rng, const VerifyConfig&) {
  const DensityMatrix rho = random_pure_state(dim, rng);
  const Observable k(random_hermitian(dim, rng));
  const double asym = trace_norm_asymmetry(rho, k);
  Outcome o;
  o.equal("asym=stddev_K", asym, std::sqrt(variance(rho, k)), kPureTol);
  o.equal("sqrt(qfi)/2=asym", 0.5 * std::sqrt(qfi(rho, k)), asym, kPureTol);
  return o;
}

Outcome check_qubit_equalities(std::size_t, CounterRng& rng, const VerifyConfig& cfg) {
  const DensityMatrix rho = random_density(2, rng);
  const Observable k = Observable::from_axis(random_unit_vector(rng));
  const OrthoBasis kb = OrthoBasis::eigenbasis(k);
  const double asym = trace_norm_asymmetry(rho, k);
  Outcome o;
  o.equal("asym=c_kd", asym, c_kd_nonreality(rho, kb, cfg.optimizer), kQubitTol);
  o.equal("asym=c_l1", asym, c_l1(rho, kb), kQubitTol);
  return o;
}

Outcome check_saturation(std::size_t dim, CounterRng& rng, const VerifyConfig&) {
  const DensityMatrix rho = random_density(dim, rng);
  const Observable k(random_hermitian(dim, rng));
  const double asym = trace_norm_asymmetry(rho, k);
  Outcome o;
  if (dim == 2) {
    const OptimalGenerator g = optimal_qubit_generator(rho, k);
    o.equal("v_opt=asym", instantaneous_speed(rho, g.h, k), asym, kSaturationTol);
  } else {
    const std::uint64_t seed = rng();
    o.at_least("v_qsl<=asym", asym, v_qsl_numeric(rho, k, seed, 64), kChainTol);
  }
  return o;
}

Outcome check_tau(std::size_t dim, CounterRng& rng, const VerifyConfig&) {
  const DensityMatrix rho0 = random_density(dim, rng);
  std::vector<Segment> segs;
  for (int s = 0; s < 3; ++s) {
    Observable h(random_unit_hermitian(dim, rng));
    segs.push_back(Segment{std::move(h), 0.1 + 0.1 * rng.uniform()});
  }
  const GeneratorProtocol protocol(std::move(segs));
  const double tau = protocol.total_time();
  Outcome o;
  if (dim == 2) {
    const BlochVector n = random_unit_vector(rng);
    const Observable k = Observable::from_axis(n);
    const Trajectory traj = evolve(rho0, protocol, 1e-3, k);
    const TimeBound q = tau_qsl(traj, k);
    const TimeBound m = tau_min_qubit(traj, n);
    o.at_least("tau>=tau_qsl", tau, q.value, kTauRelTol * tau);
    o.at_least("tau>=tau_min", tau, m.value, kTauRelTol * tau);
  } else {
    const Observable k(random_hermitian(dim, rng));
    const Trajectory traj = evolve(rho0, protocol, 1e-3, k);
    o.at_least("tau>=tau_qsl", tau, tau_qsl(traj, k).value, kTauRelTol * tau);
  }
  return o;
}

// [rho, K] = 0: rho is a function of K, so every quantity must vanish.
Outcome check_commuting(std::size_t dim, CounterRng& rng, const VerifyConfig& cfg) {
  const Observable k(random_hermitian(dim, rng));
  std::vector<cplx> weights(dim);
  double total = 0.0;
  for (auto& w : weights) {
    w = 0.05 + rng.uniform();
    total += w.real();
  }
  for (auto& w : weights) w /= total;
  const DensityMatrix rho(from_spectrum(k.eigen(), weights).hermitian_part());
  const Observable h(random_hermitian(dim, rng));
  const BoundReport r = bound_report(rho, k, h, cfg.optimizer);
  Outcome o;
  o.equal("v_K=0", r.v_K, 0.0, kAdversarialTol);
  o.equal("asym=0", r.asym, 0.0, kAdversarialTol);
  o.equal("weakval=0", r.weakval_bound, 0.0, kAdversarialTol);
  o.equal("qfi=0", r.qfi, 0.0, kAdversarialTol);
  o.equal("c_kd=0", r.c_kd_nre, 0.0, kAdversarialTol);
  o.equal("c_l1=0", r.c_l1, 0.0, kAdversarialTol);
  return o;
}

const std::vector<CheckSpec>& checks() {
  static const std::vector<CheckSpec> list = {
      {"chain", false, check_chain},
      {"weak-value", false, check_weak_value},
      {"pure-state", false, check_pure},
      {"qubit-equalities", true, check_qubit_equalities},
      {"saturation", false, check_saturation},
      {"tau-bounds", false, check_tau},
      {"commuting", false, check_commuting},
  };
  return list;
}

std::uint64_t stream_key(std::uint64_t seed, std::size_t dim, std::size_t check, std::size_t i) {
  const std::uint64_t family = CounterRng::substream_key(seed, dim * 64 + check);
  return CounterRng::substream_key(family, i);
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.violations == 0; });
}

VerifyReport run_verify(const VerifyConfig& cfg) {
  if (cfg.cases < 1) throw Error(ErrorCode::InvalidConfig, "cases must be >= 1");
  if (cfg.dims.empty()) throw Error(ErrorCode::InvalidConfig, "dims must not be empty");
  for (int d : cfg.dims) {
    if (d < 2 || d > 4) throw Error(ErrorCode::InvalidConfig, "dims must be a subset of {2,3,4}");
  }
  cfg.optimizer.validate();
  const unsigned workers = cfg.workers == 0 ? default_worker_count() : cfg.workers;

  VerifyReport report;
  const auto& list = checks();
  for (int d : cfg.dims) {
    const auto dim = static_cast<std::size_t>(d);
    for (std::size_t c = 0; c < list.size(); ++c) {
      const CheckSpec& spec = list[c];
      if (spec.qubit_only && dim != 2) continue;
      std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.cases));
      parallel_for(outcomes.size(), workers, [&](std::size_t i) {
        CounterRng rng(stream_key(cfg.seed, dim, c, i));
        try {
          outcomes[i] = spec.run(dim, rng, cfg);
        } catch (const Error& e) {
          Outcome o;
          o.margin = -std::numeric_limits<double>::infinity();
          o.violated = true;
          o.what = std::string("error: ") + e.what();
          outcomes[i] = o;
        }
      });
      CheckResult res;
      res.name = spec.name;
      res.dim = d;
      res.cases = cfg.cases;
      res.worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Outcome& o = outcomes[i];
        res.worst = std::min(res.worst, o.margin);
        if (!o.violated) continue;
        ++res.violations;
        if (res.failures.size() < kMaxReproducers) {
          char buf[256];
          std::snprintf(buf, sizeof buf,
                        "check=%s dim=%d case=%zu seed=%" PRIu64 " stream=0x%016" PRIx64
                        " what=%s margin=%.3e",
                        spec.name, d, i, cfg.seed, stream_key(cfg.seed, dim, c, i),
                        o.what.c_str(), o.margin);
          res.failures.emplace_back(buf);
        }
      }
      report.checks.push_back(std::move(res));
    }
  }
  return report;
}

std::string format_verify(const VerifyReport& r) {
  std::ostringstream os;
  char buf[200];
  for (const auto& c : r.checks) {
    std::snprintf(buf, sizeof buf, "%-18s d=%d cases=%-6d violations=%-4d worst margin=%.3e  %s\n",
                  c.name.c_str(), c.dim, c.cases, c.violations, c.worst,
                  c.violations == 0 ? "PASS" : "FAIL");
    os << buf;
    for (const auto& f : c.failures) os << "    reproduce: " << f << "\n";
  }
  os << "verify: " << (r.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace qslab
