#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qslab/error.hpp"
#include "qslab/experiments.hpp"
#include "qslab/parallel.hpp"

namespace qslab {

namespace {

struct Accumulator {
  double sq_sum = 0.0;
  double coherence_sum = 0.0;
  double speed_sum = 0.0;
  double speed_sq_sum = 0.0;
  double speed_sq_residual = 0.0;
  double speed_coherence_gap = 0.0;
  double printed_residual = 0.0;

  void merge(const Accumulator& o) {
    sq_sum = std::max(sq_sum, o.sq_sum);
    coherence_sum = std::max(coherence_sum, o.coherence_sum);
    speed_sum = std::max(speed_sum, o.speed_sum);
    speed_sq_sum = std::max(speed_sq_sum, o.speed_sq_sum);
    speed_sq_residual = std::max(speed_sq_residual, o.speed_sq_residual);
    speed_coherence_gap = std::max(speed_coherence_gap, o.speed_coherence_gap);
    printed_residual = std::max(printed_residual, o.printed_residual);
  }
};

struct Probes {
  MubBases mub = mub_qubit_bases();
  Observable kx{pauli_x()};
  Observable ky{pauli_y()};
  Observable kz{pauli_z()};
};

struct SampleValues {
  double coherence[3];
  double speed[3];
};

SampleValues evaluate(const DensityMatrix& rho, const Probes& p) {
  SampleValues s{};
  s.coherence[0] = c_l1(rho, p.mub.x);
  s.coherence[1] = c_l1(rho, p.mub.y);
  s.coherence[2] = c_l1(rho, p.mub.z);
  const Observable* ks[3] = {&p.kx, &p.ky, &p.kz};
  for (int a = 0; a < 3; ++a) {
    const OptimalGenerator gen = optimal_qubit_generator(rho, *ks[a]);
    s.speed[a] = instantaneous_speed(rho, gen.h, *ks[a]);
  }
  return s;
}

}  // namespace

bool ComplementarityReport::sum_bound_ok() const {
  return max_coherence_sum <= std::sqrt(6.0) + 1e-9;
}

bool ComplementarityReport::special_ok() const {
  return std::abs(special_coherence_sum - std::sqrt(6.0)) <= 1e-9;
}

ComplementarityReport run_complementarity(std::size_t samples, std::uint64_t seed,
                                          unsigned workers) {
  if (samples < 1) throw Error(ErrorCode::InvalidConfig, "samples must be >= 1");
  const Probes probes;
  constexpr std::size_t chunk = 8192;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<Accumulator> partial(chunks);
  parallel_for(chunks, workers == 0 ? default_worker_count() : workers, [&](std::size_t c) {
    Accumulator acc;
    const std::size_t end = std::min(samples, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      CounterRng rng = CounterRng::substream(seed, i);
      const BlochVector r = random_ball_vector(rng);
      const DensityMatrix rho = DensityMatrix::from_bloch(r);
      const SampleValues s = evaluate(rho, probes);
      const double r2 = r.dot(r);
      const double purity = rho.purity();
      double c2 = 0.0, csum = 0.0, vsum = 0.0, v2 = 0.0, gap = 0.0;
      for (int a = 0; a < 3; ++a) {
        c2 += s.coherence[a] * s.coherence[a];
        csum += s.coherence[a];
        vsum += s.speed[a];
        v2 += s.speed[a] * s.speed[a];
        gap = std::max(gap, std::abs(s.speed[a] - s.coherence[a]));
      }
      acc.sq_sum = std::max(acc.sq_sum, std::abs(c2 - 2.0 * r2));
      acc.coherence_sum = std::max(acc.coherence_sum, csum);
      acc.speed_sum = std::max(acc.speed_sum, vsum);
      acc.speed_sq_sum = std::max(acc.speed_sq_sum, v2);
      acc.speed_sq_residual = std::max(acc.speed_sq_residual, std::abs(v2 - 2.0 * (2.0 * purity - 1.0)));
      acc.speed_coherence_gap = std::max(acc.speed_coherence_gap, gap);
      acc.printed_residual = std::max(acc.printed_residual, std::abs(vsum - 8.0 * (2.0 * purity - 1.0)));
    }
    partial[c] = acc;
  });
  Accumulator total;
  for (const auto& p : partial) total.merge(p);

  ComplementarityReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.max_sq_sum_residual = total.sq_sum;
  rep.max_coherence_sum = total.coherence_sum;
  rep.max_speed_sum = total.speed_sum;
  rep.max_speed_sq_sum = total.speed_sq_sum;
  rep.max_speed_sq_identity_residual = total.speed_sq_residual;
  rep.max_speed_coherence_gap = total.speed_coherence_gap;
  rep.max_printed_identity_residual = total.printed_residual;
  rep.printed_speed_sum_bound = 2.0 * std::sqrt(6.0);
  rep.printed_identity_holds = total.printed_residual < 1e-6;
  rep.printed_bound_tight = total.speed_sum >= rep.printed_speed_sum_bound - 1e-3;

  const double u = 1.0 / std::sqrt(3.0);
  const DensityMatrix special = DensityMatrix::from_bloch({u, u, u});
  const SampleValues sv = evaluate(special, probes);
  for (int a = 0; a < 3; ++a) rep.special_each[a] = sv.coherence[a];
  rep.special_coherence_sum = sv.coherence[0] + sv.coherence[1] + sv.coherence[2];
  return rep;
}

std::string format_complementarity(const ComplementarityReport& r) {
  std::ostringstream os;
  char buf[160];
  auto line = [&](const char* label, double v) {
    std::snprintf(buf, sizeof buf, "%-44s %.12g\n", label, v);
    os << buf;
  };
  os << "complementarity: samples=" << r.samples << " seed=" << r.seed << "\n";
  line("max |C_X^2+C_Y^2+C_Z^2 - 2|r|^2|", r.max_sq_sum_residual);
  os << "  sum C^2 = 2|r|^2 (< 1e-9): " << (r.sq_sum_ok() ? "PASS" : "FAIL") << "\n";
  line("max C_X+C_Y+C_Z", r.max_coherence_sum);
  line("sqrt(6)", std::sqrt(6.0));
  os << "  sum C <= sqrt6 (+1e-9): " << (r.sum_bound_ok() ? "PASS" : "FAIL") << "\n";
  line("C sum at r=(1,1,1)/sqrt3", r.special_coherence_sum);
  os << "  sum C = sqrt6 at r = (1,1,1)/sqrt3: " << (r.special_ok() ? "PASS" : "FAIL") << "\n";
  line("max |v_QSL^axis - C_axis|", r.max_speed_coherence_gap);
  line("max sum v_QSL (measured)", r.max_speed_sum);
  line("printed bound on sum v_QSL (2 sqrt6)", r.printed_speed_sum_bound);
  os << "  printed bound approached: " << (r.printed_bound_tight ? "yes" : "no (DISAGREES)")
     << "\n";
  line("max sum v_QSL^2 (measured)", r.max_speed_sq_sum);
  line("max |sum v^2 - 2(2P-1)|", r.max_speed_sq_identity_residual);
  os << "  measured identity sum v^2 = 2(2P-1) (< 1e-8): " << (r.internal_ok() ? "PASS" : "FAIL")
     << "\n";
  line("max |sum v - 8(2P-1)| (printed identity)", r.max_printed_identity_residual);
  os << "  printed identity holds: " << (r.printed_identity_holds ? "yes" : "no (DISAGREES)")
     << "\n";
  return os.str();
}

}  // namespace qslab
