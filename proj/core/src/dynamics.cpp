#include "qslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qslab/error.hpp"
#include "qslab/quantify.hpp"
#include "qslab/sampling.hpp"
#include "qslab/tolerances.hpp"

namespace qslab {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

void require_unit_norm(const Observable& h) {
  if (std::abs(h.operator_norm() - 1.0) > tol::kUnitNorm) {
    throw Error(ErrorCode::InvalidArgument,
                "generator operator norm " + std::to_string(h.operator_norm()) + " != 1");
  }
}

class Recorder {
 public:
  Recorder(const Observable& k, std::size_t expected_nodes)
      : k_(k), kbasis_(OrthoBasis::eigenbasis(k)) {
    traj_.times.reserve(expected_nodes);
    traj_.states.reserve(expected_nodes);
  }

  void add(double t, const DensityMatrix& rho) {
    traj_.times.push_back(t);
    traj_.states.push_back(rho);
    traj_.asym.push_back(trace_norm_asymmetry(rho, k_));
    traj_.c_l1.push_back(c_l1(rho, kbasis_));
    traj_.exp_K.push_back(expectation(rho, k_));
    traj_.purity.push_back(rho.purity());
  }

  void add_speed(const DensityMatrix& rho, const Observable& h) {
    traj_.v_K.push_back(instantaneous_speed(rho, h, k_));
  }

  Trajectory finish() {
    traj_.time_avg_asym = trapezoid_average(traj_.times, traj_.asym);
    traj_.time_avg_c_l1 = trapezoid_average(traj_.times, traj_.c_l1);
    return std::move(traj_);
  }

 private:
  const Observable& k_;
  OrthoBasis kbasis_;
  Trajectory traj_;
};

DensityMatrix step_state(const DensityMatrix& rho, const Observable& h, double dt) {
  const ComplexMatrix u = mat_exp_hermitian_scaled(h.eigen(), cplx(0.0, -dt));
  const ComplexMatrix next = u * rho.mat() * u.adjoint();
  const double herm = next.hermiticity_defect();
  const double tr_err = std::abs(next.trace() - 1.0);
  if (herm > tol::kDrift || tr_err > tol::kDrift || !next.is_finite()) {
    throw Error(ErrorCode::ValidationDrift, "trace error " + std::to_string(tr_err) +
                                                ", hermiticity defect " + std::to_string(herm));
  }
  return unchecked_state(next.hermitian_part());
}

std::size_t step_count(double span, double dt) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));
}

}  // namespace

double instantaneous_speed(const DensityMatrix& rho, const Observable& h, const Observable& k) {
  require_same_dim(rho.dim(), h.dim(), "instantaneous_speed");
  require_same_dim(rho.dim(), k.dim(), "instantaneous_speed");
  // tr([H, rho] K) = tr(H [rho, K]); the commutator with K is formed once.
  return 0.5 * std::abs(trace_of_product(h.mat(), commutator(rho.mat(), k.mat())));
}

GeneratorProtocol::GeneratorProtocol(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw Error(ErrorCode::InvalidArgument, "protocol has no segments");
  const std::size_t d = segments_.front().h.dim();
  for (const auto& s : segments_) {
    require_same_dim(d, s.h.dim(), "protocol segment");
    require_unit_norm(s.h);
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      throw Error(ErrorCode::InvalidArgument, "segment duration must be positive");
    }
    total_time_ += s.duration;
  }
}

GeneratorProtocol::GeneratorProtocol(std::vector<Segment> segments, double tau)
    : GeneratorProtocol(std::move(segments)) {
  if (std::abs(total_time_ - tau) > 1e-12 * std::max(1.0, tau)) {
    throw Error(ErrorCode::InvalidArgument, "segment durations sum to " +
                                                std::to_string(total_time_) + ", tau is " +
                                                std::to_string(tau));
  }
}

GeneratorProtocol GeneratorProtocol::from_axes(std::span<const BlochVector> axes, double duration) {
  std::vector<Segment> segs;
  segs.reserve(axes.size());
  for (const auto& a : axes) segs.push_back({Observable::from_axis(a), duration});
  return GeneratorProtocol(std::move(segs));
}

double GeneratorProtocol::min_duration() const noexcept {
  double m = segments_.front().duration;
  for (const auto& s : segments_) m = std::min(m, s.duration);
  return m;
}

GeneratorProtocol GeneratorProtocol::then(const GeneratorProtocol& next) const {
  std::vector<Segment> all = segments_;
  all.insert(all.end(), next.segments_.begin(), next.segments_.end());
  return GeneratorProtocol(std::move(all));
}

double trapezoid_average(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw Error(ErrorCode::DimMismatch, "trapezoid samples");
  if (times.size() < 2) return values.empty() ? 0.0 : values.front();
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    integral += 0.5 * (values[i] + values[i + 1]) * (times[i + 1] - times[i]);
  const double span = times.back() - times.front();
  return span > 0.0 ? integral / span : values.front();
}

Trajectory evolve(const DensityMatrix& rho0, const GeneratorProtocol& protocol, double dt,
                  const Observable& k) {
  require_same_dim(rho0.dim(), protocol.dim(), "evolve");
  require_same_dim(rho0.dim(), k.dim(), "evolve");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (dt > protocol.min_duration() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::StepTooLarge, "dt " + std::to_string(dt) +
                                             " exceeds the shortest segment " +
                                             std::to_string(protocol.min_duration()));
  }
  std::size_t nodes = 1;
  for (const auto& s : protocol.segments()) nodes += step_count(s.duration, dt);

  Recorder rec(k, nodes);
  DensityMatrix rho = rho0;
  double t = 0.0;
  rec.add(t, rho);
  for (const auto& seg : protocol.segments()) {
    const std::size_t n = step_count(seg.duration, dt);
    const double h = seg.duration / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      rec.add_speed(rho, seg.h);
      rho = step_state(rho, seg.h, h);
      t += h;
      rec.add(t, rho);
    }
  }
  rec.add_speed(rho, protocol.segments().back().h);
  return rec.finish();
}

Trajectory evolve_adaptive(const DensityMatrix& rho0, double tau, double dt,
                           const GeneratorPolicy& policy, const Observable& k) {
  require_same_dim(rho0.dim(), k.dim(), "evolve_adaptive");
  if (!(dt > 0.0) || !(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau, dt must be > 0");
  if (dt > tau * (1.0 + 1e-12)) throw Error(ErrorCode::StepTooLarge, "dt exceeds tau");
  const std::size_t n = step_count(tau, dt);
  const double h = tau / static_cast<double>(n);

  Recorder rec(k, n + 1);
  DensityMatrix rho = rho0;
  rec.add(0.0, rho);
  for (std::size_t i = 0; i < n; ++i) {
    const Observable gen = policy(h * static_cast<double>(i), rho);
    require_same_dim(rho.dim(), gen.dim(), "policy generator");
    rec.add_speed(rho, gen);
    rho = step_state(rho, gen, h);
    rec.add(h * static_cast<double>(i + 1), rho);
    if (i + 1 == n) rec.add_speed(rho, gen);
  }
  return rec.finish();
}

Observable qubit_generator_in_frame(const Observable& k, double alpha, double beta, double h_plus,
                                    double h_minus) {
  if (k.dim() != 2) throw Error(ErrorCode::DimMismatch, "qubit generator needs a qubit observable");
  const auto kp = k.eigen().vectors.column(1);
  const auto km = k.eigen().vectors.column(0);
  const double c = std::cos(0.5 * alpha);
  const double s = std::sin(0.5 * alpha);
  const cplx e = std::polar(1.0, beta);
  std::vector<cplx> hp(2), hm(2);
  for (std::size_t i = 0; i < 2; ++i) {
    hp[i] = c * kp[i] + e * s * km[i];
    hm[i] = s * kp[i] - e * c * km[i];
  }
  ComplexMatrix m = ComplexMatrix::outer(hp, hp) * h_plus + ComplexMatrix::outer(hm, hm) * h_minus;
  return Observable(m.hermitian_part());
}

OptimalGenerator optimal_qubit_generator(const DensityMatrix& rho, const Observable& k) {
  if (rho.dim() != 2 || k.dim() != 2) {
    throw Error(ErrorCode::DimMismatch, "optimal_qubit_generator is defined for qubits");
  }
  const auto& vals = k.eigen().values;
  if (vals[1] - vals[0] <= tol::kDegenerate * std::max(1.0, k.operator_norm())) {
    throw Error(ErrorCode::DegenerateObservable, "k+ == k-");
  }
  const auto kp = k.eigen().vectors.column(1);
  const auto km = k.eigen().vectors.column(0);
  const cplx coherence = sandwich(kp, rho.mat(), km);
  OptimalGeneratorParams p;
  p.phi = std::abs(coherence) > 0.0 ? std::arg(coherence) : 0.0;
  p.alpha = 0.5 * std::numbers::pi;
  p.beta_angle = 0.5 * std::numbers::pi - p.phi;
  return {qubit_generator_in_frame(k, p.alpha, p.beta_angle, p.h_plus, p.h_minus), p};
}

BlochVector saturating_axis(const BlochVector& n_k, const BlochVector& r) {
  const BlochVector a = n_k.cross(r);
  const double n = a.norm();
  if (n > 1e-12) return a.scaled(1.0 / n);
  const BlochVector unit = n_k.normalized();
  for (const BlochVector& e : {BlochVector{1, 0, 0}, BlochVector{0, 1, 0}, BlochVector{0, 0, 1}}) {
    const BlochVector res = e - unit.scaled(e.dot(unit));
    if (res.norm() >= 0.5) return res.normalized();
  }
  return BlochVector{0, 0, 1};  // unreachable for a unit n_k
}

GeneratorPolicy saturating_qubit_policy(const BlochVector& n_k, double dt) {
  const BlochVector unit = n_k.normalized();
  return [unit, dt](double, const DensityMatrix& rho) {
    const BlochVector r = rho.bloch();
    const double len = r.norm();
    if (len <= 1e-12) return Observable::from_axis(unit);
    const BlochVector rhat = r.scaled(1.0 / len);
    const BlochVector target = unit.scaled(-1.0);
    // atan2 keeps tiny gaps accurate; acos loses half the digits near 1.
    const double gap = std::atan2(rhat.cross(target).norm(), rhat.dot(target));
    // Parked on -n_K: the commuting drive keeps it there (v_K = asym = 0).
    if (gap <= 1e-12) return Observable::from_axis(unit);
    const double step = 2.0 * dt;  // Bloch rotation angle of one unit-norm step
    if (dt <= 0.0 || gap >= step || step >= std::numbers::pi) {
      return Observable::from_axis(saturating_axis(unit, r));
    }
    // Final step: tilt the axis toward (rhat + target) so that a rotation by
    // `step` lands exactly on -n_K instead of overshooting it.
    const BlochVector a = rhat.cross(target).normalized();
    const BlochVector b = (rhat + target).normalized();
    const double rho_perp = std::sin(0.5 * gap) / std::sin(0.5 * step);
    const double sin_chi =
        std::sqrt(std::max(0.0, 1.0 - rho_perp * rho_perp)) / std::cos(0.5 * gap);
    const double chi = std::asin(std::clamp(sin_chi, -1.0, 1.0));
    return Observable::from_axis((a.scaled(std::cos(chi)) + b.scaled(std::sin(chi))).normalized());
  };
}

double v_qsl_numeric(const DensityMatrix& rho, const Observable& k, std::uint64_t seed,
                     int budget) {
  require_same_dim(rho.dim(), k.dim(), "v_qsl_numeric");
  if (rho.dim() == 2) {
    const auto& vals = k.eigen().values;
    if (vals[1] - vals[0] <= tol::kDegenerate * std::max(1.0, k.operator_norm())) return 0.0;
    return instantaneous_speed(rho, optimal_qubit_generator(rho, k).h, k);
  }
  if (budget < 1) throw Error(ErrorCode::InvalidConfig, "search budget must be >= 1");
  const std::size_t d = rho.dim();
  // v(H) = |tr(H C)| / 2 with C = [rho, K] fixed.
  const ComplexMatrix c = commutator(rho.mat(), k.mat());
  auto speed = [&](const ComplexMatrix& h) { return 0.5 * std::abs(trace_of_product(h, c)); };

  double best = 0.0;
  ComplexMatrix best_h = ComplexMatrix::identity(d);
  for (int i = 0; i < budget; ++i) {
    CounterRng rng = CounterRng::substream(seed, static_cast<std::uint64_t>(i));
    ComplexMatrix h = random_unit_hermitian(d, rng);
    const double v = speed(h);
    if (v > best) {
      best = v;
      best_h = std::move(h);
    }
  }
  double eps = 0.5;
  for (int i = 0; i < budget; ++i) {
    CounterRng rng = CounterRng::substream(seed, static_cast<std::uint64_t>(budget + i));
    ComplexMatrix trial = best_h + random_hermitian(d, rng) * eps;
    // Push the spectrum towards +-1 (sign refinement) and rescale to unit norm.
    const auto eig = herm_eig(trial.hermitian_part());
    const double n = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    if (n < 1e-12) continue;
    std::vector<cplx> vals(d);
    for (std::size_t j = 0; j < d; ++j) vals[j] = eig.values[j] / n;
    ComplexMatrix h = from_spectrum(eig, vals).hermitian_part();
    std::vector<cplx> signs(d);
    for (std::size_t j = 0; j < d; ++j) signs[j] = eig.values[j] >= 0.0 ? 1.0 : -1.0;
    ComplexMatrix hs = from_spectrum(eig, signs).hermitian_part();
    for (ComplexMatrix* cand : {&h, &hs}) {
      const double v = speed(*cand);
      if (v > best) {
        best = v;
        best_h = *cand;
        eps = std::min(1.0, eps * 1.3);
      }
    }
    eps = std::max(1e-6, eps * 0.9);
  }
  return best;
}

TimeBound tau_qsl(const Trajectory& traj, const Observable& k) {
  if (traj.size() < 2) throw Error(ErrorCode::EmptyTrajectory, "need at least two nodes");
  std::vector<double> asym(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) asym[i] = trace_norm_asymmetry(traj.states[i], k);
  TimeBound b;
  b.delta_k = std::abs(expectation(traj.states.back(), k) - expectation(traj.states.front(), k));
  b.time_avg = trapezoid_average(traj.times, asym);
  if (b.time_avg <= tol::kTau) {
    b.degenerate = true;
    return b;
  }
  b.value = b.delta_k / (2.0 * b.time_avg);
  return b;
}

TimeBound tau_min_qubit(const Trajectory& traj, const BlochVector& n_k) {
  if (traj.size() < 2) throw Error(ErrorCode::EmptyTrajectory, "need at least two nodes");
  if (traj.states.front().dim() != 2) throw Error(ErrorCode::DimMismatch, "qubit trajectory");
  const Observable k = Observable::from_axis(n_k);
  const OrthoBasis kb = OrthoBasis::eigenbasis(k);
  std::vector<double> coh(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) coh[i] = c_l1(traj.states[i], kb);
  TimeBound b;
  b.delta_k = std::abs(expectation(traj.states.back(), k) - expectation(traj.states.front(), k));
  b.time_avg = trapezoid_average(traj.times, coh);
  if (b.time_avg <= tol::kTau) {
    b.degenerate = true;
    return b;
  }
  b.value = 0.5 * b.delta_k / b.time_avg;
  return b;
}

Observable optimal_distinguishing_observable(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  require_same_dim(rho0.dim(), rho1.dim(), "optimal_distinguishing_observable");
  const auto eig = herm_eig(rho1.mat() - rho0.mat());
  std::vector<cplx> proj(eig.values.size());
  for (std::size_t i = 0; i < proj.size(); ++i) proj[i] = eig.values[i] > 1e-14 ? 1.0 : 0.0;
  return Observable(from_spectrum(eig, proj).hermitian_part());
}

}  // namespace qslab
