#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qslab/linalg.hpp"
#include "qslab/qstate.hpp"

namespace qslab {

/// v_K = |tr([H, rho] K)| / 2 for drho/dt = -i[H, rho].
double instantaneous_speed(const DensityMatrix& rho, const Observable& h, const Observable& k);

struct Segment {
  Observable h;  // ||h||_inf == 1
  double duration;
};

// Piecewise-constant generator; segments apply in order (time-ordered product
// composes right to left: U = U_n ... U_1).
class GeneratorProtocol {
 public:
  explicit GeneratorProtocol(std::vector<Segment> segments);
  /// Also checks that the durations add up to tau within 1e-12.
  GeneratorProtocol(std::vector<Segment> segments, double tau);

  /// One segment per axis, each lasting `duration`.
  static GeneratorProtocol from_axes(std::span<const BlochVector> axes, double duration);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double total_time() const noexcept { return total_time_; }
  std::size_t dim() const noexcept { return segments_.front().h.dim(); }
  double min_duration() const noexcept;

  GeneratorProtocol then(const GeneratorProtocol& next) const;

 private:
  std::vector<Segment> segments_;
  double total_time_ = 0.0;
};

// Picks the generator for the step that starts at time t in state rho.
using GeneratorPolicy = std::function<Observable(double t, const DensityMatrix& rho)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<double> v_K;     // speed under the generator active from this node on
  std::vector<double> asym;    // ||[rho, K]||_1 / 2
  std::vector<double> c_l1;    // relative to K's eigenbasis
  std::vector<double> exp_K;
  std::vector<double> purity;
  double time_avg_asym = 0.0;  // trapezoid rule
  double time_avg_c_l1 = 0.0;

  std::size_t size() const noexcept { return times.size(); }
  double tau() const noexcept { return times.empty() ? 0.0 : times.back() - times.front(); }
  const DensityMatrix& final_state() const { return states.back(); }
};

// Trapezoid time average of samples on the node grid.
double trapezoid_average(std::span<const double> times, std::span<const double> values);

/// Evolves rho0 through the protocol with steps no longer than dt and records
/// node quantities for the probe observable K. StepTooLarge when dt exceeds
/// the shortest segment; ValidationDrift when trace or hermiticity drift
/// beyond tol::kDrift.
Trajectory evolve(const DensityMatrix& rho0, const GeneratorProtocol& protocol, double dt,
                  const Observable& k);

/// Same integrator, but the generator of each step is chosen from the current
/// state. ceil(tau / dt) equal steps.
Trajectory evolve_adaptive(const DensityMatrix& rho0, double tau, double dt,
                           const GeneratorPolicy& policy, const Observable& k);

struct OptimalGeneratorParams {
  double alpha = 0.0;
  double beta_angle = 0.0;
  double phi = 0.0;
  double h_plus = 1.0;
  double h_minus = -1.0;
};

struct OptimalGenerator {
  Observable h;
  OptimalGeneratorParams params;
};

/// Saturating qubit generator in K's eigenframe: alpha = pi/2,
/// beta = pi/2 - phi with phi = arg<k+|rho|k->, eigenvalues +-1.
/// DegenerateObservable when k+ == k-; phi = 0 when <k+|rho|k-> == 0.
OptimalGenerator optimal_qubit_generator(const DensityMatrix& rho, const Observable& k);

/// Generator h(alpha, beta) with eigenvalues (h_plus, h_minus) in K's eigenframe.
Observable qubit_generator_in_frame(const Observable& k, double alpha, double beta,
                                    double h_plus = 1.0, double h_minus = -1.0);

/// n_K x r normalized; when r is parallel to n_K the first coordinate axis whose
/// component orthogonal to n_K has norm >= 1/2 is used.
BlochVector saturating_axis(const BlochVector& n_k, const BlochVector& r);
/// Adaptive policy n_K x r_S(t). With dt > 0 the step that would carry r_S
/// past -n_K uses a tilted axis landing on it, and the state is then held by
/// the commuting drive n_K.sigma; dt = 0 gives the bare instantaneous axis.
GeneratorPolicy saturating_qubit_policy(const BlochVector& n_k, double dt = 0.0);

/// sup over ||H||_inf = 1 of v_K. Exact for qubits; for d > 2 a seeded search
/// (`budget` random unit-norm Hermitians plus `budget` greedy refinements)
/// that returns a lower bound.
double v_qsl_numeric(const DensityMatrix& rho, const Observable& k, std::uint64_t seed,
                     int budget);

struct TimeBound {
  double value = 0.0;
  bool degenerate = false;  // time-averaged denominator below TAU_EPS
  double delta_k = 0.0;
  double time_avg = 0.0;
};

/// Delta K_tau / (2 * time-averaged asymmetry).
TimeBound tau_qsl(const Trajectory& traj, const Observable& k);

/// (|<n_K.sigma>_tau - <n_K.sigma>_0| / 2) / time-averaged C_l1 in n_K.sigma's eigenbasis.
TimeBound tau_min_qubit(const Trajectory& traj, const BlochVector& n_k);

/// Projector onto the positive eigenspace of rho1 - rho0; the zero matrix when
/// the states coincide.
Observable optimal_distinguishing_observable(const DensityMatrix& rho0, const DensityMatrix& rho1);

}  // namespace qslab
