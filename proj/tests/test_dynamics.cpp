#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qslab/dynamics.hpp"
#include "qslab/error.hpp"
#include "qslab/quantify.hpp"
#include "qslab/sampling.hpp"

using namespace qslab;

namespace {

constexpr double kPi = std::numbers::pi;
const double kS = 1.0 / std::sqrt(2.0);
const std::vector<cplx> x_plus{kS, kS};
const std::vector<cplx> z_plus{1.0, 0.0};
const std::vector<cplx> z_minus{0.0, 1.0};

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

GeneratorProtocol single(const ComplexMatrix& h, double duration) {
  std::vector<Segment> s;
  s.push_back(Segment{Observable(h), duration});
  return GeneratorProtocol(std::move(s));
}

GeneratorProtocol random_protocol(std::size_t d, int segments, CounterRng& rng) {
  std::vector<Segment> s;
  for (int i = 0; i < segments; ++i)
    s.push_back(Segment{Observable(random_unit_hermitian(d, rng)), 0.1 + 0.2 * rng.uniform()});
  return GeneratorProtocol(std::move(s));
}

}  // namespace

TEST(Speed, Examples) {
  const auto rho = DensityMatrix::pure(x_plus);
  const Observable sx(pauli_x()), sy(pauli_y()), sz(pauli_z());
  EXPECT_NEAR(instantaneous_speed(rho, sx, sz), 0.0, 1e-15);  // [H, rho] = 0
  EXPECT_NEAR(instantaneous_speed(rho, sz, sy), 1.0, 1e-15);
  EXPECT_NEAR(instantaneous_speed(rho, sz, sx), 0.0, 1e-15);
  EXPECT_EQ(code_of([&] { instantaneous_speed(DensityMatrix::maximally_mixed(3), sz, sx); }),
            ErrorCode::DimMismatch);
}

TEST(Speed, CyclicFormsAgreeAndBoundedByAsymmetry) {
  for (std::size_t d = 2; d <= 4; ++d)
    for (int t = 0; t < 50; ++t) {
      CounterRng rng = CounterRng::substream(50 + d, static_cast<std::uint64_t>(t));
      const auto rho = random_density(d, rng);
      const Observable h(random_unit_hermitian(d, rng)), k(random_hermitian(d, rng));
      const double v = instantaneous_speed(rho, h, k);
      const double alt = 0.5 * std::abs(trace_of_product(h.mat(), commutator(rho.mat(), k.mat())));
      EXPECT_NEAR(v, alt, 1e-10);
      EXPECT_LE(v, trace_norm_asymmetry(rho, k) + 1e-9);
    }
}

TEST(Protocol, Validation) {
  EXPECT_EQ(code_of([] { GeneratorProtocol(std::vector<Segment>{}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { single(pauli_x() * 2.0, 1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { single(pauli_x(), 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] {
              std::vector<Segment> s;
              s.push_back(Segment{Observable(pauli_x()), 0.5});
              GeneratorProtocol(std::move(s), 0.6);
            }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] {
              std::vector<Segment> s;
              s.push_back(Segment{Observable(pauli_x()), 0.5});
              s.push_back(Segment{Observable(ComplexMatrix::identity(3)), 0.5});
              GeneratorProtocol p(std::move(s));
            }),
            ErrorCode::DimMismatch);
}

TEST(Evolve, StationaryTrajectory) {
  const std::vector<double> w{0.3, 0.7};
  const DensityMatrix rho(ComplexMatrix::diagonal(w));
  const auto traj = evolve(rho, single(pauli_z(), 0.5), 1e-2, Observable(pauli_x()));
  for (const auto& s : traj.states) EXPECT_LT(max_abs_diff(s.mat(), rho.mat()), 1e-14);
  for (double v : traj.v_K) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Evolve, RabiHalfPeriod) {
  const auto traj =
      evolve(DensityMatrix::pure(z_plus), single(pauli_x(), kPi / 2.0), 1e-3, Observable(pauli_z()));
  EXPECT_LT(max_abs_diff(traj.final_state().mat(), DensityMatrix::pure(z_minus).mat()), 1e-12);
  EXPECT_NEAR(traj.tau(), kPi / 2.0, 1e-12);
}

TEST(Evolve, MatchesExactPropagatorAndPreservesPurity) {
  for (std::size_t d = 2; d <= 4; ++d) {
    CounterRng rng = CounterRng::substream(51, d);
    const auto rho0 = random_density(d, rng);
    const ComplexMatrix h = random_unit_hermitian(d, rng);
    const double tau = 0.73;
    const auto traj = evolve(rho0, single(h, tau), 1e-2, Observable(random_hermitian(d, rng)));
    const auto u = oracle::expm(h, cplx(0.0, -tau));
    EXPECT_LT(max_abs_diff(traj.final_state().mat(), u * rho0.mat() * u.adjoint()), 1e-10);
    for (double p : traj.purity) EXPECT_NEAR(p, rho0.purity(), 1e-8);
  }
}

TEST(Evolve, NodeSpeedNeverExceedsAsymmetry) {
  for (int t = 0; t < 20; ++t) {
    CounterRng rng = CounterRng::substream(52, static_cast<std::uint64_t>(t));
    const std::size_t d = 2 + t % 3;
    const auto traj = evolve(random_density(d, rng), random_protocol(d, 3, rng), 1e-2,
                             Observable(random_hermitian(d, rng)));
    for (std::size_t i = 0; i < traj.size(); ++i) EXPECT_LE(traj.v_K[i], traj.asym[i] + 1e-9);
  }
}

TEST(Evolve, CompositionMatchesChaining) {
  for (int t = 0; t < 10; ++t) {
    CounterRng rng = CounterRng::substream(53, static_cast<std::uint64_t>(t));
    const std::size_t d = 2 + t % 3;
    const auto rho0 = random_density(d, rng);
    const Observable k(random_hermitian(d, rng));
    const auto p1 = random_protocol(d, 2, rng), p2 = random_protocol(d, 2, rng);
    const auto whole = evolve(rho0, p1.then(p2), 1e-2, k);
    const auto first = evolve(rho0, p1, 1e-2, k);
    const auto second = evolve(first.final_state(), p2, 1e-2, k);
    EXPECT_LT(max_abs_diff(whole.final_state().mat(), second.final_state().mat()), 1e-10);
  }
}

TEST(Evolve, Errors) {
  const auto rho = DensityMatrix::pure(z_plus);
  EXPECT_EQ(code_of([&] { evolve(rho, single(pauli_x(), 0.1), 0.2, Observable(pauli_z())); }),
            ErrorCode::StepTooLarge);
  EXPECT_EQ(code_of([&] { evolve(rho, single(pauli_x(), 0.1), 0.0, Observable(pauli_z())); }),
            ErrorCode::InvalidArgument);
}

TEST(Evolve, FiniteDifferenceMatchesSpeed) {
  // Centered differences of <K> at the midpoint; error falls ~100x for dt / 10.
  int checked = 0;
  for (int t = 0; checked < 20 && t < 200; ++t) {
    CounterRng rng = CounterRng::substream(54, static_cast<std::uint64_t>(t));
    const auto rho = DensityMatrix::from_bloch(random_ball_vector(rng));
    const Observable h = Observable::from_axis(random_unit_vector(rng));
    const Observable k = Observable::from_axis(random_unit_vector(rng));
    const double v = instantaneous_speed(rho, h, k);
    if (v < 1e-2) continue;
    double err[2];
    const double steps[2] = {1e-3, 1e-4};
    for (int s = 0; s < 2; ++s) {
      const double dt = steps[s];
      const auto up = mat_exp_hermitian_scaled(h.mat(), cplx(0, -dt));
      const auto down = up.adjoint();
      const DensityMatrix plus((up * rho.mat() * up.adjoint()).hermitian_part());
      const DensityMatrix minus((down * rho.mat() * down.adjoint()).hermitian_part());
      err[s] = std::abs(std::abs(expectation(plus, k) - expectation(minus, k)) / (2.0 * dt) - 2.0 * v);
    }
    const double ratio = err[0] / err[1];
    EXPECT_GT(ratio, 80.0);
    EXPECT_LT(ratio, 120.0);
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}

TEST(OptimalGenerator, Examples) {
  const Observable sz(pauli_z());
  const auto rho = DensityMatrix::pure(x_plus);
  const auto g = optimal_qubit_generator(rho, sz);
  EXPECT_NEAR(g.params.phi, 0.0, 1e-15);
  EXPECT_NEAR(g.params.alpha, kPi / 2.0, 1e-15);
  EXPECT_NEAR(g.params.beta_angle, kPi / 2.0, 1e-15);
  // sigma_y up to sign
  EXPECT_NEAR(std::min(max_abs_diff(g.h.mat(), pauli_y()), max_abs_diff(g.h.mat(), pauli_y() * -1.0)),
              0.0, 1e-14);
  EXPECT_NEAR(instantaneous_speed(rho, g.h, sz), 1.0, 1e-14);

  const std::vector<double> w{0.4, 0.6};
  const DensityMatrix diag(ComplexMatrix::diagonal(w));
  EXPECT_NEAR(instantaneous_speed(diag, optimal_qubit_generator(diag, sz).h, sz), 0.0, 1e-15);

  const auto mixed = DensityMatrix::from_bloch({0.8, 0, 0});
  EXPECT_NEAR(instantaneous_speed(mixed, optimal_qubit_generator(mixed, sz).h, sz), 0.8, 1e-14);
}

TEST(OptimalGenerator, SaturatesAndIsEquatorial) {
  for (int t = 0; t < 500; ++t) {
    CounterRng rng = CounterRng::substream(55, static_cast<std::uint64_t>(t));
    const auto rho = random_density(2, rng);
    const Observable k(random_hermitian(2, rng));
    const auto g = optimal_qubit_generator(rho, k);
    EXPECT_NEAR(instantaneous_speed(rho, g.h, k), trace_norm_asymmetry(rho, k), 1e-9);
    EXPECT_NEAR(g.h.eigen().values[0], -1.0, 1e-10);
    EXPECT_NEAR(g.h.eigen().values[1], 1.0, 1e-10);
    // Equatorial in K's frame: <k+|H|k+> = <k-|H|k-> = 0.
    const auto& kv = k.eigen().vectors;
    EXPECT_NEAR(std::abs(sandwich(kv.column(0), g.h.mat(), kv.column(0))), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(sandwich(kv.column(1), g.h.mat(), kv.column(1))), 0.0, 1e-10);
  }
}

TEST(OptimalGenerator, Errors) {
  EXPECT_EQ(code_of([] {
              optimal_qubit_generator(DensityMatrix::maximally_mixed(2),
                                      Observable(ComplexMatrix::identity(2)));
            }),
            ErrorCode::DegenerateObservable);
  EXPECT_EQ(code_of([] {
              optimal_qubit_generator(DensityMatrix::maximally_mixed(3),
                                      Observable(ComplexMatrix::identity(3)));
            }),
            ErrorCode::DimMismatch);
}

TEST(VQsl, QubitDelegatesAndHigherDimsStayBelow) {
  const std::vector<double> w{0.3, 0.7};
  EXPECT_EQ(v_qsl_numeric(DensityMatrix(ComplexMatrix::diagonal(w)), Observable(pauli_z()), 1, 16),
            0.0);
  for (int t = 0; t < 20; ++t) {
    CounterRng rng = CounterRng::substream(56, static_cast<std::uint64_t>(t));
    const auto q = random_density(2, rng);
    const Observable kq(random_hermitian(2, rng));
    EXPECT_NEAR(v_qsl_numeric(q, kq, 1, 16), trace_norm_asymmetry(q, kq), 1e-9);
    const std::size_t d = 3 + t % 2;
    const auto rho = random_density(d, rng);
    const Observable k(random_hermitian(d, rng));
    const double v = v_qsl_numeric(rho, k, 7, 64);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, trace_norm_asymmetry(rho, k) + 1e-9);
  }
}

TEST(TimeBounds, StationaryIsZero) {
  const std::vector<double> w{0.3, 0.7};
  const auto traj = evolve(DensityMatrix(ComplexMatrix::diagonal(w)), single(pauli_z(), 1.0), 1e-2,
                           Observable(pauli_z()));
  const auto q = tau_qsl(traj, Observable(pauli_z()));
  EXPECT_EQ(q.value, 0.0);
  EXPECT_TRUE(q.degenerate);
  EXPECT_EQ(tau_min_qubit(traj, {0, 0, 1}).value, 0.0);
}

TEST(TimeBounds, RandomProtocolsStayBelowTau) {
  for (int t = 0; t < 30; ++t) {
    CounterRng rng = CounterRng::substream(57, static_cast<std::uint64_t>(t));
    const std::size_t d = 2 + t % 3;
    const auto p = random_protocol(d, 3, rng);
    const Observable k(random_hermitian(d, rng));
    const auto traj = evolve(random_density(d, rng), p, 1e-3, k);
    EXPECT_LE(tau_qsl(traj, k).value, p.total_time() * (1 + 1e-6));
    if (d == 2) {
      const BlochVector n = random_unit_vector(rng);
      const auto tq = evolve(random_density(2, rng), p, 1e-3, Observable::from_axis(n));
      EXPECT_LE(tau_min_qubit(tq, n).value, p.total_time() * (1 + 1e-6));
    }
  }
}

TEST(TimeBounds, SaturatingRunReachesTau) {
  const BlochVector n{0, 0, 1};
  const auto rho0 = DensityMatrix::from_bloch({0.9, 0.0, 0.1});
  const auto traj =
      evolve_adaptive(rho0, 1.0, 1e-3, saturating_qubit_policy(n, 1e-3), Observable::from_axis(n));
  EXPECT_NEAR(tau_qsl(traj, Observable::from_axis(n)).value, 1.0, 0.01);
  EXPECT_NEAR(tau_min_qubit(traj, n).value, 1.0, 0.01);
}

TEST(TimeBounds, LandingStepHoldsAtAntipode) {
  // Starts close to -n_K: reaches it well before tau and must stay there.
  const BlochVector n{0, 0, 1};
  const auto rho0 = DensityMatrix::from_bloch({0.05, 0.0, -0.95});
  const auto traj =
      evolve_adaptive(rho0, 1.0, 1e-3, saturating_qubit_policy(n, 1e-3), Observable::from_axis(n));
  const auto b = tau_min_qubit(traj, n);
  EXPECT_GE(b.value, 0.99);
  EXPECT_LE(b.value, 1.0 + 1e-6);
  const BlochVector end = traj.final_state().bloch();
  EXPECT_NEAR(std::hypot(end.x, end.y), 0.0, 1e-9);
}

TEST(TimeBounds, EmptyTrajectory) {
  Trajectory empty;
  EXPECT_EQ(code_of([&] { tau_qsl(empty, Observable(pauli_z())); }), ErrorCode::EmptyTrajectory);
}

TEST(SaturatingAxis, ParallelFallbackIsOrthogonal) {
  const BlochVector n{0, 0, 1};
  const BlochVector a = saturating_axis(n, {0, 0, 0.5});
  EXPECT_NEAR(a.norm(), 1.0, 1e-15);
  EXPECT_NEAR(a.dot(n), 0.0, 1e-15);
  const BlochVector b = saturating_axis(n, {0.3, 0.0, 0.2});
  EXPECT_NEAR(b.dot(n), 0.0, 1e-15);
  EXPECT_NEAR(b.y, 1.0, 1e-15);  // n x r points along +y
}

TEST(DistinguishingObservable, Examples) {
  const auto a = DensityMatrix::pure(z_plus);
  EXPECT_EQ(optimal_distinguishing_observable(a, a).mat().max_abs(), 0.0);
  const auto k = optimal_distinguishing_observable(a, DensityMatrix::pure(z_minus));
  EXPECT_LT(max_abs_diff(k.mat(), DensityMatrix::pure(z_minus).mat()), 1e-14);
}

TEST(DistinguishingObservable, TraceDistanceOracle) {
  for (int t = 0; t < 50; ++t) {
    CounterRng rng = CounterRng::substream(58, static_cast<std::uint64_t>(t));
    const BlochVector r0 = random_ball_vector(rng), r1 = random_ball_vector(rng);
    const auto a = DensityMatrix::from_bloch(r0), b = DensityMatrix::from_bloch(r1);
    const auto k = optimal_distinguishing_observable(a, b);
    const double value = trace_of_product(k.mat(), b.mat() - a.mat()).real();
    EXPECT_NEAR(value, 0.5 * (r1 - r0).norm(), 1e-10);
    EXPECT_GE(k.eigen().values.front(), -1e-12);
    EXPECT_LE(k.eigen().values.back(), 1.0 + 1e-12);
  }
}
