#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "qslab/error.hpp"
#include "qslab/experiments.hpp"
#include "qslab/tolerances.hpp"

namespace qslab {

ThermoReport run_thermo(const DensityMatrix& rho0, const Observable& hb, double beta,
                        const GeneratorProtocol& protocol, double dt) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "beta must be finite and >= 0");
  }
  const GibbsState gibbs = gibbs_state(hb, beta);
  ThermoReport rep;
  rep.beta = beta;
  rep.log_partition = gibbs.log_partition;

  // K = -ln sigma from sigma's own spectrum when it is full rank; otherwise
  // the rank-deficient reference is reported and K falls back to
  // beta Hb + ln Z (same commutators).
  const auto es = herm_eig(gibbs.state.mat());
  rep.singular_reference = es.values.front() <= tol::kSupport;
  std::optional<Observable> k;
  if (!rep.singular_reference) {
    std::vector<cplx> neg_log(es.values.size());
    for (std::size_t i = 0; i < neg_log.size(); ++i) neg_log[i] = -std::log(es.values[i]);
    k.emplace(from_spectrum(es, neg_log).hermitian_part());
  } else {
    k.emplace(hb.mat() * beta + ComplexMatrix::identity(hb.dim()) * gibbs.log_partition);
  }

  const Trajectory traj = evolve(rho0, protocol, dt, *k);

  // Generator active at each node (forward convention, last node keeps the last one).
  std::vector<const Observable*> active;
  active.reserve(traj.size());
  for (const auto& seg : protocol.segments()) {
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(seg.duration / dt - 1e-9)));
    for (std::size_t i = 0; i < n; ++i) active.push_back(&seg.h);
  }
  active.push_back(&protocol.segments().back().h);

  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.nodes.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const DensityMatrix& rho = traj.states[i];
    ThermoNode node;
    node.t = traj.times[i];
    node.v_K = traj.v_K[i];
    node.bound = thermo_speed_limit(rho, hb, beta);
    node.bound_half_beta = thermo_speed_limit(rho, hb, 0.5 * beta);
    node.relative_entropy =
        rep.singular_reference ? std::numeric_limits<double>::quiet_NaN()
                               : relative_entropy(rho, gibbs.state);
    if (!rep.singular_reference) {
      ComplexMatrix drho = commutator(active[i]->mat(), rho.mat());
      drho *= cplx(0.0, -1.0);
      node.spohn_rate = entropy_production_rate(rho, drho.hermitian_part(), gibbs.state);
      rep.rate_speed_residual =
          std::max(rep.rate_speed_residual, std::abs(std::abs(node.spohn_rate) - 2.0 * node.v_K));
    } else {
      node.spohn_rate = std::numeric_limits<double>::quiet_NaN();
    }
    rep.min_slack = std::min(rep.min_slack, node.bound - node.v_K);
    rep.linearity_residual =
        std::max(rep.linearity_residual, std::abs(node.bound - 2.0 * node.bound_half_beta));
    rep.nodes.push_back(node);
  }
  rep.entropy_production = rep.singular_reference
                               ? std::numeric_limits<double>::infinity()
                               : relative_entropy(traj.final_state(), gibbs.state);
  return rep;
}

std::string format_thermo(const ThermoReport& r) {
  std::ostringstream os;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "thermo: beta=%.12g ln Z=%.12g nodes=%zu\n"
                "  entropy production S(rho(tau)||sigma) = %.12g\n"
                "  min node slack (beta/2)||[rho,Hb]||_1 - v_K = %.6e\n"
                "  max |bound(beta) - 2 bound(beta/2)| = %.6e\n"
                "  max ||Spohn rate| - 2 v_K| = %.6e\n",
                r.beta, r.log_partition, r.nodes.size(), r.entropy_production, r.min_slack,
                r.linearity_residual, r.rate_speed_residual);
  os << buf;
  if (r.singular_reference) {
    os << "  SingularReference: Gibbs state is numerically rank deficient; "
          "Spohn rate and relative entropy not defined\n";
  }
  os << "  speed limit holds at every node: " << (r.min_slack >= -1e-9 ? "PASS" : "FAIL") << "\n";
  os << "  bound linear in beta: " << (r.linearity_residual <= 1e-9 ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace qslab
