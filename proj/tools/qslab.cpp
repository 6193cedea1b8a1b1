// qslab command line: bound reports and the experiment suites.
// Exit codes: 0 pass, 1 violation found, 2 input error.

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qslab/error.hpp"
#include "qslab/experiments.hpp"
#include "qslab/io.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

int cmd_bounds(const std::string& state_path, const std::string& obs_path,
               const std::string& gen_path, bool as_json) {
  using namespace qslab;
  const DensityMatrix rho = io::parse_state_json(io::read_file(state_path));
  const Observable k = io::parse_observable_json(io::read_file(obs_path));
  const Observable h = io::parse_observable_json(io::read_file(gen_path));
  const BoundReport r = bound_report(rho, k, h, BasisOptimizerConfig{});
  const bool ok = r.min_slack() >= -1e-9;
  if (as_json) {
    std::cout << io::bound_report_to_json(r) << "\n";
  } else {
    std::printf("v_K            %.12g\n", r.v_K);
    std::printf("asym           %.12g\n", r.asym);
    std::printf("weakval_bound  %.12g\n", r.weakval_bound);
    std::printf("sqrt(qfi)/2    %.12g\n", 0.5 * std::sqrt(r.qfi));
    std::printf("stddev_K       %.12g\n", r.stddev_K);
    std::printf("stddev_H       %.12g\n", r.stddev_H);
    std::printf("c_kd_nre       %.12g\n", r.c_kd_nre);
    std::printf("c_l1           %.12g\n", r.c_l1);
    std::printf("||H||, ||K||   %.12g %.12g\n", r.h_norm, r.k_norm);
    for (const auto& [name, v] : r.slacks) {
      std::printf("slack %-6s %+.6e%s\n", name.c_str(), v, r.saturated(name) ? "  saturated" : "");
    }
    std::printf("chain: %s\n", ok ? "PASS" : "FAIL");
  }
  return ok ? kPass : kViolation;
}

int cmd_figure1(qslab::ExperimentConfig cfg, bool plot) {
  using namespace qslab;
  const Figure1Result res = run_figure1(cfg);
  if (cfg.output_path.empty()) {
    write_figure1_csv(std::cout, res);
  } else {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + cfg.output_path);
    write_figure1_csv(out, res);
  }
  if (plot) {
    std::string svg_path = cfg.output_path.empty() ? "figure1.svg" : cfg.output_path;
    const auto dot = svg_path.rfind('.');
    if (!cfg.output_path.empty()) {
      svg_path = (dot == std::string::npos ? svg_path : svg_path.substr(0, dot)) + ".svg";
    }
    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg) throw Error(ErrorCode::InvalidConfig, "cannot write " + svg_path);
    svg << render_figure1_svg(res);
  }
  const int violations = res.violations();
  std::fprintf(stderr, "figure1: trials=%d violations=%d optimal=%d saturated(>=0.99)=%d\n",
               cfg.trials, violations, res.optimal_count(), res.saturated_optimal());
  return violations == 0 ? kPass : kViolation;
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      const int d = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      dims.push_back(d);
    } catch (const std::exception&) {
      throw qslab::Error(qslab::ErrorCode::ParseError, "bad --dims entry '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return dims;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qslab: observable quantum speed limits"};
  app.require_subcommand(1);

  std::string state_path, obs_path, gen_path, hb_path, protocol_path;
  bool as_json = false;
  auto* bounds = app.add_subcommand("bounds", "Evaluate the bound chain for one (rho, K, H)");
  bounds->add_option("--state", state_path, "state JSON")->required();
  bounds->add_option("--observable", obs_path, "observable JSON")->required();
  bounds->add_option("--generator", gen_path, "generator JSON")->required();
  bounds->add_flag("--json", as_json, "print the report as JSON");

  qslab::ExperimentConfig fig;
  bool plot = false;
  auto* figure1 = app.add_subcommand("figure1", "Monte-Carlo tau vs tau_min scatter");
  figure1->add_option("--trials", fig.trials)->capture_default_str();
  figure1->add_option("--seed", fig.seed)->capture_default_str();
  figure1->add_option("--tau", fig.tau)->capture_default_str();
  figure1->add_option("--dt", fig.dt)->capture_default_str();
  figure1->add_option("--optimal-fraction", fig.optimal_fraction)->capture_default_str();
  figure1->add_option("--out", fig.output_path, "CSV path (stdout when omitted)");
  figure1->add_flag("--plot", plot, "also write an SVG scatter next to the CSV");

  std::size_t samples = 1000000;
  std::uint64_t comp_seed = 7;
  auto* comp = app.add_subcommand("complementarity", "MUB complementarity and speed-sum report");
  comp->add_option("--samples", samples)->capture_default_str();
  comp->add_option("--seed", comp_seed)->capture_default_str();

  double beta = 1.0;
  auto* thermo = app.add_subcommand("thermo", "Thermodynamic speed limit along a protocol");
  thermo->add_option("--state", state_path, "initial state JSON")->required();
  thermo->add_option("--hb", hb_path, "bath Hamiltonian JSON")->required();
  thermo->add_option("--beta", beta)->capture_default_str();
  thermo->add_option("--protocol", protocol_path, "protocol JSON")->required();

  qslab::VerifyConfig vcfg;
  std::string dims_text = "2,3,4";
  auto* verify = app.add_subcommand("verify", "Seeded property sweep");
  verify->add_option("--cases", vcfg.cases)->capture_default_str();
  verify->add_option("--seed", vcfg.seed)->capture_default_str();
  verify->add_option("--dims", dims_text)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInputError;
  }

  try {
    if (*bounds) return cmd_bounds(state_path, obs_path, gen_path, as_json);
    if (*figure1) return cmd_figure1(fig, plot);
    if (*comp) {
      const auto r = qslab::run_complementarity(samples, comp_seed);
      std::cout << qslab::format_complementarity(r);
      return r.passed() ? kPass : kViolation;
    }
    if (*thermo) {
      using namespace qslab;
      const DensityMatrix rho = io::parse_state_json(io::read_file(state_path));
      const Observable hb = io::parse_observable_json(io::read_file(hb_path));
      const io::ProtocolSpec p = io::parse_protocol_json(io::read_file(protocol_path));
      const ThermoReport r = run_thermo(rho, hb, beta, p.protocol, p.dt);
      std::cout << format_thermo(r);
      return r.passed() ? kPass : kViolation;
    }
    if (*verify) {
      vcfg.dims = parse_dims(dims_text);
      const auto r = qslab::run_verify(vcfg);
      std::cout << qslab::format_verify(r);
      return r.passed() ? kPass : kViolation;
    }
  } catch (const qslab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  }
  return kInputError;
}
