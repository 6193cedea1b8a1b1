#include "qslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qslab/error.hpp"

namespace qslab::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

double finite_number(const json& v, const char* field) {
  if (!v.is_number()) fail(std::string(field) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(std::string(field) + " must be finite");
  return x;
}

ComplexMatrix matrix_from(const json& j) {
  if (!j.is_object()) fail("matrix must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) fail("matrix needs integer \"dim\"");
  const auto dim = j["dim"].get<long long>();
  if (dim < 1 || dim > 16) fail("matrix dim must be in [1, 16]");
  if (!j.contains("entries") || !j["entries"].is_array()) fail("matrix needs \"entries\" array");
  const json& e = j["entries"];
  const auto d = static_cast<std::size_t>(dim);
  if (e.size() != d * d) fail("matrix entries must hold dim*dim [re, im] pairs");
  std::vector<cplx> entries;
  entries.reserve(d * d);
  for (const auto& p : e) {
    if (!p.is_array() || p.size() != 2) fail("each entry must be [re, im]");
    entries.emplace_back(finite_number(p[0], "re"), finite_number(p[1], "im"));
  }
  return ComplexMatrix(d, std::move(entries));
}

BlochVector vector3_from(const json& v, const char* field) {
  if (!v.is_array() || v.size() != 3) fail(std::string(field) + " must be [x, y, z]");
  return {finite_number(v[0], field), finite_number(v[1], field), finite_number(v[2], field)};
}

// Accepts a bare matrix object or one wrapped as {"kind": ..., "matrix": {...}}.
void check_kind(const json& j, const char* kind) {
  if (j.contains("kind") && (!j["kind"].is_string() || j["kind"].get<std::string>() != kind))
    fail(std::string("expected kind \"") + kind + "\"");
}

const json& matrix_node(const json& j, const char* kind) {
  check_kind(j, kind);
  if (j.contains("matrix")) return j["matrix"];
  return j;
}

Observable observable_from(const json& j) {
  if (!j.is_object()) fail("observable must be an object");
  check_kind(j, "observable");
  if (j.contains("axis")) return Observable::from_axis(vector3_from(j["axis"], "axis"));
  return Observable(matrix_from(matrix_node(j, "observable")));
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ComplexMatrix parse_matrix_json(std::string_view text) { return matrix_from(parse(text)); }

std::string matrix_to_json(const ComplexMatrix& m) {
  json e = json::array();
  for (const cplx& z : m.entries()) e.push_back({z.real(), z.imag()});
  return json{{"dim", m.dim()}, {"entries", e}}.dump();
}

DensityMatrix parse_state_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object()) fail("state must be an object");
  check_kind(j, "state");
  if (j.contains("bloch")) return DensityMatrix::from_bloch(vector3_from(j["bloch"], "bloch"));
  return DensityMatrix(matrix_from(matrix_node(j, "state")));
}

Observable parse_observable_json(std::string_view text) { return observable_from(parse(text)); }

ProtocolSpec parse_protocol_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object()) fail("protocol must be an object");
  if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty()) {
    fail("protocol needs a non-empty \"segments\" array");
  }
  std::vector<Segment> segs;
  for (const auto& s : j["segments"]) {
    if (!s.is_object() || !s.contains("duration")) fail("segment needs \"duration\"");
    const double duration = finite_number(s["duration"], "duration");
    if (s.contains("axis")) {
      segs.push_back(Segment{Observable::from_axis(vector3_from(s["axis"], "axis")), duration});
    } else if (s.contains("matrix")) {
      segs.push_back(Segment{Observable(matrix_from(s["matrix"])), duration});
    } else {
      fail("segment needs \"axis\" or \"matrix\"");
    }
  }
  const double dt = j.contains("dt") ? finite_number(j["dt"], "dt") : 1e-3;
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (j.contains("tau")) {
    const double tau = finite_number(j["tau"], "tau");
    GeneratorProtocol p(std::move(segs), tau);
    return ProtocolSpec{std::move(p), tau, dt};
  }
  GeneratorProtocol p(std::move(segs));
  const double tau = p.total_time();
  return ProtocolSpec{std::move(p), tau, dt};
}

std::string bound_report_to_json(const BoundReport& r) {
  json slacks = json::object();
  for (const auto& [name, v] : r.slacks) slacks[name] = v;
  json flags = json::object();
  for (const auto& [name, v] : r.saturation_flags) flags[name] = v;
  const json j = {
      {"v_K", r.v_K},
      {"asym", r.asym},
      {"weakval_bound", r.weakval_bound},
      {"qfi", r.qfi},
      {"stddev_K", r.stddev_K},
      {"stddev_H", r.stddev_H},
      {"c_kd_nre", r.c_kd_nre},
      {"c_l1", r.c_l1},
      {"asym_normalized", r.asym_normalized},
      {"h_norm", r.h_norm},
      {"k_norm", r.k_norm},
      {"slacks", slacks},
      {"saturation_flags", flags},
      {"min_slack", r.min_slack()},
  };
  return j.dump(2);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,vK,asym,c_l1,purity,exp_K\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << num(traj.times[i]) << ',' << num(traj.v_K[i]) << ',' << num(traj.asym[i]) << ','
        << num(traj.c_l1[i]) << ',' << num(traj.purity[i]) << ',' << num(traj.exp_K[i]) << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qslab::io
