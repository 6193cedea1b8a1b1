#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "qslab/dynamics.hpp"
#include "qslab/linalg.hpp"
#include "qslab/qstate.hpp"
#include "qslab/quantify.hpp"

// JSON / CSV boundary. Every parse failure surfaces as ErrorCode::ParseError;
// semantic failures (not Hermitian, bad trace, ...) keep their own codes.
namespace qslab::io {

// {"dim": d, "entries": [[re, im], ...]} row-major, d*d pairs.
ComplexMatrix parse_matrix_json(std::string_view text);
std::string matrix_to_json(const ComplexMatrix& m);

// {"bloch": [x, y, z]} or a matrix object (optionally {"kind": "state", "matrix": {...}}).
DensityMatrix parse_state_json(std::string_view text);
// {"axis": [x, y, z]} or a matrix object (optionally {"kind": "observable", "matrix": {...}}).
Observable parse_observable_json(std::string_view text);

struct ProtocolSpec {
  GeneratorProtocol protocol;
  double tau;
  double dt;
};

// {"tau": t, "dt": h, "segments": [{"axis": [..] | "matrix": {..}, "duration": d}, ...]}
ProtocolSpec parse_protocol_json(std::string_view text);

std::string bound_report_to_json(const BoundReport& r);

// Columns t, vK, asym, c_l1, purity, exp_K.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// Whole file as a string; ParseError when unreadable.
std::string read_file(const std::string& path);

}  // namespace qslab::io
