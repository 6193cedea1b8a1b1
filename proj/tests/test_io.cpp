#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qslab/error.hpp"
#include "qslab/io.hpp"
#include "qslab/sampling.hpp"

using namespace qslab;

namespace {

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

}  // namespace

TEST(MatrixJson, RoundTripIsExact) {
  CounterRng rng(3);
  const ComplexMatrix m = random_hermitian(3, rng);
  EXPECT_EQ(io::parse_matrix_json(io::matrix_to_json(m)), m);
}

TEST(MatrixJson, Rejections) {
  EXPECT_EQ(code_of([] { io::parse_matrix_json(R"({"dim":2,"entries":[[1,0],[0,0],[0,0]]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_matrix_json(R"({"dim":1,"entries":[[1]]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_matrix_json(R"({"dim":1,"entries":[["x",0]]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_matrix_json(R"({"dim":1,"entries":[[1e999,0]]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_matrix_json("{not json"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_matrix_json(R"({"entries":[]})"); }), ErrorCode::ParseError);
}

TEST(StateJson, BlochAndMatrixForms) {
  const auto a = io::parse_state_json(R"({"bloch":[0.6,0,0]})");
  EXPECT_NEAR(a.mat()(0, 1).real(), 0.3, 1e-15);
  const auto b = io::parse_state_json(
      R"({"kind":"state","matrix":{"dim":2,"entries":[[0.5,0],[0.3,0],[0.3,0],[0.5,0]]}})");
  EXPECT_LT(max_abs_diff(a.mat(), b.mat()), 1e-15);
  const auto c = io::parse_state_json(
      R"({"kind":"state","dim":2,"entries":[[0.5,0],[0.3,0],[0.3,0],[0.5,0]]})");
  EXPECT_LT(max_abs_diff(a.mat(), c.mat()), 1e-15);
  EXPECT_EQ(code_of([] { io::parse_state_json(R"({"kind":"observable","bloch":[0,0,0]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_state_json(R"({"bloch":[2,0,0]})"); }), ErrorCode::InvalidState);
  EXPECT_EQ(code_of([] { io::parse_state_json(R"({"bloch":[1,0]})"); }), ErrorCode::ParseError);
}

TEST(ObservableJson, AxisAndMatrix) {
  const auto k = io::parse_observable_json(R"({"axis":[0,0,1]})");
  EXPECT_EQ(k.mat(), pauli_z());
  const auto h = io::parse_observable_json(
      R"({"kind":"observable","matrix":{"dim":2,"entries":[[0,0],[0,-1],[0,1],[0,0]]}})");
  EXPECT_EQ(h.mat(), pauli_y());
  EXPECT_EQ(code_of([] {
              io::parse_observable_json(R"({"dim":2,"entries":[[0,0],[1,0],[0,0],[0,0]]})");
            }),
            ErrorCode::NotHermitian);
}

TEST(ProtocolJson, Parses) {
  const auto p = io::parse_protocol_json(
      R"({"tau":1.0,"dt":0.01,"segments":[{"axis":[0,1,0],"duration":0.25},)"
      R"({"matrix":{"dim":2,"entries":[[1,0],[0,0],[0,0],[-1,0]]},"duration":0.75}]})");
  EXPECT_EQ(p.protocol.segments().size(), 2u);
  EXPECT_DOUBLE_EQ(p.tau, 1.0);
  EXPECT_DOUBLE_EQ(p.dt, 0.01);
  EXPECT_EQ(p.protocol.segments()[1].h.mat(), pauli_z());
}

TEST(ProtocolJson, Rejections) {
  EXPECT_EQ(code_of([] { io::parse_protocol_json(R"({"tau":1,"segments":[]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_protocol_json(R"({"segments":[{"axis":[0,0,1]}]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] {
              io::parse_protocol_json(R"({"tau":2,"segments":[{"axis":[0,0,1],"duration":1}]})");
            }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] {
              io::parse_protocol_json(R"({"segments":[{"axis":[0,0,2],"duration":1}]})");
            }),
            ErrorCode::InvalidArgument);
}

TEST(BoundReportJson, StableFieldNames) {
  const auto rho = io::parse_state_json(R"({"bloch":[1,0,0]})");
  const auto r = bound_report(rho, Observable(pauli_z()), Observable(pauli_y()), BasisOptimizerConfig{});
  const std::string j = io::bound_report_to_json(r);
  for (const char* field : {"\"v_K\"", "\"asym\"", "\"weakval_bound\"", "\"qfi\"", "\"stddev_K\"",
                            "\"stddev_H\"", "\"c_kd_nre\"", "\"c_l1\"", "\"slacks\"", "\"eq5\"",
                            "\"eq2\"", "\"eq10\"", "\"eq12\"", "\"eq15\"", "\"eq16\"",
                            "\"saturation_flags\""})
    EXPECT_NE(j.find(field), std::string::npos) << field;
}

TEST(TrajectoryCsv, Columns) {
  const BlochVector axes[1] = {{0, 1, 0}};
  const auto traj = evolve(io::parse_state_json(R"({"bloch":[1,0,0]})"),
                           GeneratorProtocol::from_axes(axes, 0.1), 0.05, Observable(pauli_z()));
  std::ostringstream os;
  io::write_trajectory_csv(os, traj);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("t,vK,asym,c_l1,purity,exp_K\n", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + static_cast<long>(traj.size()));
}

TEST(ReadFile, MissingFile) {
  EXPECT_EQ(code_of([] { io::read_file("/nonexistent/qslab.json"); }), ErrorCode::ParseError);
}
