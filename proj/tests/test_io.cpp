// Copyright 2026 The QForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <random>

#include "oracle.hpp"
#include "qforge/io.hpp"

using namespace qforge;
using E = ParameterExpression;

namespace {

std::string parse_error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    return e.what();
  }
  FAIL("no error raised");
  return {};
}

}  // namespace

TEST_CASE("circuit JSON uses the documented field names") {
  Circuit c(2);
  c.append(gates::rx(0, E::parameter("a")));
  c.append(gates::cnot(0, 1));
  const auto j = io::circuit_to_json(c);
  CHECK(j.dump() ==
        R"({"n_qubits":2,"gates":[{"kind":"rx","targets":[0],"controls":[],"arg":{"terms":{"a":1.0},"const":0.0}},)"
        R"({"kind":"x","targets":[1],"controls":[0]}]})");
}

TEST_CASE("property: circuit JSON round-trips exactly") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    auto c = oracle::random_circuit(n, 20, rng, std::min(2, n - 1));
    Circuit sym(n);
    for (auto g : c.gates()) {
      if (g.arg && rng() % 2) g.arg = E::from_terms({{"a", 0.5}, {"b_1", -1.25}}, g.arg->constant());
      sym.append(std::move(g));
    }
    sym.append(gates::measure({0}, "m0"));
    const auto text = io::circuit_to_json(sym).dump(2);
    const auto back = io::circuit_from_json(io::parse_json(text, "circuit"));
    CHECK(back == sym);
  }
}

TEST_CASE("circuit JSON accepts cnot shorthand and rejects bad fields") {
  const auto c = io::circuit_from_json(io::parse_json(
      R"({"n_qubits": 2, "gates": [{"kind": "cnot", "targets": [1, 0]}, {"kind": "p", "targets": [0], "arg": 0.5}]})",
      "c"));
  CHECK(c[0] == gates::cnot(1, 0));
  CHECK(c[1] == gates::phase_shift(0, 0.5));

  CHECK_THAT(parse_error_of([] { io::circuit_from_json(io::parse_json(R"({"gates": []})", "c")); }),
             Catch::Matchers::ContainsSubstring("n_qubits"));
  CHECK_THAT(parse_error_of([] {
               io::circuit_from_json(io::parse_json(R"({"n_qubits": 1, "gates": [{"kind": "rx", "targets": [0]}]})", "c"));
             }),
             Catch::Matchers::ContainsSubstring("gates[0]"));
  CHECK_THAT(parse_error_of([] {
               io::circuit_from_json(
                   io::parse_json(R"({"n_qubits": 1, "gates": [{"kind": "h", "targets": ["a"]}]})", "c"));
             }),
             Catch::Matchers::ContainsSubstring("gates[0].targets[0]"));
  CHECK_THAT(parse_error_of([] {
               io::circuit_from_json(
                   io::parse_json(R"({"n_qubits": 1, "gates": [{"kind": "h", "targets": [0], "colour": 1}]})", "c"));
             }),
             Catch::Matchers::ContainsSubstring("gates[0].colour"));
  CHECK_THAT(parse_error_of([] {
               io::circuit_from_json(io::parse_json(R"({"n_qubits": 1, "gates": [{"kind": "h", "targets": [3]}]})", "c"));
             }),
             Catch::Matchers::ContainsSubstring("gates[0]"));
  CHECK_THAT(parse_error_of([] { io::parse_json("{", "circuit.json"); }), Catch::Matchers::ContainsSubstring("circuit.json"));
}

TEST_CASE("Hamiltonian JSON") {
  const auto h = io::hamiltonian_from_json(io::parse_json(
      R"([{"pauli": "X0 Y1", "coeff_re": 1.0, "coeff_im": 0.0}, {"pauli": "Z2", "coeff_re": -0.5, "coeff_im": 0.0},
          {"pauli": "", "coeff_re": 0.25}])",
      "h"));
  CHECK(h.size() == 3);
  CHECK(h.coefficient(PauliString::parse("X0 Y1")) == std::complex<double>(1.0, 0.0));
  CHECK(h.coefficient(PauliString::parse("Z2")) == std::complex<double>(-0.5, 0.0));
  CHECK(io::hamiltonian_from_json(io::hamiltonian_to_json(h)).terms() == h.terms());
  CHECK_THAT(parse_error_of([] { io::hamiltonian_from_json(io::parse_json(R"([{"pauli": "Q0", "coeff_re": 1}])", "h")); }),
             Catch::Matchers::ContainsSubstring("hamiltonian[0].pauli"));
  CHECK_THAT(parse_error_of([] { io::hamiltonian_from_json(io::parse_json(R"([{"pauli": "Z0"}])", "h")); }),
             Catch::Matchers::ContainsSubstring("coeff_re"));
}

TEST_CASE("noise model JSON") {
  const auto m = io::noise_model_from_json(io::parse_json(
      R"({"default": {"type": "depolarizing", "p": 0.01}, "per_kind": {"h": {"type": "bitflip", "p": 0.02}}})", "n"));
  REQUIRE(m.fallback);
  CHECK(m.fallback->kind() == ChannelKind::Depolarizing);
  CHECK(m.fallback->parameter() == 0.01);
  REQUIRE(m.per_kind.count(GateKind::H) == 1);
  CHECK(m.per_kind.at(GateKind::H).kind() == ChannelKind::BitFlip);
  CHECK(m.lookup(GateKind::X) == &*m.fallback);

  const auto back = io::noise_model_from_json(io::noise_model_to_json(m));
  CHECK(io::noise_model_to_json(back) == io::noise_model_to_json(m));

  const auto custom = io::noise_model_from_json(io::parse_json(
      R"({"per_kind": {"x": {"type": "custom", "kraus": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}}})", "n"));
  CHECK(custom.per_kind.at(GateKind::X).completeness_error() <= 1e-15);

  CHECK_THAT(parse_error_of([] {
               io::noise_model_from_json(io::parse_json(R"({"default": {"type": "sparkle", "p": 0.1}})", "n"));
             }),
             Catch::Matchers::ContainsSubstring("default.type"));
  CHECK_THAT(parse_error_of([] {
               io::noise_model_from_json(io::parse_json(R"({"per_kind": {"h": {"type": "bitflip"}}})", "n"));
             }),
             Catch::Matchers::ContainsSubstring("per_kind.h"));
  CHECK_THAT(parse_error_of([] {
               io::noise_model_from_json(io::parse_json(R"({"default": {"type": "bitflip", "p": 1.5}})", "n"));
             }),
             Catch::Matchers::ContainsSubstring("noise"));
}

TEST_CASE("batch CSV") {
  const auto b = io::parse_batch_csv("a, b\n0.5,1\r\n-2e-3, +3\n\n");
  CHECK(b.names == std::vector<std::string>{"a", "b"});
  REQUIRE(b.values.rows() == 2);
  CHECK(b.values(0, 0) == 0.5);
  CHECK(b.values(1, 0) == -2e-3);
  CHECK(b.values(1, 1) == 3.0);
  CHECK(io::parse_batch_csv("a\n").values.rows() == 0);
  CHECK_THAT(parse_error_of([] { io::parse_batch_csv("a,b\n1\n"); }), Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THAT(parse_error_of([] { io::parse_batch_csv("a,b\n1,x\n"); }), Catch::Matchers::ContainsSubstring("'b'"));
  CHECK_THAT(parse_error_of([] { io::parse_batch_csv("a,a\n"); }), Catch::Matchers::ContainsSubstring("duplicate"));
  CHECK_THAT(parse_error_of([] { io::parse_batch_csv(""); }), Catch::Matchers::ContainsSubstring("header"));
}

TEST_CASE("gradient CSV layout") {
  GradientResult r;
  r.values = Eigen::MatrixXd{{0.5, -1.0}};
  r.grads = {Eigen::MatrixXd{{1.0, 2.0}, {3.0, 0.1}}};
  CHECK(io::gradient_csv(r, {"a", "b"}) ==
        "row,value_h0,value_h1,grad_h0_a,grad_h0_b,grad_h1_a,grad_h1_b\n0,0.5,-1,1,2,3,0.1\n");
}

TEST_CASE("state and density dumps") {
  Circuit bell(2);
  bell.append(gates::h(0));
  bell.append(gates::cnot(0, 1));
  const auto psi = sv_run<double>(bell);
  const auto bytes = io::encode_state(psi);
  REQUIRE(bytes.size() == 16 + 4 * 16);
  CHECK(bytes.substr(0, 4) == "QSV1");
  CHECK(bytes[4] == 2);
  CHECK(bytes[8] == 1);
  const auto d = io::decode_dump(bytes);
  CHECK(d.n_qubits == 2);
  CHECK(d.precision == Precision::Double);
  REQUIRE(d.values.size() == 4);
  CHECK(d.values[0] == psi[0]);
  CHECK(d.values[1] == std::complex<double>(0.0, 0.0));
  CHECK(std::abs(d.values[3] - std::sqrt(0.5)) <= 1e-15);

  const auto single = io::decode_dump(io::encode_state(sv_run<float>(bell)));
  CHECK(single.precision == Precision::Single);

  const auto rho = dm_run<double>(bell);
  const auto dd = io::decode_dump(io::encode_density(rho));
  CHECK(dd.magic == "QDM1");
  REQUIRE(dd.values.size() == 16);
  CHECK(std::abs(dd.values[3] - 0.5) <= 1e-15);  // row 0, column 3
  CHECK(std::abs(dd.values[15] - 0.5) <= 1e-15);

  CHECK_THAT(parse_error_of([&] { io::decode_dump(bytes.substr(0, 20)); }), Catch::Matchers::ContainsSubstring("payload"));
  CHECK_THAT(parse_error_of([] { io::decode_dump(std::string(16, 'z')); }), Catch::Matchers::ContainsSubstring("magic"));
}
