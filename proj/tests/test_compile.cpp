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
#include "suites.hpp"
#include "qforge/compile.hpp"
#include "qforge/statevector.hpp"

using namespace qforge;
using E = ParameterExpression;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ParseError;
}

double unitary_gap(const Circuit& a, const Circuit& b) {
  return oracle::phase_distance(oracle::circuit_unitary(a, {}), oracle::circuit_unitary(b, {}));
}

}  // namespace

TEST_CASE("DAG construction") {
  Circuit a(2);
  a.append(gates::h(0));
  a.append(gates::x(1));
  const auto da = GateDag::build(a);
  CHECK(da.size() == 2);
  CHECK(da.edge_count() == 0);

  Circuit b(2);
  b.append(gates::h(0));
  b.append(gates::cnot(0, 1));
  b.append(gates::x(1));
  const auto db = GateDag::build(b);
  CHECK(db.edge_count() == 2);
  CHECK(db.has_edge(0, 1));
  CHECK(db.has_edge(1, 2));

  Circuit c(3);
  c.append(gates::h(0));
  c.append(gates::barrier({0, 1, 2}));
  c.append(gates::x(2));
  const auto dc = GateDag::build(c);
  CHECK(dc.has_edge(0, 1));
  CHECK(dc.has_edge(1, 2));
}

TEST_CASE("property: DAG linearization reproduces the circuit") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = oracle::random_circuit(4, 30, rng, 2);
    const auto back = GateDag::build(c).to_circuit();
    CHECK(back == c);
    CHECK(oracle::phase_distance(oracle::run(c), oracle::run(back)) <= 1e-12);
  }
}

TEST_CASE("cancellation and merging examples") {
  Circuit hh(1);
  hh.append(gates::h(0));
  hh.append(gates::h(0));
  CHECK(pass_cancel_adjacent(GateDag::build(hh)).size() == 0);

  Circuit nested(2);
  nested.append(gates::h(0));
  nested.append(gates::cnot(0, 1));
  nested.append(gates::cnot(0, 1));
  nested.append(gates::h(0));
  CHECK(pass_cancel_adjacent(GateDag::build(nested)).size() == 0);

  Circuit blocked(2);
  blocked.append(gates::h(0));
  blocked.append(gates::cnot(0, 1));
  blocked.append(gates::h(0));
  CHECK(pass_cancel_adjacent(GateDag::build(blocked)).size() == 3);

  Circuit st(1);
  st.append(gates::s(0));
  st.append(gate_inverse(gates::s(0)));
  CHECK(pass_cancel_adjacent(GateDag::build(st)).size() == 0);

  Circuit sw(2);
  sw.append(gates::swap(0, 1));
  sw.append(gates::swap(1, 0));
  CHECK(pass_cancel_adjacent(GateDag::build(sw)).size() == 0);

  Circuit rz(1);
  rz.append(gates::rz(0, 0.3));
  rz.append(gates::rz(0, 0.4));
  const auto merged = pass_merge_rotations(GateDag::build(rz));
  REQUIRE(merged.size() == 1);
  CHECK(merged.nodes()[0].kind == GateKind::RZ);
  CHECK(merged.nodes()[0].arg->constant() == Catch::Approx(0.7).margin(1e-15));

  Circuit sym(1);
  sym.append(gates::rx(0, E::parameter("a")));
  sym.append(gates::rx(0, -E::parameter("a")));
  CHECK(pass_merge_rotations(GateDag::build(sym)).size() == 0);

  Circuit different(2);
  different.append(gates::rz(0, 0.3));
  different.append(gates::rx(0, 0.4));
  different.append(controlled(gates::rz(1, 0.2), {0}));
  different.append(gates::rz(1, 0.2));
  CHECK(pass_merge_rotations(GateDag::build(different)).size() == 4);
}

TEST_CASE("decomposition examples") {
  Circuit sw(2);
  sw.append(gates::swap(0, 1));
  const auto d = pass_decompose(GateDag::build(sw)).to_circuit();
  REQUIRE(d.size() == 3);
  for (const auto& g : d.gates()) {
    CHECK(g.kind == GateKind::X);
    CHECK(g.controls.size() == 1);
  }
  CHECK(unitary_gap(sw, d) <= 1e-12);

  Circuit many(4);
  many.append(controlled(gates::x(3), {0, 1, 2}));
  CHECK(code_of([&] { pass_decompose(GateDag::build(many)); }) == ErrorCode::UnsupportedDecomposition);
  Circuit cswap(4);
  cswap.append(controlled(gates::swap(2, 3), {0, 1}));
  CHECK(code_of([&] { pass_decompose(GateDag::build(cswap)); }) == ErrorCode::UnsupportedDecomposition);
  Circuit ccu(4);
  ccu.append(controlled(gates::custom({2, 3}, Eigen::MatrixXcd::Identity(4, 4)), {0, 1}));
  CHECK(code_of([&] { pass_decompose(GateDag::build(ccu)); }) == ErrorCode::UnsupportedDecomposition);
}

TEST_CASE("ZYZ angles reproduce the matrix") {
  std::mt19937_64 rng(92);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Matrix2cd u = oracle::random_unitary(2, rng);
    const auto z = zyz_decompose(u);
    const Eigen::Matrix2cd v = std::exp(std::complex<double>(0, z.alpha)) *
                               oracle::target_matrix(GateKind::RZ, z.beta) *
                               oracle::target_matrix(GateKind::RY, z.gamma) *
                               oracle::target_matrix(GateKind::RZ, z.delta);
    CHECK((u - v).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const Eigen::Matrix2cd x = oracle::pauli('X');
  const auto zx = zyz_decompose(x);
  const Eigen::Matrix2cd vx = std::exp(std::complex<double>(0, zx.alpha)) *
                              oracle::target_matrix(GateKind::RZ, zx.beta) *
                              oracle::target_matrix(GateKind::RY, zx.gamma) *
                              oracle::target_matrix(GateKind::RZ, zx.delta);
  CHECK((x - vx).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("property: every kind decomposes exactly with up to two controls") {
  std::mt19937_64 rng(93);
  for (GateKind k : oracle::kernel_kinds()) {
    for (int nc = 0; nc <= 2; ++nc) {
      if (oracle::arity(k) == 2 && nc == 2) continue;
      if (k == GateKind::Custom && nc == 2) continue;
      for (int trial = 0; trial < 6; ++trial) {
        const int n = std::min(5, oracle::arity(k) + nc + static_cast<int>(rng() % 2));
        Circuit c(n);
        c.append(oracle::random_gate(k, n, nc, rng));
        Circuit d(n);
        for (auto& g : decompose_gate(c[0])) {
          INFO(to_string(k) << " controls=" << nc);
          CHECK(in_decompose_basis(g));
          d.append(g);
        }
        INFO(to_string(k) << " controls=" << nc);
        CHECK(unitary_gap(c, d) <= 1e-10);
      }
    }
  }
}

TEST_CASE("decomposition keeps symbolic arguments") {
  Circuit c(2);
  c.append(controlled(gates::ry(1, 2.0 * E::parameter("t")), {0}));
  const auto d = pass_decompose(GateDag::build(c)).to_circuit();
  CHECK(d.parameters() == std::vector<std::string>{"t"});
  for (double t : {-1.2, 0.1, 2.7}) {
    const ParamMap env{{"t", t}};
    CHECK(oracle::phase_distance(oracle::circuit_unitary(c, env), oracle::circuit_unitary(d, env)) <= 1e-12);
  }
}

TEST_CASE("property: passes preserve the unitary up to global phase") {
  std::mt19937_64 rng(94);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto c = suites::redundant_circuit(n, 20, rng);
    const auto dag = GateDag::build(c);
    const auto cancelled = pass_cancel_adjacent(dag).to_circuit();
    const auto merged = pass_merge_rotations(dag).to_circuit();
    const auto full = compile_circuit(c);
    CHECK(unitary_gap(c, cancelled) <= 1e-10);
    CHECK(unitary_gap(c, merged) <= 1e-10);
    CHECK(unitary_gap(c, full) <= 1e-10);
    CHECK(cancelled.size() <= c.size());
    CHECK(merged.size() <= c.size());
    for (const auto& g : full.gates()) CHECK(in_decompose_basis(g));
    // Idempotence.
    CHECK(pass_cancel_adjacent(GateDag::build(cancelled)).to_circuit() == cancelled);
  }
}

TEST_CASE("coupling graphs") {
  const auto line = CouplingGraph::parse("line:4");
  CHECK(line.edges().size() == 3);
  CHECK(line.distance(0, 3) == 3);
  const auto ring = CouplingGraph::parse("ring:5");
  CHECK(ring.edges().size() == 5);
  CHECK(ring.distance(0, 3) == 2);
  const auto grid = CouplingGraph::parse("grid:2x3");
  CHECK(grid.n_physical() == 6);
  CHECK(grid.edges().size() == 7);
  CHECK(grid.distance(0, 5) == 3);
  const auto file = CouplingGraph::parse_edge_list("0 1\n1 2\n# comment\n2 0\n");
  CHECK(file.edges().size() == 3);

  CHECK(code_of([] { CouplingGraph::parse("star:4"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { CouplingGraph::parse("line:x"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { CouplingGraph(2, {{0, 0}}); }) == ErrorCode::InvalidCoupling);
  Circuit c(2);
  c.append(gates::cnot(0, 1));
  CHECK(code_of([&] { map_circuit(c, CouplingGraph(3, {{0, 1}})); }) == ErrorCode::InvalidCoupling);
  CHECK(code_of([&] { map_circuit(Circuit(4), CouplingGraph::line(3)); }) == ErrorCode::TooManyLogicalQubits);
}

TEST_CASE("mapping examples") {
  Circuit far(3);
  far.append(gates::cnot(0, 2));
  const auto line = CouplingGraph::line(3);
  const auto r = map_circuit(far, line);
  CHECK(r.swaps_inserted >= 1);
  CHECK(respects_coupling(r.compiled, line));

  Circuit near(3);
  near.append(gates::h(0));
  near.append(gates::cnot(0, 1));
  near.append(gates::cnot(1, 2));
  const auto ok = map_circuit(near, line);
  CHECK(ok.swaps_inserted == 0);
  CHECK(ok.final_layout == std::vector<int>{0, 1, 2});
  CHECK(ok.compiled == near);
}

TEST_CASE("property: mapped circuits respect coupling and preserve the state") {
  const auto r = suites::mapping_suite(100, 95);
  CHECK(r.violations == 0);
  CHECK(r.gate_mismatches == 0);
  CHECK(r.max_error <= 1e-10);
}

TEST_CASE("mapping is deterministic under a seed") {
  std::mt19937_64 rng(96);
  const auto c = compile_circuit(oracle::random_circuit(5, 40, rng, 1));
  const auto cg = CouplingGraph::parse("ring:5");
  MappingOptions opt;
  opt.seed = 42;
  CHECK(map_circuit(c, cg, opt).compiled == map_circuit(c, cg, opt).compiled);
}
