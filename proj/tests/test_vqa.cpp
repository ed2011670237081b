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
#include "qforge/vqa.hpp"

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

std::size_t count_kind(const Circuit& c, GateKind k) {
  return static_cast<std::size_t>(
      std::count_if(c.gates().begin(), c.gates().end(), [&](const GateInstruction& g) { return g.kind == k; }));
}

Graph triangle() { return Graph::complete(3); }

ParamMap zeros(const Circuit& c) {
  ParamMap env;
  for (const auto& n : c.parameters()) env[n] = 0.0;
  return env;
}

}  // namespace

TEST_CASE("graphs") {
  const auto g = Graph::parse_edge_list("# square\n0 1\n1 2 2.5\n\n2 3\n3 0 0.5\n");
  CHECK(g.n_nodes() == 4);
  CHECK(g.edges().size() == 4);
  CHECK(g.total_weight() == 5.0);
  CHECK(g.cut_value(std::string_view("0101")) == 5.0);

  CHECK(code_of([] { Graph(2, {{0, 0, 1.0}}); }) == ErrorCode::InvalidGraph);
  CHECK(code_of([] { Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}); }) == ErrorCode::InvalidGraph);
  CHECK(code_of([] { Graph(2, {{0, 1, std::nan("")}}); }) == ErrorCode::InvalidGraph);
  CHECK(code_of([] { Graph::parse_edge_list("0 x\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { Graph::parse_edge_list("0 1 2 3\n"); }) == ErrorCode::ParseError);

  CHECK(max_cut_brute_force(triangle()).value == 2.0);
  CHECK(max_cut_brute_force(Graph::complete(5)).value == 6.0);
}

TEST_CASE("max-cut Hamiltonian") {
  const auto h = maxcut_hamiltonian(triangle());
  CHECK(h.coefficient(PauliString::parse("Z0 Z1")) == std::complex<double>(0.5, 0));
  CHECK(h.coefficient(PauliString::parse("Z1 Z2")) == std::complex<double>(0.5, 0));
  CHECK(h.coefficient(PauliString::parse("Z0 Z2")) == std::complex<double>(0.5, 0));
  CHECK(h.coefficient(PauliString()) == std::complex<double>(-1.5, 0));
  CHECK(h.terms().size() == 4);

  const Graph edge(2, {{0, 1, 1.0}});
  StateVectorD s01(2);
  sv_apply(gates::x(0), s01);
  CHECK(-sv_expectation(maxcut_hamiltonian(edge), s01) == 1.0);

  const Eigen::MatrixXcd dense = to_dense(h, 3);
  CHECK(dense.real().diagonal().minCoeff() == -2.0);
}

TEST_CASE("property: the cost Hamiltonian is diagonal and matches cut values") {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    std::vector<Edge> edges;
    std::uniform_real_distribution<double> w(0.1, 3.0);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (rng() % 2) edges.push_back({u, v, w(rng)});
      }
    }
    if (edges.empty()) edges.push_back({0, 1, 1.0});
    const Graph g(n, edges);
    const auto h = maxcut_hamiltonian(g);
    for (const auto& [s, c] : h.terms()) CHECK(s.x_mask() == 0);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
      StateVectorD psi(n);
      psi.set_basis_state(a);
      CHECK(sv_expectation(h, psi) == Catch::Approx(-g.cut_value(a)).margin(1e-12));
    }
  }
}

TEST_CASE("QAOA circuit structure") {
  const auto c = qaoa_circuit(triangle(), 1);
  CHECK(count_kind(c, GateKind::H) == 3);
  CHECK(count_kind(c, GateKind::Rzz) == 3);
  CHECK(count_kind(c, GateKind::RX) == 3);
  CHECK(c.parameters() == std::vector<std::string>{"g0", "b0"});

  const auto k5 = qaoa_circuit(Graph::complete(5), 2);
  CHECK(count_kind(k5, GateKind::Rzz) == 20);
  CHECK(count_kind(k5, GateKind::RX) == 10);
  CHECK(count_kind(k5, GateKind::H) == 5);
  CHECK(k5.parameters().size() == 4);

  const auto psi = sv_run<double>(k5, zeros(k5));
  for (Index i = 0; i < psi.dim(); ++i) CHECK(std::abs(psi[i] - std::complex<double>(std::pow(2.0, -2.5), 0)) < 1e-15);

  CHECK(code_of([] { qaoa_circuit(triangle(), 0); }) == ErrorCode::InvalidTask);
}

TEST_CASE("property: QAOA energy at zero parameters is minus half the total weight") {
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    std::vector<Edge> edges;
    for (int u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, w(rng)});
    const Graph g(n, edges);
    const auto c = qaoa_circuit(g, 2);
    CHECK(sv_expectation(maxcut_hamiltonian(g), sv_run<double>(c, zeros(c))) ==
          Catch::Approx(-g.total_weight() / 2).margin(1e-12));
  }
}

TEST_CASE("a QAOA block is the cost and mixer evolution") {
  std::mt19937_64 rng(83);
  const Graph g(3, {{0, 1, 1.3}, {1, 2, 0.4}, {0, 2, 2.0}});
  const auto c = qaoa_circuit(g, 1);
  const ParamMap env{{"g0", 0.37}, {"b0", -0.81}};
  const Eigen::MatrixXcd hc = to_dense(maxcut_hamiltonian(g), 3);
  PauliSum mixer;
  for (int q = 0; q < 3; ++q) mixer += PauliSum::parse_term("X" + std::to_string(q));
  const Eigen::MatrixXcd hb = to_dense(mixer, 3);
  const std::complex<double> i(0, 1);
  const Eigen::MatrixXcd uc = (-i * 0.37 * hc).exp();
  const Eigen::MatrixXcd ub = (-i * -0.81 * hb).exp();
  Eigen::VectorXcd plus = Eigen::VectorXcd::Constant(8, 1.0 / std::sqrt(8.0));
  const Eigen::VectorXcd want = ub * uc * plus;
  CHECK(oracle::phase_distance(want, sv_run<double>(c, env).to_double()) < 1e-12);
}

TEST_CASE("hardware-efficient ansatz") {
  const auto c = hardware_efficient(2, 1, {GateKind::RY}, GateKind::X);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == gates::ry(0, E::parameter("p0_0_0")));
  CHECK(c[1] == gates::ry(1, E::parameter("p0_1_0")));
  CHECK(c[2] == gates::cnot(0, 1));
  CHECK(hardware_efficient(4, 3, {GateKind::RY, GateKind::RZ}).parameters().size() == 24);
  for (int n : {1, 3, 5}) {
    for (int layers : {1, 2}) {
      CHECK(hardware_efficient(n, layers, {GateKind::RX, GateKind::RY, GateKind::RZ}, GateKind::Rzz)
                .parameters()
                .size() == static_cast<std::size_t>(layers * n * 3));
    }
  }
  CHECK(code_of([] { hardware_efficient(2, 1, {GateKind::H}); }) == ErrorCode::InvalidGate);
  CHECK(code_of([] { hardware_efficient(2, 1, {GateKind::RX}, GateKind::SWAP); }) == ErrorCode::InvalidGate);
}

TEST_CASE("gradient descent on a single rotation") {
  Circuit c(1);
  c.append(gates::rx(0, E::parameter("t")));
  OptimizerConfig cfg;
  cfg.kind = OptimizerKind::GradientDescent;
  cfg.learning_rate = 0.4;
  cfg.iterations = 100;
  Eigen::VectorXd start(1);
  start << 1.0;
  const auto r = optimize(c, PauliSum::parse_term("Z0"), start, cfg);
  CHECK(std::abs(r.best_params[0] - kPi) <= 1e-3);
  CHECK(r.best_value == Catch::Approx(-1.0).margin(1e-6));
  for (std::size_t k = 1; k < r.values.size(); ++k) CHECK(r.values[k] <= r.values[k - 1]);
  for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1]);
}

TEST_CASE("zero iteration budget returns the start") {
  const auto c = qaoa_circuit(triangle(), 1);
  for (auto kind : {OptimizerKind::GradientDescent, OptimizerKind::Adam, OptimizerKind::LBFGS}) {
    OptimizerConfig cfg;
    cfg.kind = kind;
    cfg.iterations = 0;
    const auto start = random_start(2, 3);
    const auto r = optimize(c, maxcut_hamiltonian(triangle()), start, cfg);
    CHECK(r.best_params == start);
    CHECK(r.trace.size() == 1);
  }
}

TEST_CASE("optimizers decrease the objective") {
  const auto g = Graph::cycle(4);
  const auto c = qaoa_circuit(g, 1);
  const auto h = maxcut_hamiltonian(g);
  for (auto kind : {OptimizerKind::GradientDescent, OptimizerKind::Adam, OptimizerKind::LBFGS}) {
    OptimizerConfig cfg;
    cfg.kind = kind;
    cfg.iterations = 150;
    cfg.learning_rate = kind == OptimizerKind::Adam ? 0.05 : 0.1;
    const auto r = optimize(c, h, 11, cfg);
    INFO(to_string(kind));
    CHECK(r.best_value < r.values.front());
    CHECK(r.best_value == r.trace.back());
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1]);
  }
}

TEST_CASE("QAOA triangle p=2 with L-BFGS") {
  const auto g = triangle();
  const auto c = qaoa_circuit(g, 2);
  OptimizerConfig cfg;
  cfg.iterations = 200;
  const auto r = optimize(c, maxcut_hamiltonian(g), 7, cfg);
  CHECK(-r.best_value >= 1.9);
}

TEST_CASE("p=1 QAOA on a single edge reaches the optimum") {
  const Graph edge(2, {{0, 1, 1.0}});
  const auto c = qaoa_circuit(edge, 1);
  const auto h = maxcut_hamiltonian(edge);
  OptimizerConfig cfg;
  cfg.iterations = 200;
  const auto r = optimize(c, h, 5, cfg);
  CHECK(-r.best_value == Catch::Approx(1.0).margin(1e-6));

  // Grid scan as an independent check of the optimum.
  double best = 0.0;
  for (int a = 0; a <= 64; ++a) {
    for (int b = 0; b <= 64; ++b) {
      const ParamMap env{{"g0", kPi * a / 64}, {"b0", kPi * b / 64}};
      best = std::max(best, -sv_expectation(h, sv_run<double>(c, env)));
    }
  }
  CHECK(best == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("diverging objectives are reported") {
  Circuit c(1);
  c.append(gates::rx(0, E::parameter("t")));
  Eigen::VectorXd start(1);
  start << std::numeric_limits<double>::infinity();
  CHECK(code_of([&] { optimize(c, PauliSum::parse_term("Z0"), start, OptimizerConfig{}); }) == ErrorCode::NonFinite);
  OptimizerConfig cfg;
  cfg.kind = OptimizerKind::GradientDescent;
  cfg.learning_rate = 1e308;
  start << 1.0;
  CHECK(code_of([&] { optimize(c, PauliSum::parse_term("Z0"), start, cfg); }) == ErrorCode::DivergedObjective);
}
