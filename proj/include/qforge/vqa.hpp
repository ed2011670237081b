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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qforge/gradient.hpp"

namespace qforge {

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

/// Undirected weighted graph. Self-loops, repeated pairs and non-finite
/// weights are rejected with InvalidGraph.
class Graph {
 public:
  Graph() = default;
  Graph(int n_nodes, std::vector<Edge> edges);

  /// "u v [w]" per line; '#' starts a comment; node count is max index + 1.
  static Graph parse_edge_list(std::string_view text);
  static Graph complete(int n);
  static Graph cycle(int n);

  int n_nodes() const { return n_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double total_weight() const;

  /// Weight of edges crossing the partition; bit u of `assignment` is node u.
  double cut_value(std::uint64_t assignment) const;
  /// Cut value of a ket-order bitstring (rightmost character is node 0).
  double cut_value(std::string_view bits) const;

 private:
  int n_nodes_ = 0;
  std::vector<Edge> edges_;
};

struct BruteForceCut {
  double value = 0.0;
  std::uint64_t assignment = 0;
};

/// Exhaustive search; InvalidGraph above 30 nodes.
BruteForceCut max_cut_brute_force(const Graph& g);

/// H = sum (w/2)(Z_u Z_v - I). Its minimum is minus the maximum cut.
PauliSum maxcut_hamiltonian(const Graph& g);

/// |+>^n, then p blocks of Rzz(w*g_k) per edge and RX(2*b_k) per node.
/// Each block is exp(-i b_k sum X) exp(-i g_k H) with H from
/// maxcut_hamiltonian, up to global phase.
Circuit qaoa_circuit(const Graph& g, int p);

/// Per layer: every rotation kind on every qubit (names p{layer}_{qubit}_{k}),
/// then a linear chain of entanglers q -> q+1. `entangler` is X (used as
/// CNOT) or Rzz (fixed angle pi/2).
Circuit hardware_efficient(int n, int layers, const std::vector<GateKind>& rotations, GateKind entangler = GateKind::X);

enum class OptimizerKind { GradientDescent, Adam, LBFGS };

const char* to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::LBFGS;
  int iterations = 100;
  double learning_rate = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int memory = 10;
  double gradient_tolerance = 1e-6;
  double armijo_c1 = 1e-4;
  int max_backtracks = 40;
};

struct OptimizeResult {
  std::vector<std::string> names;
  Eigen::VectorXd best_params;
  double best_value = 0.0;
  /// Objective at the start and after every iteration.
  std::vector<double> values;
  /// Running minimum of `values`.
  std::vector<double> trace;
  int iterations = 0;
  std::uint64_t evaluations = 0;
  bool converged = false;
};

/// Minimizes <h> over the circuit parameters (order of circuit.parameters())
/// using adjoint gradients. Throws DivergedObjective on a non-finite value.
OptimizeResult optimize(const Circuit& circuit, const PauliSum& h, const Eigen::VectorXd& start,
                        const OptimizerConfig& cfg, const GradientOptions& grad = {});

/// Start drawn uniformly from [-0.1, 0.1] with a seeded generator.
Eigen::VectorXd random_start(std::size_t n_params, std::uint64_t seed);

OptimizeResult optimize(const Circuit& circuit, const PauliSum& h, std::uint64_t seed, const OptimizerConfig& cfg,
                        const GradientOptions& grad = {});

}  // namespace qforge
