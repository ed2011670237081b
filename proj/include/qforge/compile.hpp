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
#include <string_view>
#include <utility>
#include <vector>

#include "qforge/circuit.hpp"

namespace qforge {

/// Qubit-wise dependency graph: node a -> b when b is the next gate after a
/// on some qubit they share. A barrier with no targets spans every qubit.
class GateDag {
 public:
  static GateDag build(const Circuit& c);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<GateInstruction>& nodes() const { return nodes_; }
  const std::vector<std::vector<std::size_t>>& successors() const { return succ_; }
  const std::vector<std::vector<std::size_t>>& predecessors() const { return pred_; }
  std::size_t edge_count() const;
  bool has_edge(std::size_t from, std::size_t to) const;

  /// Kahn order that always releases the lowest ready index first, so a DAG
  /// built from a circuit linearizes back to that circuit.
  std::vector<std::size_t> topological_order() const;
  Circuit to_circuit() const;

 private:
  int n_qubits_ = 0;
  std::vector<GateInstruction> nodes_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
};

/// Qubits a gate orders against (targets, controls, or all for an empty barrier).
std::vector<int> dependency_qubits(const GateInstruction& g, int n_qubits);

/// Removes adjacent gate/adjoint pairs on identical qubits, cascading until
/// no such pair remains.
GateDag pass_cancel_adjacent(const GateDag& dag);

/// Fuses adjacent same-kind rotations (and phase shifts) with identical
/// targets and controls by adding their arguments; a sum that is exactly
/// zero removes the gate.
GateDag pass_merge_rotations(const GateDag& dag);

/// Basis: RX, RY, RZ, PhaseShift and X with exactly one control. Expansions
/// are ancilla-free and need at most two controls on any internal gate, so
/// three or more controls, and two controls on a two-target gate (SWAP,
/// two-qubit custom), throw UnsupportedDecomposition.
GateDag pass_decompose(const GateDag& dag);
std::vector<GateKind> decompose_basis();
bool in_decompose_basis(const GateInstruction& g);

/// Expansion of a single gate; equal to the gate up to global phase.
std::vector<GateInstruction> decompose_gate(const GateInstruction& g);

/// U = e^{i alpha} RZ(beta) RY(gamma) RZ(delta) for a 2x2 unitary.
struct ZyzAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};
ZyzAngles zyz_decompose(const Eigen::Matrix2cd& u);

struct PipelineOptions {
  bool decompose = true;
  bool cancel = true;
  bool merge = true;
  int max_rounds = 16;
};

/// Decompose once, then alternate cancel and merge until nothing changes.
Circuit compile_circuit(const Circuit& c, const PipelineOptions& opt = {});

/// Dense unitary from simulating every basis column (small circuits only).
Eigen::MatrixXcd circuit_unitary(const Circuit& c, const ParamMap& env = {});

/// Max entrywise distance after aligning b's phase to a's largest entry.
double phase_insensitive_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

class CouplingGraph {
 public:
  CouplingGraph() = default;
  CouplingGraph(int n_physical, std::vector<std::pair<int, int>> edges);

  static CouplingGraph line(int n);
  static CouplingGraph ring(int n);
  static CouplingGraph grid(int rows, int cols);
  /// "line:N", "ring:N" or "grid:RxC".
  static CouplingGraph parse(std::string_view spec);
  /// "a b" per line; physical count is max index + 1.
  static CouplingGraph parse_edge_list(std::string_view text);

  int n_physical() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbours(int p) const { return adj_[static_cast<std::size_t>(p)]; }
  bool adjacent(int a, int b) const;
  /// Hop count; -1 when unreachable.
  int distance(int a, int b) const { return dist_[static_cast<std::size_t>(a * n_ + b)]; }
  bool is_connected() const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> dist_;
};

struct MappingOptions {
  std::uint64_t seed = 0;
  /// One forward and one reverse routing round to choose the initial layout.
  bool refine_initial_layout = false;
  int extended_set_size = 20;
  double lookahead_weight = 0.5;
  double decay = 0.9;
};

struct MappingResult {
  Circuit compiled;
  /// Logical -> physical over all physical qubits; logical indices past the
  /// circuit width are idle.
  std::vector<int> initial_layout;
  std::vector<int> final_layout;
  int swaps_inserted = 0;
};

/// Look-ahead SWAP routing. Requires gates touching at most two qubits
/// (barriers and measurements excepted) and a connected coupling graph.
MappingResult map_circuit(const Circuit& c, const CouplingGraph& cg, const MappingOptions& opt = {});

/// True when every gate touching two qubits sits on a coupling edge.
bool respects_coupling(const Circuit& c, const CouplingGraph& cg);

}  // namespace qforge
