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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qforge/core.hpp"
#include "qforge/expr.hpp"

namespace qforge {

enum class GateKind {
  X,
  Y,
  Z,
  H,
  S,
  T,
  SWAP,
  RX,
  RY,
  RZ,
  Rxx,
  Ryy,
  Rzz,
  PhaseShift,
  Custom,
  Measure,
  Barrier,
};

/// Kernel family a gate is routed to by the state-vector engine.
enum class GateClass {
  XLike,    // 1 target, anti-diagonal matrix
  ZLike,    // diagonal matrix (1 or 2 targets)
  General,  // dense 2x2 / 4x4
  NonUnitary,
};

const char* to_string(GateKind kind);
GateKind parse_gate_kind(std::string_view name);
std::vector<GateKind> all_unitary_kinds();

/// Static classification; checked against gate_matrix zero patterns in tests.
GateClass gate_class(GateKind kind);
bool is_rotation(GateKind kind);       // RX RY RZ Rxx Ryy Rzz
bool is_parameterized(GateKind kind);  // rotations and PhaseShift
bool is_self_adjoint(GateKind kind);
int gate_arity(GateKind kind);         // 0 for Custom/Measure/Barrier (variable)

struct GateInstruction {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  std::vector<int> controls;  // kept sorted
  std::optional<ParameterExpression> arg;
  Eigen::MatrixXcd matrix;  // Custom payload; target-local index b0 + 2*b1
  bool allow_non_unitary = false;
  std::string label;  // Measure classical label

  int num_targets() const { return static_cast<int>(targets.size()); }
  std::vector<int> qubits() const;  // targets then controls
  bool acts_on(int q) const;
  int max_qubit() const;

  /// Numeric rotation angle; throws MissingParameter for unbound names.
  double angle(const ParamMap& env) const;

  friend bool operator==(const GateInstruction& a, const GateInstruction& b);
};

namespace gates {

GateInstruction x(int t);
GateInstruction y(int t);
GateInstruction z(int t);
GateInstruction h(int t);
GateInstruction s(int t);
GateInstruction t(int q);
GateInstruction cnot(int control, int target);
GateInstruction swap(int a, int b);
GateInstruction rx(int t, ParameterExpression arg);
GateInstruction ry(int t, ParameterExpression arg);
GateInstruction rz(int t, ParameterExpression arg);
GateInstruction rxx(int a, int b, ParameterExpression arg);
GateInstruction ryy(int a, int b, ParameterExpression arg);
GateInstruction rzz(int a, int b, ParameterExpression arg);
GateInstruction phase_shift(int t, ParameterExpression arg);
GateInstruction custom(std::vector<int> targets, Eigen::MatrixXcd m, bool allow_non_unitary = false);
GateInstruction measure(std::vector<int> qubits, std::string label = {});
GateInstruction barrier(std::vector<int> qubits);

/// Generic constructor; `arg` is required for parameterized kinds.
GateInstruction make(GateKind kind, std::vector<int> targets, std::vector<int> controls = {},
                     std::optional<ParameterExpression> arg = std::nullopt);

}  // namespace gates

/// Attach (additional) controls, e.g. `controlled(gates::x(1), {0})` is CNOT.
GateInstruction controlled(GateInstruction g, std::vector<int> controls);

/// Structural checks that do not depend on the circuit width.
void validate_gate(const GateInstruction& g);
void validate_gate(const GateInstruction& g, int n_qubits);

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<GateInstruction>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  const GateInstruction& operator[](std::size_t i) const { return gates_[i]; }

  Circuit& append(GateInstruction g);
  Circuit& operator+=(GateInstruction g) { return append(std::move(g)); }
  Circuit& operator+=(const Circuit& other);

  /// Parameter names in first-appearance order.
  std::vector<std::string> parameters() const;
  bool has_measure() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int n_qubits_ = 0;
  std::vector<GateInstruction> gates_;
};

Circuit circuit_append(Circuit c, GateInstruction g);

/// Adjoint of a single gate (Measure throws NonInvertible).
GateInstruction gate_inverse(const GateInstruction& g);
Circuit circuit_inverse(const Circuit& c);

/// Target-space matrix with controls ignored. Two-target matrices use the
/// local index b0 + 2*b1 where b0 is the bit of targets[0].
Eigen::MatrixXcd gate_matrix(const GateInstruction& g, const ParamMap& env = {});
Eigen::MatrixXcd gate_matrix(GateKind kind, double angle, const Eigen::MatrixXcd& custom = {});

bool is_unitary(const Eigen::MatrixXcd& m, double tol = 1e-8);

/// Heap-free 2x2 or 4x4 row-major matrix used on kernel hot paths.
struct SmallMatrix {
  int dim = 2;
  std::array<std::complex<double>, 16> a{};

  std::complex<double>& operator()(int r, int c) { return a[static_cast<std::size_t>(r * dim + c)]; }
  const std::complex<double>& operator()(int r, int c) const { return a[static_cast<std::size_t>(r * dim + c)]; }

  SmallMatrix adjoint() const;
  SmallMatrix conjugate() const;
  Eigen::MatrixXcd to_eigen() const;
  static SmallMatrix from_eigen(const Eigen::MatrixXcd& m);
};

SmallMatrix small_gate_matrix(GateKind kind, double angle, const Eigen::MatrixXcd& custom = {});

}  // namespace qforge
