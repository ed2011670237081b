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

#include "qforge/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace qforge {

namespace {

struct KindInfo {
  GateKind kind;
  const char* name;
};

constexpr KindInfo kKinds[] = {
    {GateKind::X, "x"},         {GateKind::Y, "y"},         {GateKind::Z, "z"},
    {GateKind::H, "h"},         {GateKind::S, "s"},         {GateKind::T, "t"},
    {GateKind::SWAP, "swap"},   {GateKind::RX, "rx"},       {GateKind::RY, "ry"},
    {GateKind::RZ, "rz"},       {GateKind::Rxx, "rxx"},     {GateKind::Ryy, "ryy"},
    {GateKind::Rzz, "rzz"},     {GateKind::PhaseShift, "ps"}, {GateKind::Custom, "custom"},
    {GateKind::Measure, "measure"}, {GateKind::Barrier, "barrier"},
};

using C = std::complex<double>;
constexpr C kI{0.0, 1.0};

}  // namespace

const char* to_string(GateKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "phaseshift" || lower == "phase_shift" || lower == "p") return GateKind::PhaseShift;
  if (lower == "cnot" || lower == "cx") return GateKind::X;
  for (const auto& k : kKinds) {
    if (lower == k.name) return k.kind;
  }
  throw Error(ErrorCode::ParseError, "unknown gate kind '" + std::string(name) + "'");
}

std::vector<GateKind> all_unitary_kinds() {
  return {GateKind::X,   GateKind::Y,   GateKind::Z,   GateKind::H,   GateKind::S,
          GateKind::T,   GateKind::SWAP, GateKind::RX, GateKind::RY,  GateKind::RZ,
          GateKind::Rxx, GateKind::Ryy, GateKind::Rzz, GateKind::PhaseShift, GateKind::Custom};
}

GateClass gate_class(GateKind kind) {
  switch (kind) {
    case GateKind::X:
    case GateKind::Y:
      return GateClass::XLike;
    case GateKind::Z:
    case GateKind::S:
    case GateKind::T:
    case GateKind::RZ:
    case GateKind::PhaseShift:
    case GateKind::Rzz:
      return GateClass::ZLike;
    case GateKind::Measure:
    case GateKind::Barrier:
      return GateClass::NonUnitary;
    default:
      return GateClass::General;
  }
}

bool is_rotation(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::Rxx:
    case GateKind::Ryy:
    case GateKind::Rzz:
      return true;
    default:
      return false;
  }
}

bool is_parameterized(GateKind kind) { return is_rotation(kind) || kind == GateKind::PhaseShift; }

bool is_self_adjoint(GateKind kind) {
  switch (kind) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::SWAP:
    case GateKind::Barrier:
      return true;
    default:
      return false;
  }
}

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::SWAP:
    case GateKind::Rxx:
    case GateKind::Ryy:
    case GateKind::Rzz:
      return 2;
    case GateKind::Custom:
    case GateKind::Measure:
    case GateKind::Barrier:
      return 0;
    default:
      return 1;
  }
}

std::vector<int> GateInstruction::qubits() const {
  std::vector<int> q = targets;
  q.insert(q.end(), controls.begin(), controls.end());
  return q;
}

bool GateInstruction::acts_on(int q) const {
  return std::find(targets.begin(), targets.end(), q) != targets.end() ||
         std::binary_search(controls.begin(), controls.end(), q);
}

int GateInstruction::max_qubit() const {
  int m = -1;
  for (int q : targets) m = std::max(m, q);
  for (int q : controls) m = std::max(m, q);
  return m;
}

double GateInstruction::angle(const ParamMap& env) const { return arg ? arg->eval(env) : 0.0; }

bool operator==(const GateInstruction& a, const GateInstruction& b) {
  if (a.kind != b.kind || a.targets != b.targets || a.controls != b.controls || a.arg != b.arg ||
      a.label != b.label) {
    return false;
  }
  if (a.kind != GateKind::Custom) return true;
  return a.matrix.rows() == b.matrix.rows() && a.matrix.cols() == b.matrix.cols() && a.matrix == b.matrix;
}

namespace gates {

GateInstruction make(GateKind kind, std::vector<int> targets, std::vector<int> controls,
                     std::optional<ParameterExpression> arg) {
  GateInstruction g;
  g.kind = kind;
  g.targets = std::move(targets);
  std::sort(controls.begin(), controls.end());
  g.controls = std::move(controls);
  g.arg = std::move(arg);
  validate_gate(g);
  return g;
}

GateInstruction x(int t) { return make(GateKind::X, {t}); }
GateInstruction y(int t) { return make(GateKind::Y, {t}); }
GateInstruction z(int t) { return make(GateKind::Z, {t}); }
GateInstruction h(int t) { return make(GateKind::H, {t}); }
GateInstruction s(int t) { return make(GateKind::S, {t}); }
GateInstruction t(int q) { return make(GateKind::T, {q}); }
GateInstruction cnot(int control, int target) { return make(GateKind::X, {target}, {control}); }
GateInstruction swap(int a, int b) { return make(GateKind::SWAP, {a, b}); }
GateInstruction rx(int t, ParameterExpression arg) { return make(GateKind::RX, {t}, {}, std::move(arg)); }
GateInstruction ry(int t, ParameterExpression arg) { return make(GateKind::RY, {t}, {}, std::move(arg)); }
GateInstruction rz(int t, ParameterExpression arg) { return make(GateKind::RZ, {t}, {}, std::move(arg)); }
GateInstruction rxx(int a, int b, ParameterExpression arg) {
  return make(GateKind::Rxx, {a, b}, {}, std::move(arg));
}
GateInstruction ryy(int a, int b, ParameterExpression arg) {
  return make(GateKind::Ryy, {a, b}, {}, std::move(arg));
}
GateInstruction rzz(int a, int b, ParameterExpression arg) {
  return make(GateKind::Rzz, {a, b}, {}, std::move(arg));
}
GateInstruction phase_shift(int t, ParameterExpression arg) {
  return make(GateKind::PhaseShift, {t}, {}, std::move(arg));
}

GateInstruction custom(std::vector<int> targets, Eigen::MatrixXcd m, bool allow_non_unitary) {
  GateInstruction g;
  g.kind = GateKind::Custom;
  g.targets = std::move(targets);
  g.matrix = std::move(m);
  g.allow_non_unitary = allow_non_unitary;
  validate_gate(g);
  return g;
}

GateInstruction measure(std::vector<int> qubits, std::string label) {
  GateInstruction g;
  g.kind = GateKind::Measure;
  g.targets = std::move(qubits);
  g.label = std::move(label);
  validate_gate(g);
  return g;
}

GateInstruction barrier(std::vector<int> qubits) { return make(GateKind::Barrier, std::move(qubits)); }

}  // namespace gates

GateInstruction controlled(GateInstruction g, std::vector<int> controls) {
  g.controls.insert(g.controls.end(), controls.begin(), controls.end());
  std::sort(g.controls.begin(), g.controls.end());
  validate_gate(g);
  return g;
}

bool is_unitary(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  Eigen::MatrixXcd d = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

void validate_gate(const GateInstruction& g) {
  const auto fail = [&](ErrorCode code, const std::string& why) {
    throw Error(code, std::string(to_string(g.kind)) + ": " + why);
  };
  if (g.targets.empty()) fail(ErrorCode::InvalidGate, "no target qubits");
  const int arity = gate_arity(g.kind);
  if (arity > 0 && g.num_targets() != arity) {
    fail(ErrorCode::InvalidGate, "expects " + std::to_string(arity) + " target(s)");
  }
  std::unordered_set<int> seen;
  for (int q : g.targets) {
    if (q < 0) fail(ErrorCode::IndexOutOfRange, "negative qubit index");
    if (!seen.insert(q).second) fail(ErrorCode::InvalidGate, "duplicate target " + std::to_string(q));
  }
  for (std::size_t i = 0; i < g.controls.size(); ++i) {
    int q = g.controls[i];
    if (q < 0) fail(ErrorCode::IndexOutOfRange, "negative qubit index");
    if (seen.count(q)) fail(ErrorCode::OverlappingTargetControl, "qubit " + std::to_string(q) + " is target and control");
    if (i > 0 && g.controls[i - 1] == q) fail(ErrorCode::InvalidGate, "duplicate control " + std::to_string(q));
  }
  if (is_parameterized(g.kind) && !g.arg) fail(ErrorCode::InvalidGate, "missing angle argument");
  if (!is_parameterized(g.kind) && g.kind != GateKind::Custom && g.arg) {
    fail(ErrorCode::InvalidGate, "fixed gate takes no argument");
  }
  if ((g.kind == GateKind::Measure || g.kind == GateKind::Barrier) && !g.controls.empty()) {
    fail(ErrorCode::InvalidGate, "cannot be controlled");
  }
  if (g.kind == GateKind::Custom) {
    if (g.num_targets() > 2) fail(ErrorCode::InvalidGate, "custom matrices act on 1 or 2 targets");
    const Eigen::Index dim = Eigen::Index{1} << g.num_targets();
    if (g.matrix.rows() != dim || g.matrix.cols() != dim) {
      fail(ErrorCode::InvalidGate, "matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (!g.allow_non_unitary && !is_unitary(g.matrix, 1e-8)) fail(ErrorCode::NonUnitary, "matrix is not unitary");
  }
}

void validate_gate(const GateInstruction& g, int n_qubits) {
  validate_gate(g);
  if (g.max_qubit() >= n_qubits) {
    throw Error(ErrorCode::IndexOutOfRange, std::string(to_string(g.kind)) + ": qubit " +
                                                std::to_string(g.max_qubit()) + " outside circuit of " +
                                                std::to_string(n_qubits) + " qubits");
  }
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0) throw Error(ErrorCode::InvalidGate, "circuit needs at least one qubit");
}

Circuit& Circuit::append(GateInstruction g) {
  validate_gate(g, n_qubits_);
  gates_.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::operator+=(const Circuit& other) {
  for (const auto& g : other.gates()) append(g);
  return *this;
}

std::vector<std::string> Circuit::parameters() const {
  std::vector<std::string> names;
  std::unordered_set<std::string> seen;
  for (const auto& g : gates_) {
    if (!g.arg) continue;
    // terms() iterates by name; first appearance is by gate order, then name.
    for (const auto& [name, c] : g.arg->terms()) {
      if (seen.insert(name).second) names.push_back(name);
    }
  }
  return names;
}

bool Circuit::has_measure() const {
  return std::any_of(gates_.begin(), gates_.end(), [](const auto& g) { return g.kind == GateKind::Measure; });
}

Circuit circuit_append(Circuit c, GateInstruction g) {
  c.append(std::move(g));
  return c;
}

GateInstruction gate_inverse(const GateInstruction& g) {
  GateInstruction inv = g;
  switch (g.kind) {
    case GateKind::Measure:
      throw Error(ErrorCode::NonInvertible, "measurement cannot be inverted");
    case GateKind::S:
      inv.kind = GateKind::PhaseShift;
      inv.arg = ParameterExpression(-kPi / 2);
      break;
    case GateKind::T:
      inv.kind = GateKind::PhaseShift;
      inv.arg = ParameterExpression(-kPi / 4);
      break;
    case GateKind::Custom:
      inv.matrix = g.matrix.adjoint();
      break;
    default:
      if (is_parameterized(g.kind)) inv.arg = expr_scale(*g.arg, -1.0);
      break;
  }
  return inv;
}

Circuit circuit_inverse(const Circuit& c) {
  Circuit out(c.n_qubits());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) out.append(gate_inverse(*it));
  return out;
}

SmallMatrix SmallMatrix::adjoint() const {
  SmallMatrix out;
  out.dim = dim;
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) out(r, c) = std::conj((*this)(c, r));
  }
  return out;
}

SmallMatrix SmallMatrix::conjugate() const {
  SmallMatrix out = *this;
  for (auto& v : out.a) v = std::conj(v);
  return out;
}

Eigen::MatrixXcd SmallMatrix::to_eigen() const {
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = (*this)(r, c);
  }
  return m;
}

SmallMatrix SmallMatrix::from_eigen(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    throw Error(ErrorCode::InvalidGate, "kernel matrices must be 2x2 or 4x4");
  }
  SmallMatrix out;
  out.dim = static_cast<int>(m.rows());
  for (int r = 0; r < out.dim; ++r) {
    for (int c = 0; c < out.dim; ++c) out(r, c) = m(r, c);
  }
  return out;
}

SmallMatrix small_gate_matrix(GateKind kind, double angle, const Eigen::MatrixXcd& custom) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  const C mis{0.0, -s};
  SmallMatrix m;
  switch (kind) {
    case GateKind::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case GateKind::Y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case GateKind::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      m(0, 0) = r;
      m(0, 1) = r;
      m(1, 0) = r;
      m(1, 1) = -r;
      break;
    }
    case GateKind::S:
      m(0, 0) = 1.0;
      m(1, 1) = kI;
      break;
    case GateKind::T:
      m(0, 0) = 1.0;
      m(1, 1) = C{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
      break;
    case GateKind::PhaseShift:
      m(0, 0) = 1.0;
      m(1, 1) = C{std::cos(angle), std::sin(angle)};
      break;
    case GateKind::RX:
      m(0, 0) = c;
      m(0, 1) = mis;
      m(1, 0) = mis;
      m(1, 1) = c;
      break;
    case GateKind::RY:
      m(0, 0) = c;
      m(0, 1) = -s;
      m(1, 0) = s;
      m(1, 1) = c;
      break;
    case GateKind::RZ:
      m(0, 0) = C{c, -s};
      m(1, 1) = C{c, s};
      break;
    case GateKind::SWAP:
      m.dim = 4;
      m(0, 0) = 1.0;
      m(1, 2) = 1.0;
      m(2, 1) = 1.0;
      m(3, 3) = 1.0;
      break;
    case GateKind::Rxx:
      m.dim = 4;
      for (int i = 0; i < 4; ++i) {
        m(i, i) = c;
        m(i, 3 - i) = mis;
      }
      break;
    case GateKind::Ryy:
      // YY = antidiag(-1, 1, 1, -1)
      m.dim = 4;
      for (int i = 0; i < 4; ++i) {
        m(i, i) = c;
        m(i, 3 - i) = (i == 0 || i == 3) ? -mis : mis;
      }
      break;
    case GateKind::Rzz:
      m.dim = 4;
      m(0, 0) = C{c, -s};
      m(1, 1) = C{c, s};
      m(2, 2) = C{c, s};
      m(3, 3) = C{c, -s};
      break;
    case GateKind::Custom:
      m = SmallMatrix::from_eigen(custom);
      break;
    case GateKind::Measure:
    case GateKind::Barrier:
      throw Error(ErrorCode::InvalidGate, std::string(to_string(kind)) + " has no matrix");
  }
  return m;
}

Eigen::MatrixXcd gate_matrix(GateKind kind, double angle, const Eigen::MatrixXcd& custom) {
  return small_gate_matrix(kind, angle, custom).to_eigen();
}

Eigen::MatrixXcd gate_matrix(const GateInstruction& g, const ParamMap& env) {
  if (g.kind == GateKind::Barrier) {
    return Eigen::MatrixXcd::Identity(Eigen::Index{1} << g.num_targets(), Eigen::Index{1} << g.num_targets());
  }
  const double angle = is_parameterized(g.kind) ? g.angle(env) : 0.0;
  return gate_matrix(g.kind, angle, g.matrix);
}

}  // namespace qforge
