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

#include "qforge/compile.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "qforge/statevector.hpp"

namespace qforge {

std::vector<int> dependency_qubits(const GateInstruction& g, int n_qubits) {
  if (g.kind == GateKind::Barrier && g.targets.empty()) {
    std::vector<int> all(static_cast<std::size_t>(n_qubits));
    for (int q = 0; q < n_qubits; ++q) all[static_cast<std::size_t>(q)] = q;
    return all;
  }
  return g.qubits();
}

GateDag GateDag::build(const Circuit& c) {
  GateDag dag;
  dag.n_qubits_ = c.n_qubits();
  dag.nodes_ = c.gates();
  dag.succ_.assign(dag.nodes_.size(), {});
  dag.pred_.assign(dag.nodes_.size(), {});
  std::vector<std::ptrdiff_t> last(static_cast<std::size_t>(c.n_qubits()), -1);
  for (std::size_t i = 0; i < dag.nodes_.size(); ++i) {
    for (int q : dependency_qubits(dag.nodes_[i], c.n_qubits())) {
      const auto prev = last[static_cast<std::size_t>(q)];
      if (prev >= 0) {
        auto& s = dag.succ_[static_cast<std::size_t>(prev)];
        if (std::find(s.begin(), s.end(), i) == s.end()) {
          s.push_back(i);
          dag.pred_[i].push_back(static_cast<std::size_t>(prev));
        }
      }
      last[static_cast<std::size_t>(q)] = static_cast<std::ptrdiff_t>(i);
    }
  }
  return dag;
}

std::size_t GateDag::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : succ_) n += s.size();
  return n;
}

bool GateDag::has_edge(std::size_t from, std::size_t to) const {
  const auto& s = succ_.at(from);
  return std::find(s.begin(), s.end(), to) != s.end();
}

std::vector<std::size_t> GateDag::topological_order() const {
  std::vector<std::size_t> indeg(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) indeg[i] = pred_[i].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (indeg[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(nodes_.size());
  while (!ready.empty()) {
    const auto i = ready.top();
    ready.pop();
    order.push_back(i);
    for (auto j : succ_[i]) {
      if (--indeg[j] == 0) ready.push(j);
    }
  }
  return order;
}

Circuit GateDag::to_circuit() const {
  Circuit c(n_qubits_);
  for (auto i : topological_order()) c.append(nodes_[i]);
  return c;
}

namespace {

bool symmetric_targets(GateKind k) {
  return k == GateKind::SWAP || k == GateKind::Rxx || k == GateKind::Ryy || k == GateKind::Rzz;
}

GateInstruction canonical(GateInstruction g) {
  if (symmetric_targets(g.kind)) std::sort(g.targets.begin(), g.targets.end());
  return g;
}

std::vector<int> sorted_qubits(const GateInstruction& g, int n) {
  auto q = dependency_qubits(g, n);
  std::sort(q.begin(), q.end());
  return q;
}

bool is_inverse_pair(const GateInstruction& a, const GateInstruction& b) {
  if (a.kind == GateKind::Measure || a.kind == GateKind::Barrier) return false;
  if (b.kind == GateKind::Measure || b.kind == GateKind::Barrier) return false;
  return canonical(gate_inverse(a)) == canonical(b);
}

bool is_mergeable(GateKind k) { return is_parameterized(k); }

// Shared driver: each kept gate sits on the stack of every qubit it touches,
// so "top of all my stacks is j and j spans exactly my qubits" means j is
// adjacent to the incoming gate in the DAG. `combine` returns
//   0: keep both, 1: drop both, 2: incoming absorbed into j.
template <typename Combine>
Circuit stack_pass(const Circuit& in, Combine combine) {
  const int n = in.n_qubits();
  std::vector<GateInstruction> kept;
  std::vector<bool> alive;
  std::vector<std::vector<std::size_t>> stacks(static_cast<std::size_t>(n));
  for (const auto& g : in.gates()) {
    const auto qs = sorted_qubits(g, n);
    std::ptrdiff_t top = -1;
    bool same = !qs.empty();
    for (int q : qs) {
      const auto& s = stacks[static_cast<std::size_t>(q)];
      const std::ptrdiff_t t = s.empty() ? -1 : static_cast<std::ptrdiff_t>(s.back());
      if (q == qs.front()) top = t;
      if (t != top || t < 0) same = false;
    }
    if (same && sorted_qubits(kept[static_cast<std::size_t>(top)], n) == qs) {
      const int action = combine(kept[static_cast<std::size_t>(top)], g);
      if (action == 1) {
        alive[static_cast<std::size_t>(top)] = false;
        for (int q : qs) stacks[static_cast<std::size_t>(q)].pop_back();
        continue;
      }
      if (action == 2) continue;
    }
    kept.push_back(g);
    alive.push_back(true);
    for (int q : qs) stacks[static_cast<std::size_t>(q)].push_back(kept.size() - 1);
  }
  Circuit out(n);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (alive[i]) out.append(kept[i]);
  }
  return out;
}

}  // namespace

GateDag pass_cancel_adjacent(const GateDag& dag) {
  return GateDag::build(stack_pass(dag.to_circuit(), [](const GateInstruction& prev, const GateInstruction& g) {
    return is_inverse_pair(prev, g) ? 1 : 0;
  }));
}

GateDag pass_merge_rotations(const GateDag& dag) {
  return GateDag::build(stack_pass(dag.to_circuit(), [](GateInstruction& prev, const GateInstruction& g) {
    if (!is_mergeable(g.kind) || prev.kind != g.kind) return 0;
    const auto a = canonical(prev), b = canonical(g);
    if (a.targets != b.targets || a.controls != b.controls) return 0;
    prev.arg = expr_add(*prev.arg, *g.arg);
    if (prev.arg->is_constant() && prev.arg->constant() == 0.0) return 1;
    return 2;
  }));
}

// ---------------------------------------------------------------------------
// Decomposition

ZyzAngles zyz_decompose(const Eigen::Matrix2cd& u) {
  ZyzAngles z;
  z.alpha = std::arg(u.determinant()) / 2;
  const Eigen::Matrix2cd v = u * std::exp(std::complex<double>(0, -z.alpha));
  const auto a = v(0, 0), b = v(1, 0);
  z.gamma = 2 * std::atan2(std::abs(b), std::abs(a));
  const double sum = std::abs(a) > 1e-14 ? -2 * std::arg(a) : 0.0;
  const double diff = std::abs(b) > 1e-14 ? 2 * std::arg(b) : 0.0;
  z.beta = (sum + diff) / 2;
  z.delta = (sum - diff) / 2;
  return z;
}

std::vector<GateKind> decompose_basis() {
  return {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::PhaseShift, GateKind::X};
}

bool in_decompose_basis(const GateInstruction& g) {
  switch (g.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::PhaseShift:
      return g.controls.empty();
    case GateKind::X:
      return g.controls.size() == 1;
    case GateKind::Measure:
    case GateKind::Barrier:
      return true;
    default:
      return false;
  }
}

namespace {

using E = ParameterExpression;

struct Step {
  GateInstruction gate;
  bool controlled = true;  // false: conjugating gate, left uncontrolled
};

struct Expansion {
  double alpha = 0.0;  // global phase of the uncontrolled expansion
  std::vector<Step> steps;
};

class Decomposer {
 public:
  explicit Decomposer(std::vector<GateInstruction>& out) : out_(out) {}

  void expand(const GateInstruction& g, const std::vector<int>& extra) {
    std::vector<int> ctrl = g.controls;
    ctrl.insert(ctrl.end(), extra.begin(), extra.end());
    std::sort(ctrl.begin(), ctrl.end());
    ctrl.erase(std::unique(ctrl.begin(), ctrl.end()), ctrl.end());
    if (g.kind == GateKind::Measure || g.kind == GateKind::Barrier) {
      out_.push_back(g);
      return;
    }
    if (ctrl.size() > 2 || (ctrl.size() == 2 && g.targets.size() == 2)) {
      throw Error(ErrorCode::UnsupportedDecomposition,
                  std::string(to_string(g.kind)) + " with " + std::to_string(ctrl.size()) + " controls");
    }
    switch (g.kind) {
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ:
      case GateKind::PhaseShift:
        leaf(g.kind, g.targets[0], *g.arg, ctrl);
        return;
      case GateKind::X:
        if (!ctrl.empty()) {
          leaf(GateKind::X, g.targets[0], E(0.0), ctrl);
          return;
        }
        break;
      default:
        break;
    }
    GateInstruction bare = g;
    bare.controls.clear();
    const auto ex = expansion(bare, !ctrl.empty());
    for (const auto& s : ex.steps) expand(s.gate, s.controlled ? ctrl : std::vector<int>{});
    if (!ctrl.empty() && ex.alpha != 0.0) phase(ex.alpha, ctrl);
  }

 private:
  void emit(GateInstruction g) { out_.push_back(std::move(g)); }

  // e^{i a} on the subspace where every control is set.
  void phase(double a, std::vector<int> ctrl) {
    const int c = ctrl.back();
    ctrl.pop_back();
    leaf(GateKind::PhaseShift, c, E(a), ctrl);
  }

  void leaf(GateKind kind, int t, const E& arg, std::vector<int> ctrl) {
    if (ctrl.empty()) {
      if (kind == GateKind::X) {
        emit(gates::rx(t, kPi));  // X = i RX(pi)
      } else {
        emit(gates::make(kind, {t}, {}, arg));
      }
      return;
    }
    const int c = ctrl.back();
    std::vector<int> rest(ctrl.begin(), ctrl.end() - 1);
    switch (kind) {
      case GateKind::X:
        if (ctrl.size() == 1) {
          emit(gates::cnot(c, t));
        } else if (ctrl.size() == 2) {
          toffoli(ctrl[0], ctrl[1], t);
        } else {
          throw Error(ErrorCode::UnsupportedDecomposition, "X with more than two controls");
        }
        return;
      case GateKind::RY:
      case GateKind::RZ:
        // X R(a) X = R(-a) for R in {RY, RZ}.
        leaf(kind, t, 0.5 * arg, rest);
        leaf(GateKind::X, t, E(0.0), ctrl);
        leaf(kind, t, -0.5 * arg, rest);
        leaf(GateKind::X, t, E(0.0), ctrl);
        return;
      case GateKind::RX:
        // RX(a) = RZ(-pi/2) RY(a) RZ(pi/2).
        emit(gates::rz(t, kPi / 2));
        leaf(GateKind::RY, t, arg, ctrl);
        emit(gates::rz(t, -kPi / 2));
        return;
      case GateKind::PhaseShift:
        // P(a) = e^{i a/2} RZ(a).
        leaf(GateKind::RZ, t, arg, ctrl);
        leaf(GateKind::PhaseShift, c, 0.5 * arg, rest);
        return;
      default:
        throw Error(ErrorCode::UnsupportedDecomposition, "no leaf rule");
    }
  }

  void hadamard(int t) {
    emit(gates::rz(t, kPi / 2));
    emit(gates::rx(t, kPi / 2));
    emit(gates::rz(t, kPi / 2));
  }

  void toffoli(int a, int b, int t) {
    const E tp(kPi / 4), tm(-kPi / 4);
    hadamard(t);
    emit(gates::cnot(b, t));
    emit(gates::phase_shift(t, tm));
    emit(gates::cnot(a, t));
    emit(gates::phase_shift(t, tp));
    emit(gates::cnot(b, t));
    emit(gates::phase_shift(t, tm));
    emit(gates::cnot(a, t));
    emit(gates::phase_shift(b, tp));
    emit(gates::phase_shift(t, tp));
    hadamard(t);
    emit(gates::cnot(a, b));
    emit(gates::phase_shift(a, tp));
    emit(gates::phase_shift(b, tm));
    emit(gates::cnot(a, b));
  }

  static Expansion single_qubit(int t, const Eigen::Matrix2cd& u) {
    const auto z = zyz_decompose(u);
    Expansion ex;
    ex.alpha = z.alpha;
    ex.steps.push_back({gates::rz(t, z.delta)});
    ex.steps.push_back({gates::ry(t, z.gamma)});
    ex.steps.push_back({gates::rz(t, z.beta)});
    return ex;
  }

  // Global phase that makes `steps` (uncontrolled, single target) equal `u`.
  static double phase_of(const std::vector<Step>& steps, const Eigen::Matrix2cd& u) {
    Eigen::Matrix2cd v = Eigen::Matrix2cd::Identity();
    for (const auto& s : steps) v = Eigen::Matrix2cd(gate_matrix(s.gate)) * v;
    Eigen::Index r = 0, c = 0;
    u.cwiseAbs().maxCoeff(&r, &c);
    return std::arg(u(r, c) / v(r, c));
  }

  static void two_level(std::size_t i, std::size_t j, Eigen::Matrix2cd m, int t0, int t1, Expansion& ex) {
    if ((m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15) return;
    const std::size_t diff = i ^ j;
    if (diff == 3) {
      // CNOT(t0 -> t1) maps the pair to one differing only in bit 0.
      const auto f = [](std::size_t x) { return x ^ ((x & 1U) << 1); };
      ex.steps.push_back({gates::cnot(t0, t1), false});
      two_level(f(i), f(j), m, t0, t1, ex);
      ex.steps.push_back({gates::cnot(t0, t1), false});
      return;
    }
    const int k = diff == 1 ? 0 : 1;
    const int target = k == 0 ? t0 : t1;
    const int other = k == 0 ? t1 : t0;
    const bool control_value = ((i >> (1 - k)) & 1U) != 0;
    if ((i >> k) & 1U) {
      std::swap(m(0, 0), m(1, 1));
      std::swap(m(0, 1), m(1, 0));
    }
    if (!control_value) ex.steps.push_back({gates::x(other), false});
    auto g = gates::custom({target}, m);
    g.controls = {other};
    ex.steps.push_back({g, true});
    if (!control_value) ex.steps.push_back({gates::x(other), false});
  }

  // Givens elimination into two-level unitaries: G_k..G_1 U = D, so the
  // circuit is D, then G_k^dagger .. G_1^dagger.
  static Expansion two_qubit(int t0, int t1, Eigen::Matrix4cd u) {
    struct Rot {
      std::size_t i, j;
      Eigen::Matrix2cd g;
    };
    std::vector<Rot> rots;
    for (Eigen::Index c = 0; c < 3; ++c) {
      for (Eigen::Index r = c + 1; r < 4; ++r) {
        const auto a = u(c, c), b = u(r, c);
        if (std::abs(b) < 1e-15) continue;
        const double nrm = std::hypot(std::abs(a), std::abs(b));
        Eigen::Matrix2cd g;
        g << std::conj(a), std::conj(b), -b, a;
        g /= nrm;
        const Eigen::RowVector4cd rc = u.row(c), rr = u.row(r);
        u.row(c) = g(0, 0) * rc + g(0, 1) * rr;
        u.row(r) = g(1, 0) * rc + g(1, 1) * rr;
        rots.push_back({static_cast<std::size_t>(c), static_cast<std::size_t>(r), g});
      }
      const auto p = u(c, c);
      if (std::abs(std::arg(p)) > 1e-15) {
        Eigen::Matrix2cd g = Eigen::Matrix2cd::Identity();
        g(0, 0) = std::conj(p) / std::abs(p);
        u.row(c) *= g(0, 0);
        rots.push_back({static_cast<std::size_t>(c), 3, g});
      }
    }
    Expansion ex;
    Eigen::Matrix2cd d = Eigen::Matrix2cd::Identity();
    d(1, 1) = u(3, 3) / std::abs(u(3, 3));
    two_level(2, 3, d, t0, t1, ex);
    for (auto it = rots.rbegin(); it != rots.rend(); ++it) two_level(it->i, it->j, it->g.adjoint(), t0, t1, ex);
    return ex;
  }

  Expansion expansion(const GateInstruction& g, bool need_phase) const {
    Expansion ex;
    const int t = g.targets[0];
    switch (g.kind) {
      case GateKind::X:
        ex.alpha = kPi / 2;
        ex.steps.push_back({gates::rx(t, kPi)});
        return ex;
      case GateKind::Y:
        ex.alpha = kPi / 2;
        ex.steps.push_back({gates::ry(t, kPi)});
        return ex;
      case GateKind::Z:
        ex.steps.push_back({gates::phase_shift(t, kPi)});
        return ex;
      case GateKind::S:
        ex.steps.push_back({gates::phase_shift(t, kPi / 2)});
        return ex;
      case GateKind::T:
        ex.steps.push_back({gates::phase_shift(t, kPi / 4)});
        return ex;
      case GateKind::H:
        ex.steps.push_back({gates::rz(t, kPi / 2)});
        ex.steps.push_back({gates::rx(t, kPi / 2)});
        ex.steps.push_back({gates::rz(t, kPi / 2)});
        if (need_phase) ex.alpha = phase_of(ex.steps, gate_matrix(g));
        return ex;
      case GateKind::SWAP: {
        const int a = g.targets[0], b = g.targets[1];
        ex.steps.push_back({gates::cnot(b, a), false});
        ex.steps.push_back({gates::cnot(a, b), true});
        ex.steps.push_back({gates::cnot(b, a), false});
        return ex;
      }
      case GateKind::Rzz:
      case GateKind::Rxx:
      case GateKind::Ryy: {
        const int a = g.targets[0], b = g.targets[1];
        // X = RY(pi/2) Z RY(-pi/2) and Y = RX(-pi/2) Z RX(pi/2).
        std::vector<GateInstruction> pre, post;
        if (g.kind == GateKind::Rxx) {
          pre = {gates::ry(a, -kPi / 2), gates::ry(b, -kPi / 2)};
          post = {gates::ry(a, kPi / 2), gates::ry(b, kPi / 2)};
        } else if (g.kind == GateKind::Ryy) {
          pre = {gates::rx(a, kPi / 2), gates::rx(b, kPi / 2)};
          post = {gates::rx(a, -kPi / 2), gates::rx(b, -kPi / 2)};
        }
        for (auto& p : pre) ex.steps.push_back({p, false});
        ex.steps.push_back({gates::cnot(a, b), false});
        ex.steps.push_back({gates::rz(b, *g.arg), true});
        ex.steps.push_back({gates::cnot(a, b), false});
        for (auto& p : post) ex.steps.push_back({p, false});
        return ex;
      }
      case GateKind::Custom:
        if (g.num_targets() == 1) return single_qubit(t, g.matrix);
        return two_qubit(g.targets[0], g.targets[1], g.matrix);
      default:
        throw Error(ErrorCode::UnsupportedDecomposition, std::string("no expansion for ") + to_string(g.kind));
    }
  }

  std::vector<GateInstruction>& out_;
};

}  // namespace

std::vector<GateInstruction> decompose_gate(const GateInstruction& g) {
  std::vector<GateInstruction> out;
  if (in_decompose_basis(g)) {
    out.push_back(g);
    return out;
  }
  if (g.kind == GateKind::Custom && g.allow_non_unitary) {
    throw Error(ErrorCode::UnsupportedDecomposition, "non-unitary custom matrix");
  }
  Decomposer(out).expand(g, {});
  return out;
}

GateDag pass_decompose(const GateDag& dag) {
  Circuit out(dag.n_qubits());
  for (auto i : dag.topological_order()) {
    for (auto& g : decompose_gate(dag.nodes()[i])) out.append(std::move(g));
  }
  return GateDag::build(out);
}

Circuit compile_circuit(const Circuit& c, const PipelineOptions& opt) {
  auto dag = GateDag::build(c);
  if (opt.decompose) dag = pass_decompose(dag);
  for (int round = 0; round < opt.max_rounds; ++round) {
    const auto before = dag.size();
    if (opt.cancel) dag = pass_cancel_adjacent(dag);
    if (opt.merge) dag = pass_merge_rotations(dag);
    if (dag.size() == before) break;
  }
  return dag.to_circuit();
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c, const ParamMap& env) {
  if (c.n_qubits() > 12) throw Error(ErrorCode::QubitCapExceeded, "dense unitary limited to 12 qubits");
  const Index dim = Index{1} << c.n_qubits();
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Index col = 0; col < dim; ++col) {
    StateVectorD psi(c.n_qubits());
    psi.set_basis_state(col);
    for (const auto& g : c.gates()) {
      if (g.kind == GateKind::Barrier || g.kind == GateKind::Measure) continue;
      sv_apply(g, psi, env);
    }
    u.col(static_cast<Eigen::Index>(col)) = psi.to_double();
  }
  return u;
}

double phase_insensitive_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  std::complex<double> ph(1.0, 0.0);
  if (std::abs(b(r, c)) > 0.0) {
    ph = a(r, c) / b(r, c);
    ph /= std::abs(ph);
  }
  return (a - ph * b).cwiseAbs().maxCoeff();
}

}  // namespace qforge
