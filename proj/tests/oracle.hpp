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

// Dense reference semantics for tests: every gate is expanded to a full
// 2^n x 2^n matrix built from first principles (Pauli exponentials via the
// matrix exponential, explicit control enumeration).

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qforge/circuit.hpp"

namespace oracle {

using Cd = std::complex<double>;
using qforge::GateKind;

inline Eigen::Matrix2cd pauli(char p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Cd(0, -1), Cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

inline Eigen::MatrixXcd rotation(const Eigen::MatrixXcd& generator, double theta) {
  const Eigen::MatrixXcd a = Cd(0, -theta / 2) * generator;
  return a.exp();
}

/// Target-space matrix; two-target index b0 + 2*b1 (b0 = bit of targets[0]).
inline Eigen::MatrixXcd target_matrix(GateKind kind, double theta, const Eigen::MatrixXcd& custom = {}) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::X: return pauli('X');
    case GateKind::Y: return pauli('Y');
    case GateKind::Z: return pauli('Z');
    case GateKind::H: return r * (pauli('X') + pauli('Z'));
    case GateKind::S: m << 1, 0, 0, Cd(0, 1); return m;
    case GateKind::T: m << 1, 0, 0, std::polar(1.0, M_PI / 4); return m;
    case GateKind::PhaseShift: m << 1, 0, 0, std::polar(1.0, theta); return m;
    case GateKind::RX: return rotation(pauli('X'), theta);
    case GateKind::RY: return rotation(pauli('Y'), theta);
    case GateKind::RZ: return rotation(pauli('Z'), theta);
    case GateKind::Rxx: return rotation(Eigen::kroneckerProduct(pauli('X'), pauli('X')).eval(), theta);
    case GateKind::Ryy: return rotation(Eigen::kroneckerProduct(pauli('Y'), pauli('Y')).eval(), theta);
    case GateKind::Rzz: return rotation(Eigen::kroneckerProduct(pauli('Z'), pauli('Z')).eval(), theta);
    case GateKind::SWAP: {
      Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
      s(0, 0) = s(3, 3) = s(1, 2) = s(2, 1) = 1;
      return s;
    }
    case GateKind::Custom: return custom;
    default: return Eigen::Matrix2cd::Identity();
  }
}

/// `m` on `targets` under `controls`, identity elsewhere.
inline Eigen::MatrixXcd expand(const Eigen::MatrixXcd& m, const std::vector<int>& targets,
                               const std::vector<int>& controls, int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  std::uint64_t cmask = 0, tmask = 0;
  for (int c : controls) cmask |= std::uint64_t{1} << c;
  for (int t : targets) tmask |= std::uint64_t{1} << t;
  const auto nt = static_cast<int>(targets.size());
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto uj = static_cast<std::uint64_t>(j);
    if ((uj & cmask) != cmask) {
      out(j, j) = 1.0;
      continue;
    }
    int lc = 0;
    for (int i = 0; i < nt; ++i) lc |= static_cast<int>((uj >> targets[i]) & 1) << i;
    const std::uint64_t base = uj & ~tmask;
    for (int lr = 0; lr < (1 << nt); ++lr) {
      std::uint64_t row = base;
      for (int i = 0; i < nt; ++i) row |= static_cast<std::uint64_t>((lr >> i) & 1) << targets[i];
      out(static_cast<Eigen::Index>(row), j) = m(lr, lc);
    }
  }
  return out;
}

inline Eigen::MatrixXcd gate_unitary(const qforge::GateInstruction& g, int n, const qforge::ParamMap& env = {}) {
  if (g.kind == GateKind::Barrier || g.kind == GateKind::Measure) {
    return Eigen::MatrixXcd::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  }
  const double theta = g.arg ? g.arg->eval(env) : 0.0;
  return expand(target_matrix(g.kind, theta, g.matrix), g.targets, g.controls, n);
}

inline Eigen::MatrixXcd circuit_unitary(const qforge::Circuit& c, const qforge::ParamMap& env = {}) {
  const Eigen::Index d = Eigen::Index{1} << c.n_qubits();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  for (const auto& g : c.gates()) u = gate_unitary(g, c.n_qubits(), env) * u;
  return u;
}

inline Eigen::VectorXcd run(const qforge::Circuit& c, const qforge::ParamMap& env = {}) {
  return circuit_unitary(c, env).col(0);
}

/// Max entrywise distance after aligning the phase on the largest entry of `a`.
inline double phase_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) < 1e-300) return (a - b).cwiseAbs().maxCoeff();
  const Cd phase = a(r, c) / b(r, c);
  return (a - (phase / std::abs(phase)) * b).cwiseAbs().maxCoeff();
}

inline Eigen::VectorXcd random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Cd(nd(rng), nd(rng));
  return v / v.norm();
}

inline Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Cd(nd(rng), nd(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ();
}

/// Distinct qubits drawn uniformly from [0, n).
inline std::vector<int> pick_qubits(int n, int k, std::mt19937_64& rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

inline int arity(GateKind k) {
  switch (k) {
    case GateKind::SWAP:
    case GateKind::Rxx:
    case GateKind::Ryy:
    case GateKind::Rzz: return 2;
    default: return 1;
  }
}

/// Random unitary gate of `kind` with numeric angle in [-pi, pi].
inline qforge::GateInstruction random_gate(GateKind kind, int n, int n_controls, std::mt19937_64& rng) {
  const int nt = kind == GateKind::Custom ? std::min(1 + static_cast<int>(rng() % 2), n - n_controls) : arity(kind);
  auto qs = pick_qubits(n, nt + n_controls, rng);
  std::vector<int> targets(qs.begin(), qs.begin() + nt);
  std::vector<int> controls(qs.begin() + nt, qs.end());
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  if (kind == GateKind::Custom) {
    auto g = qforge::gates::custom(targets, random_unitary(1 << nt, rng));
    return qforge::controlled(g, controls);
  }
  std::optional<qforge::ParameterExpression> arg;
  if (qforge::is_parameterized(kind)) arg = qforge::ParameterExpression(angle(rng));
  return qforge::gates::make(kind, targets, controls, arg);
}

inline const std::vector<GateKind>& kernel_kinds() {
  static const std::vector<GateKind> kinds = {GateKind::X,   GateKind::Y,   GateKind::Z,   GateKind::H,
                                              GateKind::S,   GateKind::T,   GateKind::SWAP, GateKind::RX,
                                              GateKind::RY,  GateKind::RZ,  GateKind::Rxx, GateKind::Ryy,
                                              GateKind::Rzz, GateKind::PhaseShift, GateKind::Custom};
  return kinds;
}

/// Random circuit over the kernel kinds with up to `max_controls` controls.
inline qforge::Circuit random_circuit(int n, int n_gates, std::mt19937_64& rng, int max_controls = 1) {
  qforge::Circuit c(n);
  const auto& kinds = kernel_kinds();
  while (static_cast<int>(c.size()) < n_gates) {
    const GateKind k = kinds[rng() % kinds.size()];
    const int nt = arity(k);
    if (nt > n) continue;
    const int room = std::min(max_controls, n - nt);
    const int nc = room > 0 ? static_cast<int>(rng() % static_cast<unsigned>(room + 1)) : 0;
    c.append(random_gate(k, n, nc, rng));
  }
  return c;
}

}  // namespace oracle
