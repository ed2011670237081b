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

// Randomized checks shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <random>

#include "oracle.hpp"
#include "qforge/compile.hpp"
#include "qforge/gradient.hpp"
#include "qforge/statevector.hpp"

namespace suites {

struct SuiteResult {
  double max_error = 0.0;
  std::uint64_t cases = 0;
};

/// Every kernel kind x {0, 1, 2} controls x n in [1, 5] x `seeds` random
/// (state, placement, angle) draws, engine versus dense oracle.
template <typename T>
SuiteResult kernel_oracle_suite(qforge::KernelPolicy policy, int seeds, int max_n = 5) {
  SuiteResult res;
  qforge::EngineConfig cfg;
  cfg.policy = policy;
  for (qforge::GateKind kind : oracle::kernel_kinds()) {
    for (int nc = 0; nc <= 2; ++nc) {
      for (int n = 1; n <= max_n; ++n) {
        if (oracle::arity(kind) + nc > n) continue;
        for (int seed = 0; seed < seeds; ++seed) {
          std::mt19937_64 rng(static_cast<std::uint64_t>(seed) * 1000003u + static_cast<std::uint64_t>(kind) * 131u +
                              static_cast<std::uint64_t>(nc) * 17u + static_cast<std::uint64_t>(n));
          const Eigen::VectorXcd start = oracle::random_state(n, rng);
          const auto g = oracle::random_gate(kind, n, nc, rng);
          auto psi = qforge::StateVector<T>::from_amplitudes(start.cast<std::complex<T>>(), cfg);
          qforge::sv_apply(g, psi);
          const Eigen::VectorXcd want = oracle::gate_unitary(g, n) * start;
          res.max_error = std::max(res.max_error, (psi.to_double() - want).cwiseAbs().maxCoeff());
          ++res.cases;
        }
      }
    }
  }
  return res;
}

/// Scalar versus Vectorized on random circuits (widths above the AVX pairing
/// limits so both register layouts are exercised).
inline double policy_agreement(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  qforge::EngineConfig scalar, vec;
  scalar.policy = qforge::KernelPolicy::Scalar;
  vec.policy = qforge::KernelPolicy::Vectorized;
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + static_cast<int>(rng() % 7);
    const auto c = oracle::random_circuit(n, 40, rng, std::min(2, n - 1));
    const auto a = qforge::sv_run<double>(c, {}, std::nullopt, scalar);
    const auto b = qforge::sv_run<double>(c, {}, std::nullopt, vec);
    worst = std::max(worst, (a.to_double() - b.to_double()).cwiseAbs().maxCoeff());
  }
  return worst;
}

/// Random parameterized circuit with linear-combination angles over `np`
/// shared names, including controlled rotations and phase shifts, plus `nh`
/// random Hermitian observables and a `rows` x P batch.
inline qforge::GradientTask random_gradient_task(std::mt19937_64& rng, int n, int n_gates, int np, int nh, int rows) {
  using qforge::GateKind;
  std::uniform_real_distribution<double> u(-2, 2);
  const GateKind param_kinds[] = {GateKind::RX,  GateKind::RY,  GateKind::RZ,        GateKind::Rxx,
                                  GateKind::Ryy, GateKind::Rzz, GateKind::PhaseShift};
  qforge::Circuit c(n);
  for (int i = 0; i < n_gates; ++i) {
    if (rng() % 3 == 0) {
      const auto k = oracle::kernel_kinds()[rng() % oracle::kernel_kinds().size()];
      if (oracle::arity(k) <= n) {
        c.append(oracle::random_gate(k, n, n > oracle::arity(k) ? static_cast<int>(rng() % 2) : 0, rng));
      }
      continue;
    }
    const GateKind k = param_kinds[rng() % 7];
    if (oracle::arity(k) > n) continue;
    const int nc = std::min<int>(static_cast<int>(rng() % 3) == 0 ? 1 : 0, n - oracle::arity(k));
    auto g = oracle::random_gate(k, n, nc, rng);
    std::map<std::string, double> terms;
    const int used = 1 + static_cast<int>(rng() % 2);
    for (int j = 0; j < used; ++j) terms["p" + std::to_string(rng() % static_cast<std::uint64_t>(np))] += u(rng);
    g.arg = qforge::ParameterExpression::from_terms(terms, u(rng));
    c.append(g);
  }
  std::vector<qforge::PauliSum> hams;
  const char letters[] = {'X', 'Y', 'Z'};
  for (int h = 0; h < nh; ++h) {
    qforge::PauliSum s;
    for (int t = 0; t < 3; ++t) {
      std::string str;
      for (int q = 0; q < n; ++q) {
        if (rng() % 2) str += std::string(1, letters[rng() % 3]) + std::to_string(q) + " ";
      }
      s += qforge::PauliSum::parse_term(str, u(rng));
    }
    if (s.empty()) s = qforge::PauliSum::parse_term("Z0");
    hams.push_back(s);
  }
  auto names = c.parameters();
  Eigen::MatrixXd batch(rows, static_cast<Eigen::Index>(names.size()));
  for (Eigen::Index i = 0; i < batch.size(); ++i) batch.data()[i] = u(rng);
  qforge::GradientTask task;
  task.circuit = c;
  task.hams = hams;
  task.param_names = names;
  task.batch = batch;
  return task;
}

/// Largest difference over values and every gradient entry.
inline double max_diff(const qforge::GradientResult& a, const qforge::GradientResult& b) {
  double d = (a.values - b.values).cwiseAbs().maxCoeff();
  for (std::size_t r = 0; r < a.grads.size(); ++r) {
    if (a.grads[r].size()) d = std::max(d, (a.grads[r] - b.grads[r]).cwiseAbs().maxCoeff());
  }
  return d;
}

/// Random circuit seeded with cancellation and merge opportunities. Two-target
/// gates with two controls are skipped (outside the decomposition's reach).
inline qforge::Circuit redundant_circuit(int n, int n_gates, std::mt19937_64& rng) {
  qforge::Circuit c(n);
  const auto base = oracle::random_circuit(n, n_gates, rng, std::min(2, n - 1));
  std::uniform_real_distribution<double> u(-qforge::kPi, qforge::kPi);
  for (const auto& g : base.gates()) {
    if (g.controls.size() == 2 && g.num_targets() == 2) continue;
    c.append(g);
    const auto r = rng() % 4;
    if (r == 0) c.append(qforge::gate_inverse(g));
    if (r == 1 && qforge::is_parameterized(g.kind)) {
      auto again = g;
      again.arg = qforge::ParameterExpression(u(rng));
      c.append(again);
    }
  }
  return c;
}

/// Logical amplitudes -> physical register under `layout` (logical l sits on
/// physical layout[l]); logical qubits past `psi`'s width are |0>.
inline Eigen::VectorXcd embed(const Eigen::VectorXcd& psi, const std::vector<int>& layout, int n_physical) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_physical);
  const int n = static_cast<int>(std::log2(static_cast<double>(psi.size())) + 0.5);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    Eigen::Index p = 0;
    for (int l = 0; l < n; ++l) {
      if ((i >> l) & 1) p |= Eigen::Index{1} << layout[static_cast<std::size_t>(l)];
    }
    out[p] = psi[i];
  }
  return out;
}

/// Inverse of `embed` on the logical subspace.
inline Eigen::VectorXcd unembed(const Eigen::VectorXcd& phys, const std::vector<int>& layout, int n_logical) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_logical);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    Eigen::Index p = 0;
    for (int l = 0; l < n_logical; ++l) {
      if ((i >> l) & 1) p |= Eigen::Index{1} << layout[static_cast<std::size_t>(l)];
    }
    out[i] = phys[p];
  }
  return out;
}

/// Worst global-phase-insensitive unitary gap of each pass and the full
/// pipeline on random circuits of 1..5 qubits.
inline double compile_soundness(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  auto gap = [](const qforge::Circuit& a, const qforge::Circuit& b) {
    return oracle::phase_distance(oracle::circuit_unitary(a), oracle::circuit_unitary(b));
  };
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto c = redundant_circuit(n, 20, rng);
    const auto dag = qforge::GateDag::build(c);
    worst = std::max(worst, gap(c, qforge::pass_cancel_adjacent(dag).to_circuit()));
    worst = std::max(worst, gap(c, qforge::pass_merge_rotations(dag).to_circuit()));
    worst = std::max(worst, gap(c, qforge::pass_decompose(dag).to_circuit()));
    worst = std::max(worst, gap(c, qforge::compile_circuit(c)));
  }
  return worst;
}

struct MappingSuiteResult {
  int violations = 0;       // circuits with a two-qubit gate off the coupling graph
  int gate_mismatches = 0;  // circuits whose non-SWAP gate count changed
  double max_error = 0.0;   // state error after un-permuting the final layout
};

/// Random (circuit, topology) pairs; each circuit acts on a random input
/// state placed by the initial layout.
inline MappingSuiteResult mapping_suite(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> specs = {"line:5", "ring:5", "grid:2x3", "line:6", "grid:3x3", "ring:4"};
  MappingSuiteResult res;
  for (int t = 0; t < trials; ++t) {
    const auto cg = qforge::CouplingGraph::parse(specs[static_cast<std::size_t>(t) % specs.size()]);
    const int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(5, cg.n_physical()) - 1));
    const auto c = qforge::compile_circuit(oracle::random_circuit(n, 25, rng, 1),
                                           {.decompose = true, .cancel = false, .merge = false});
    qforge::MappingOptions opt;
    opt.seed = rng();
    opt.refine_initial_layout = t % 3 == 0;
    const auto r = qforge::map_circuit(c, cg, opt);
    if (!qforge::respects_coupling(r.compiled, cg)) ++res.violations;
    std::size_t non_swap = 0;
    for (const auto& g : r.compiled.gates()) non_swap += g.kind != qforge::GateKind::SWAP;
    if (non_swap != c.size()) ++res.gate_mismatches;

    const Eigen::VectorXcd psi = oracle::random_state(n, rng);
    auto phys = qforge::StateVectorD::from_amplitudes(embed(psi, r.initial_layout, cg.n_physical()));
    phys = qforge::sv_run<double>(r.compiled, {}, phys);
    const Eigen::VectorXcd want = oracle::circuit_unitary(c) * psi;
    res.max_error = std::max(res.max_error, oracle::phase_distance(want, unembed(phys.to_double(), r.final_layout, n)));
  }
  return res;
}

}  // namespace suites
