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

#include "qforge/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <new>
#include <random>

namespace qforge {

namespace {

// Reductions run over fixed-size blocks summed in block order, so results do
// not depend on the worker count.
constexpr Index kBlock = Index{1} << 12;

template <typename F>
std::complex<double> blocked_sum(Index count, int workers, F&& term) {
  const Index blocks = (count + kBlock - 1) / kBlock;
  std::vector<std::complex<double>> partial(blocks);
  kernels::parallel_for(blocks, workers, [&](Index b) {
    std::complex<double> acc{};
    const Index end = std::min(count, (b + 1) * kBlock);
    for (Index k = b * kBlock; k < end; ++k) acc += term(k);
    partial[b] = acc;
  });
  std::complex<double> total{};
  for (const auto& p : partial) total += p;
  return total;
}

std::complex<double> i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

template <typename T>
std::complex<double> widen(std::complex<T> v) {
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

inline double parity_sign(Index v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

}  // namespace

void check_gate_fits(const GateInstruction& g, int n_qubits) {
  if (g.max_qubit() >= n_qubits) {
    throw Error(ErrorCode::IndexOutOfRange, std::string(to_string(g.kind)) + " touches qubit " +
                                                std::to_string(g.max_qubit()) + " of a " + std::to_string(n_qubits) +
                                                "-qubit register");
  }
}

template <typename T>
StateVector<T>::StateVector(int n_qubits, EngineConfig cfg) : n_qubits_(n_qubits), cfg_(cfg) {
  if (n_qubits < 1) throw Error(ErrorCode::InvalidGate, "state needs at least one qubit");
  if (n_qubits > cfg.qubit_cap || n_qubits > 62) {
    throw Error(ErrorCode::QubitCapExceeded,
                std::to_string(n_qubits) + " qubits exceeds cap " + std::to_string(cfg.qubit_cap));
  }
  try {
    amps_ = VectorXc<T>::Zero(static_cast<Eigen::Index>(dim()));
  } catch (const std::bad_alloc&) {
    throw Error(ErrorCode::QubitCapExceeded, "cannot allocate " + std::to_string(n_qubits) + "-qubit state");
  }
  amps_[0] = C{1};
}

template <typename T>
StateVector<T> StateVector<T>::from_amplitudes(const VectorXc<T>& amps, EngineConfig cfg) {
  const auto size = static_cast<Index>(amps.size());
  if (size < 2 || !std::has_single_bit(size)) {
    throw Error(ErrorCode::InvalidGate, "amplitude count must be a power of two >= 2");
  }
  StateVector out;
  out.n_qubits_ = std::countr_zero(size);
  if (out.n_qubits_ > cfg.qubit_cap) throw Error(ErrorCode::QubitCapExceeded, "state exceeds qubit cap");
  out.cfg_ = cfg;
  out.amps_ = amps;
  return out;
}

template <typename T>
double StateVector<T>::norm_squared() const {
  const C* a = amps_.data();
  return blocked_sum(dim(), cfg_.parallel.workers_for(n_qubits_), [&](Index i) {
           return std::complex<double>(std::norm(widen(a[i])), 0.0);
         })
      .real();
}

template <typename T>
void StateVector<T>::normalize() {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw Error(ErrorCode::ZeroNormBranch, "cannot normalize the zero vector");
  amps_ /= static_cast<T>(n);
}

template <typename T>
void StateVector<T>::set_basis_state(Index i) {
  if (i >= dim()) throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
  amps_.setZero();
  amps_[static_cast<Eigen::Index>(i)] = C{1};
}

template <typename T>
void apply_matrix(StateVector<T>& psi, std::span<const int> targets, std::span<const int> controls, GateClass cls,
                  const SmallMatrix& m) {
  kernels::apply_matrix<T>(psi.data(), psi.n_qubits(), targets, controls, cls, m, psi.config());
}

template <typename T>
void apply_gate(const GateInstruction& g, double angle, bool adjoint, StateVector<T>& psi) {
  if (g.kind == GateKind::Barrier) return;
  if (g.kind == GateKind::Measure) throw Error(ErrorCode::MidCircuitMeasure, "measurement inside a circuit");
  check_gate_fits(g, psi.n_qubits());
  SmallMatrix m = small_gate_matrix(g.kind, angle, g.matrix);
  if (adjoint) m = m.adjoint();
  apply_matrix(psi, g.targets, g.controls, gate_class(g.kind), m);
}

template <typename T>
void sv_apply(const GateInstruction& g, StateVector<T>& psi, const ParamMap& env) {
  const double angle = is_parameterized(g.kind) ? g.angle(env) : 0.0;
  apply_gate(g, angle, false, psi);
}

template <typename T>
StateVector<T> sv_run(const Circuit& c, const ParamMap& env, std::optional<StateVector<T>> psi0,
                      const EngineConfig& cfg) {
  StateVector<T> psi = psi0 ? std::move(*psi0) : StateVector<T>(c.n_qubits(), cfg);
  if (psi.n_qubits() != c.n_qubits()) {
    throw Error(ErrorCode::IndexOutOfRange, "initial state width does not match circuit");
  }
  bool measured = false;
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Measure) {
      measured = true;
      continue;
    }
    if (g.kind == GateKind::Barrier) continue;
    if (measured) throw Error(ErrorCode::MidCircuitMeasure, "gate after measurement");
    sv_apply(g, psi, env);
  }
  return psi;
}

template <typename T>
std::vector<double> probabilities(const StateVector<T>& psi) {
  std::vector<double> p(psi.dim());
  const auto* a = psi.data();
  kernels::parallel_for(psi.dim(), psi.config().parallel.workers_for(psi.n_qubits()),
                        [&](Index i) { p[i] = std::norm(widen(a[i])); });
  return p;
}

Counts sample_distribution(const std::vector<double>& p, int n_qubits, const std::vector<int>& qubits,
                           std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorCode::InvalidTask, "shots must be >= 1");
  std::vector<bool> seen(static_cast<std::size_t>(n_qubits), false);
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) throw Error(ErrorCode::IndexOutOfRange, "sampled qubit out of range");
    if (seen[static_cast<std::size_t>(q)]) throw Error(ErrorCode::InvalidTask, "sampled qubits must be distinct");
    seen[static_cast<std::size_t>(q)] = true;
  }
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = (acc += p[i]);
  const double total = acc;
  Index last_nonzero = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) last_nonzero = i;
  }

  std::mt19937_64 gen(seed);
  auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 * total; };

  std::map<Index, std::uint64_t> by_index;
  if (shots <= 1000) {
    for (std::uint64_t s = 0; s < shots; ++s) {
      const double u = uniform();
      Index i = 0;
      while (i < cdf.size() && !(cdf[i] > u)) ++i;
      ++by_index[std::min<Index>(i, last_nonzero)];
    }
  } else {
    std::vector<double> us(shots);
    for (auto& u : us) u = uniform();
    std::sort(us.begin(), us.end());
    Index i = 0;
    for (double u : us) {
      while (i < cdf.size() && !(cdf[i] > u)) ++i;
      ++by_index[std::min<Index>(i, last_nonzero)];
    }
  }

  Counts counts;
  const std::size_t m = qubits.size();
  for (const auto& [index, n] : by_index) {
    std::string key(m, '0');
    for (std::size_t k = 0; k < m; ++k) {
      if ((index >> qubits[k]) & 1) key[m - 1 - k] = '1';
    }
    counts[key] += n;
  }
  return counts;
}

template <typename T>
Counts sv_sample(const StateVector<T>& psi, const std::vector<int>& qubits, std::uint64_t shots, std::uint64_t seed) {
  return sample_distribution(probabilities(psi), psi.n_qubits(), qubits, shots, seed);
}

template <typename T>
std::complex<double> pauli_matrix_element(const PauliString& p, const StateVector<T>& phi, const StateVector<T>& psi,
                                          std::span<const int> controls) {
  if (p.max_qubit() >= psi.n_qubits()) throw Error(ErrorCode::IndexOutOfRange, "Pauli string exceeds state");
  const Index x = p.x_mask();
  const Index z = p.z_mask();
  const std::complex<double> global = i_power(p.y_count());
  const auto* a = phi.data();
  const auto* b = psi.data();
  kernels::IndexPattern pat(controls, kernels::control_mask(controls));
  const Index count = psi.dim() >> pat.count;
  const int workers = psi.config().parallel.workers_for(psi.n_qubits());
  // (P psi)[i] = i^nY (-1)^{popcount(j & z)} psi[j], j = i ^ x.
  const auto sum = blocked_sum(count, workers, [&](Index k) {
    const Index i = pat.expand(k);
    const Index j = i ^ x;
    return std::conj(widen(a[i])) * widen(b[j]) * parity_sign(j & z);
  });
  return global * sum;
}

template <typename T>
double sv_expectation(const PauliSum& h, const StateVector<T>& psi) {
  if (h.max_qubit() >= psi.n_qubits()) throw Error(ErrorCode::IndexOutOfRange, "observable exceeds state");
  double total = 0.0;
  for (const auto& [s, w] : h.real_terms()) {
    total += w * pauli_matrix_element(s, psi, psi).real();
  }
  return total;
}

template <typename T>
StateVector<T> apply_pauli_sum(const PauliSum& h, const StateVector<T>& psi) {
  if (h.max_qubit() >= psi.n_qubits()) throw Error(ErrorCode::IndexOutOfRange, "observable exceeds state");
  StateVector<T> out = psi;
  out.amplitudes().setZero();
  auto* dst = out.data();
  const auto* src = psi.data();
  const int workers = psi.config().parallel.workers_for(psi.n_qubits());
  for (const auto& [s, coeff] : h.terms()) {
    const std::complex<double> c = PauliSum::value_of(coeff) * i_power(s.y_count());
    const Index x = s.x_mask();
    const Index z = s.z_mask();
    kernels::parallel_for(psi.dim(), workers, [&](Index i) {
      const Index j = i ^ x;
      const std::complex<double> v = c * widen(src[j]) * parity_sign(j & z);
      dst[i] += std::complex<T>(static_cast<T>(v.real()), static_cast<T>(v.imag()));
    });
  }
  return out;
}

template <typename T>
std::complex<double> inner_product(const StateVector<T>& a, const StateVector<T>& b) {
  if (a.n_qubits() != b.n_qubits()) throw Error(ErrorCode::IndexOutOfRange, "state widths differ");
  const auto* pa = a.data();
  const auto* pb = b.data();
  return blocked_sum(a.dim(), a.config().parallel.workers_for(a.n_qubits()),
                     [&](Index i) { return std::conj(widen(pa[i])) * widen(pb[i]); });
}

#define QFORGE_SV_INSTANTIATE(T)                                                                             \
  template class StateVector<T>;                                                                             \
  template void apply_matrix(StateVector<T>&, std::span<const int>, std::span<const int>, GateClass,         \
                             const SmallMatrix&);                                                            \
  template void apply_gate(const GateInstruction&, double, bool, StateVector<T>&);                           \
  template void sv_apply(const GateInstruction&, StateVector<T>&, const ParamMap&);                          \
  template StateVector<T> sv_run(const Circuit&, const ParamMap&, std::optional<StateVector<T>>,             \
                                 const EngineConfig&);                                                       \
  template Counts sv_sample(const StateVector<T>&, const std::vector<int>&, std::uint64_t, std::uint64_t);  \
  template std::vector<double> probabilities(const StateVector<T>&);                                         \
  template double sv_expectation(const PauliSum&, const StateVector<T>&);                                    \
  template std::complex<double> pauli_matrix_element(const PauliString&, const StateVector<T>&,              \
                                                     const StateVector<T>&, std::span<const int>);           \
  template StateVector<T> apply_pauli_sum(const PauliSum&, const StateVector<T>&);                           \
  template std::complex<double> inner_product(const StateVector<T>&, const StateVector<T>&);

QFORGE_SV_INSTANTIATE(float)
QFORGE_SV_INSTANTIATE(double)

}  // namespace qforge
