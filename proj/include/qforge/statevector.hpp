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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qforge/circuit.hpp"
#include "qforge/kernels.hpp"
#include "qforge/operators.hpp"

namespace qforge {

/// Full-amplitude pure state. Amplitude i is the coefficient of |i>, qubit 0
/// being the least significant bit. Storage is one contiguous array of
/// interleaved (re, im) pairs.
template <typename T>
class StateVector {
 public:
  using Scalar = T;
  using C = std::complex<T>;

  /// |0...0> on `n_qubits`. Throws QubitCapExceeded above `cfg.qubit_cap` or
  /// when the allocation fails.
  explicit StateVector(int n_qubits, EngineConfig cfg = {});
  static StateVector from_amplitudes(const VectorXc<T>& amps, EngineConfig cfg = {});

  int n_qubits() const { return n_qubits_; }
  Index dim() const { return Index{1} << n_qubits_; }

  const VectorXc<T>& amplitudes() const { return amps_; }
  VectorXc<T>& amplitudes() { return amps_; }
  C* data() { return amps_.data(); }
  const C* data() const { return amps_.data(); }
  C operator[](Index i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  const EngineConfig& config() const { return cfg_; }
  void set_config(const EngineConfig& cfg) { cfg_ = cfg; }

  double norm_squared() const;
  void normalize();
  void set_basis_state(Index i);

  /// Amplitudes widened to double, for comparisons against dense oracles.
  Eigen::VectorXcd to_double() const { return amps_.template cast<std::complex<double>>(); }

 private:
  StateVector() = default;

  int n_qubits_ = 0;
  EngineConfig cfg_;
  VectorXc<T> amps_;
};

using StateVectorF = StateVector<float>;
using StateVectorD = StateVector<double>;

/// Applies `m` (2x2 or 4x4) to `targets` under `controls`; the matrix need
/// not be unitary. `cls` selects the kernel family.
template <typename T>
void apply_matrix(StateVector<T>& psi, std::span<const int> targets, std::span<const int> controls, GateClass cls,
                  const SmallMatrix& m);

/// Applies `g` at an explicit numeric angle (optionally its adjoint).
template <typename T>
void apply_gate(const GateInstruction& g, double angle, bool adjoint, StateVector<T>& psi);

template <typename T>
void sv_apply(const GateInstruction& g, StateVector<T>& psi, const ParamMap& env = {});

/// Gates applied in order. Trailing Measure instructions are ignored (they
/// only mark qubits for terminal sampling); a Measure followed by a unitary
/// gate throws MidCircuitMeasure.
template <typename T>
StateVector<T> sv_run(const Circuit& c, const ParamMap& env = {}, std::optional<StateVector<T>> psi0 = std::nullopt,
                      const EngineConfig& cfg = {});

/// Bitstrings list qubits[last] first and qubits[0] last (ket order).
using Counts = std::map<std::string, std::uint64_t>;

/// Draws `shots` basis indices from `p` (length 2^n_qubits) and tallies the
/// bits of `qubits`. Deterministic in `seed`.
Counts sample_distribution(const std::vector<double>& p, int n_qubits, const std::vector<int>& qubits,
                           std::uint64_t shots, std::uint64_t seed);

template <typename T>
Counts sv_sample(const StateVector<T>& psi, const std::vector<int>& qubits, std::uint64_t shots, std::uint64_t seed);

template <typename T>
std::vector<double> probabilities(const StateVector<T>& psi);

/// <psi|H|psi> evaluated string by string; no dense operator is formed.
template <typename T>
double sv_expectation(const PauliSum& h, const StateVector<T>& psi);

/// <phi|P|psi> for one Pauli string, optionally restricted to basis states
/// whose `controls` bits are all set.
template <typename T>
std::complex<double> pauli_matrix_element(const PauliString& p, const StateVector<T>& phi, const StateVector<T>& psi,
                                          std::span<const int> controls = {});

/// H|psi> for bound, qubit-in-range H.
template <typename T>
StateVector<T> apply_pauli_sum(const PauliSum& h, const StateVector<T>& psi);

template <typename T>
std::complex<double> inner_product(const StateVector<T>& a, const StateVector<T>& b);

/// Gates that touch qubits at or beyond `n` raise IndexOutOfRange.
void check_gate_fits(const GateInstruction& g, int n_qubits);

#define QFORGE_SV_EXTERN(T)                                                                                     \
  extern template class StateVector<T>;                                                                         \
  extern template void apply_matrix(StateVector<T>&, std::span<const int>, std::span<const int>, GateClass,     \
                                    const SmallMatrix&);                                                        \
  extern template void apply_gate(const GateInstruction&, double, bool, StateVector<T>&);                       \
  extern template void sv_apply(const GateInstruction&, StateVector<T>&, const ParamMap&);                      \
  extern template StateVector<T> sv_run(const Circuit&, const ParamMap&, std::optional<StateVector<T>>,         \
                                        const EngineConfig&);                                                   \
  extern template Counts sv_sample(const StateVector<T>&, const std::vector<int>&, std::uint64_t, std::uint64_t); \
  extern template std::vector<double> probabilities(const StateVector<T>&);                                     \
  extern template double sv_expectation(const PauliSum&, const StateVector<T>&);                                \
  extern template std::complex<double> pauli_matrix_element(const PauliString&, const StateVector<T>&,          \
                                                            const StateVector<T>&, std::span<const int>);       \
  extern template StateVector<T> apply_pauli_sum(const PauliSum&, const StateVector<T>&);                       \
  extern template std::complex<double> inner_product(const StateVector<T>&, const StateVector<T>&);

QFORGE_SV_EXTERN(float)
QFORGE_SV_EXTERN(double)
#undef QFORGE_SV_EXTERN

}  // namespace qforge
