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
#include <variant>
#include <vector>

#include "qforge/circuit.hpp"
#include "qforge/density_matrix.hpp"
#include "qforge/statevector.hpp"

namespace qforge {

enum class ChannelKind { BitFlip, PhaseFlip, Depolarizing, AmplitudeDamping, PhaseDamping, Custom };

const char* to_string(ChannelKind k);
ChannelKind parse_channel_kind(std::string_view name);

/// Single-qubit Kraus channel applied independently to each listed target.
///
/// Depolarizing(p) maps rho to (1 - p) rho + p I/2, i.e. Kraus weights
/// 1 - 3p/4 on I and p/4 on each of X, Y, Z.
class KrausChannel {
 public:
  static KrausChannel bit_flip(double p, std::vector<int> targets = {});
  static KrausChannel phase_flip(double p, std::vector<int> targets = {});
  static KrausChannel depolarizing(double p, std::vector<int> targets = {});
  static KrausChannel amplitude_damping(double gamma, std::vector<int> targets = {});
  static KrausChannel phase_damping(double gamma, std::vector<int> targets = {});
  /// Throws IncompleteChannel unless sum K^dagger K = I within 1e-8.
  static KrausChannel custom(const std::vector<Eigen::Matrix2cd>& ops, std::vector<int> targets = {});
  static KrausChannel make(ChannelKind kind, double p, std::vector<int> targets = {});

  ChannelKind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  const std::vector<int>& targets() const { return targets_; }
  const std::vector<SmallMatrix>& operators() const { return ops_; }

  KrausChannel with_targets(std::vector<int> targets) const;

  /// max |sum K^dagger K - I| entry.
  double completeness_error() const;

 private:
  KrausChannel(ChannelKind kind, double p, std::vector<SmallMatrix> ops, std::vector<int> targets);

  ChannelKind kind_ = ChannelKind::BitFlip;
  double parameter_ = 0.0;
  std::vector<SmallMatrix> ops_;
  std::vector<int> targets_;
};

/// Counter-based generator: the stream for (seed, trajectory, ordinal) is a
/// pure function of the key, so trajectories can run in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t ordinal);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

template <typename T>
void channel_apply_dm(const KrausChannel& ch, DensityMatrix<T>& rho);

/// Samples one Kraus branch per target with probability ||K_i psi||^2, applies
/// it and renormalizes. Returns the chosen branch index per target.
template <typename T>
std::vector<int> channel_sample_sv(const KrausChannel& ch, StateVector<T>& psi, CounterRng& rng);

/// Gate-kind keyed channel templates; `fallback` covers kinds not listed.
struct NoiseModel {
  std::optional<KrausChannel> fallback;
  std::map<GateKind, KrausChannel> per_kind;

  bool empty() const { return !fallback && per_kind.empty(); }
  const KrausChannel* lookup(GateKind kind) const;
};

using NoisyOp = std::variant<GateInstruction, KrausChannel>;

class NoisyCircuit {
 public:
  NoisyCircuit() = default;
  explicit NoisyCircuit(int n_qubits) : n_qubits_(n_qubits) {}

  int n_qubits() const { return n_qubits_; }
  const std::vector<NoisyOp>& ops() const { return ops_; }
  std::size_t channel_count() const;

  void add_gate(GateInstruction g) { ops_.emplace_back(std::move(g)); }
  void add_channel(KrausChannel ch);

 private:
  int n_qubits_ = 0;
  std::vector<NoisyOp> ops_;
};

/// A channel instance follows every gate the model matches, on that gate's
/// targets. Measure and Barrier never receive noise.
NoisyCircuit noisy_circuit(const Circuit& c, const NoiseModel& model);

template <typename T>
DensityMatrix<T> noisy_dm_run(const NoisyCircuit& nc, const ParamMap& env = {}, const EngineConfig& cfg = {});

/// One trajectory; channel instance k draws from CounterRng(seed, trajectory, k).
template <typename T>
StateVector<T> noisy_sv_trajectory(const NoisyCircuit& nc, const ParamMap& env, std::uint64_t seed,
                                   std::uint64_t trajectory, const EngineConfig& cfg = {});

struct TrajectoryEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trajectories = 0;
};

/// Mean and standard error of <H> over independent trajectories. Values are
/// summed in trajectory order, so the result does not depend on `workers`.
template <typename T>
TrajectoryEstimate trajectory_expectation(const NoisyCircuit& nc, const PauliSum& h, const ParamMap& env,
                                          std::uint64_t trajectories, std::uint64_t seed, int workers = 1,
                                          const EngineConfig& cfg = {});

/// One trajectory per shot, each measured once on `qubits`.
template <typename T>
Counts trajectory_sample(const NoisyCircuit& nc, const ParamMap& env, const std::vector<int>& qubits,
                         std::uint64_t shots, std::uint64_t seed, const EngineConfig& cfg = {});

#define QFORGE_NOISE_EXTERN(T)                                                                                 \
  extern template void channel_apply_dm(const KrausChannel&, DensityMatrix<T>&);                               \
  extern template std::vector<int> channel_sample_sv(const KrausChannel&, StateVector<T>&, CounterRng&);       \
  extern template DensityMatrix<T> noisy_dm_run(const NoisyCircuit&, const ParamMap&, const EngineConfig&);    \
  extern template StateVector<T> noisy_sv_trajectory(const NoisyCircuit&, const ParamMap&, std::uint64_t,      \
                                                     std::uint64_t, const EngineConfig&);                      \
  extern template TrajectoryEstimate trajectory_expectation<T>(const NoisyCircuit&, const PauliSum&,           \
                                                               const ParamMap&, std::uint64_t, std::uint64_t,  \
                                                               int, const EngineConfig&);                      \
  extern template Counts trajectory_sample<T>(const NoisyCircuit&, const ParamMap&, const std::vector<int>&,   \
                                              std::uint64_t, std::uint64_t, const EngineConfig&);

QFORGE_NOISE_EXTERN(float)
QFORGE_NOISE_EXTERN(double)
#undef QFORGE_NOISE_EXTERN

}  // namespace qforge
