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

#include "qforge/noise.hpp"

#include <algorithm>
#include <cmath>

namespace qforge {

namespace {

using Cd = std::complex<double>;

SmallMatrix mat2(Cd a, Cd b, Cd c, Cd d) {
  SmallMatrix m;
  m.dim = 2;
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

void check_probability(double p, const char* what) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw Error(ErrorCode::InvalidChannel, std::string(what) + " must lie in [0, 1], got " + format_double(p));
  }
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_targets(const KrausChannel& ch, int n) {
  for (int t : ch.targets()) {
    if (t < 0 || t >= n) throw Error(ErrorCode::IndexOutOfRange, "channel target " + std::to_string(t));
  }
}

}  // namespace

const char* to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::BitFlip: return "bitflip";
    case ChannelKind::PhaseFlip: return "phaseflip";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::AmplitudeDamping: return "amplitude_damping";
    case ChannelKind::PhaseDamping: return "phase_damping";
    case ChannelKind::Custom: return "custom";
  }
  return "?";
}

ChannelKind parse_channel_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  std::erase(s, '_');
  if (s == "bitflip") return ChannelKind::BitFlip;
  if (s == "phaseflip") return ChannelKind::PhaseFlip;
  if (s == "depolarizing" || s == "depolarising") return ChannelKind::Depolarizing;
  if (s == "amplitudedamping") return ChannelKind::AmplitudeDamping;
  if (s == "phasedamping") return ChannelKind::PhaseDamping;
  if (s == "custom") return ChannelKind::Custom;
  throw Error(ErrorCode::InvalidChannel, "unknown channel type '" + std::string(name) + "'");
}

KrausChannel::KrausChannel(ChannelKind kind, double p, std::vector<SmallMatrix> ops, std::vector<int> targets)
    : kind_(kind), parameter_(p), ops_(std::move(ops)), targets_(std::move(targets)) {}

KrausChannel KrausChannel::bit_flip(double p, std::vector<int> targets) {
  check_probability(p, "bit-flip probability");
  const double a = std::sqrt(1.0 - p), b = std::sqrt(p);
  return {ChannelKind::BitFlip, p, {mat2(a, 0, 0, a), mat2(0, b, b, 0)}, std::move(targets)};
}

KrausChannel KrausChannel::phase_flip(double p, std::vector<int> targets) {
  check_probability(p, "phase-flip probability");
  const double a = std::sqrt(1.0 - p), b = std::sqrt(p);
  return {ChannelKind::PhaseFlip, p, {mat2(a, 0, 0, a), mat2(b, 0, 0, -b)}, std::move(targets)};
}

KrausChannel KrausChannel::depolarizing(double p, std::vector<int> targets) {
  check_probability(p, "depolarizing probability");
  const double a = std::sqrt(1.0 - 0.75 * p), b = std::sqrt(0.25 * p);
  const Cd ib(0.0, b);
  return {ChannelKind::Depolarizing,
          p,
          {mat2(a, 0, 0, a), mat2(0, b, b, 0), mat2(0, -ib, ib, 0), mat2(b, 0, 0, -b)},
          std::move(targets)};
}

KrausChannel KrausChannel::amplitude_damping(double gamma, std::vector<int> targets) {
  check_probability(gamma, "damping rate");
  return {ChannelKind::AmplitudeDamping,
          gamma,
          {mat2(1, 0, 0, std::sqrt(1.0 - gamma)), mat2(0, std::sqrt(gamma), 0, 0)},
          std::move(targets)};
}

KrausChannel KrausChannel::phase_damping(double gamma, std::vector<int> targets) {
  check_probability(gamma, "damping rate");
  return {ChannelKind::PhaseDamping,
          gamma,
          {mat2(1, 0, 0, std::sqrt(1.0 - gamma)), mat2(0, 0, 0, std::sqrt(gamma))},
          std::move(targets)};
}

KrausChannel KrausChannel::custom(const std::vector<Eigen::Matrix2cd>& ops, std::vector<int> targets) {
  if (ops.empty()) throw Error(ErrorCode::InvalidChannel, "custom channel needs at least one operator");
  std::vector<SmallMatrix> small;
  for (const auto& k : ops) {
    if (!k.allFinite()) throw Error(ErrorCode::NonFinite, "custom Kraus operator has non-finite entries");
    small.push_back(SmallMatrix::from_eigen(k));
  }
  KrausChannel ch(ChannelKind::Custom, 0.0, std::move(small), std::move(targets));
  const double err = ch.completeness_error();
  if (err > 1e-8) {
    throw Error(ErrorCode::IncompleteChannel, "sum of K^dagger K deviates from identity by " + format_double(err));
  }
  return ch;
}

KrausChannel KrausChannel::make(ChannelKind kind, double p, std::vector<int> targets) {
  switch (kind) {
    case ChannelKind::BitFlip: return bit_flip(p, std::move(targets));
    case ChannelKind::PhaseFlip: return phase_flip(p, std::move(targets));
    case ChannelKind::Depolarizing: return depolarizing(p, std::move(targets));
    case ChannelKind::AmplitudeDamping: return amplitude_damping(p, std::move(targets));
    case ChannelKind::PhaseDamping: return phase_damping(p, std::move(targets));
    case ChannelKind::Custom: break;
  }
  throw Error(ErrorCode::InvalidChannel, "custom channels need explicit operators");
}

KrausChannel KrausChannel::with_targets(std::vector<int> targets) const {
  KrausChannel out = *this;
  out.targets_ = std::move(targets);
  return out;
}

double KrausChannel::completeness_error() const {
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (const auto& k : ops_) {
    const Eigen::MatrixXcd m = k.to_eigen();
    sum += m.adjoint() * m;
  }
  return (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t ordinal)
    : key_(splitmix(splitmix(splitmix(seed) ^ trajectory) ^ ordinal)) {}

std::uint64_t CounterRng::next() { return splitmix(key_ + 0xd1b54a32d192ed03ULL * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

template <typename T>
void channel_apply_dm(const KrausChannel& ch, DensityMatrix<T>& rho) {
  check_targets(ch, rho.n_qubits());
  for (int t : ch.targets()) {
    const int target[1] = {t};
    RowMatrixXc<T> acc = RowMatrixXc<T>::Zero(rho.matrix().rows(), rho.matrix().cols());
    const RowMatrixXc<T> src = rho.matrix();
    for (const auto& k : ch.operators()) {
      rho.matrix() = src;
      dm_conjugate(rho, target, {}, GateClass::General, k);
      acc += rho.matrix();
    }
    rho.matrix() = std::move(acc);
  }
}

template <typename T>
std::vector<int> channel_sample_sv(const KrausChannel& ch, StateVector<T>& psi, CounterRng& rng) {
  check_targets(ch, psi.n_qubits());
  const auto& ops = ch.operators();
  std::vector<int> chosen;
  std::vector<double> prob(ops.size());
  for (int t : ch.targets()) {
    // ||K psi||^2 per branch, accumulated in index order without copying psi.
    std::fill(prob.begin(), prob.end(), 0.0);
    const Index bit = Index{1} << t;
    const auto* a = psi.data();
    for (Index i = 0; i < psi.dim(); ++i) {
      if (i & bit) continue;
      const Cd a0(a[i].real(), a[i].imag());
      const Cd a1(a[i | bit].real(), a[i | bit].imag());
      for (std::size_t k = 0; k < ops.size(); ++k) {
        const auto& m = ops[k];
        prob[k] += std::norm(m(0, 0) * a0 + m(0, 1) * a1) + std::norm(m(1, 0) * a0 + m(1, 1) * a1);
      }
    }
    double total = 0.0;
    for (double p : prob) total += p;
    const double u = rng.uniform() * total;
    std::size_t pick = ops.size();
    double cum = 0.0;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (prob[k] <= 0.0) continue;
      cum += prob[k];
      pick = k;
      if (u < cum) break;
    }
    if (pick == ops.size() || !(prob[pick] > 1e-300)) {
      throw Error(ErrorCode::ZeroNormBranch, "every Kraus branch has zero weight");
    }
    const int target[1] = {t};
    apply_matrix(psi, target, {}, GateClass::General, ops[pick]);
    // Relative to the incoming norm so a certain branch leaves psi untouched.
    const double scale = std::sqrt(total / prob[pick]);
    if (scale != 1.0) psi.amplitudes() *= static_cast<T>(scale);
    chosen.push_back(static_cast<int>(pick));
  }
  return chosen;
}

const KrausChannel* NoiseModel::lookup(GateKind kind) const {
  if (auto it = per_kind.find(kind); it != per_kind.end()) return &it->second;
  return fallback ? &*fallback : nullptr;
}

std::size_t NoisyCircuit::channel_count() const {
  return static_cast<std::size_t>(
      std::count_if(ops_.begin(), ops_.end(), [](const NoisyOp& op) { return std::holds_alternative<KrausChannel>(op); }));
}

void NoisyCircuit::add_channel(KrausChannel ch) {
  check_targets(ch, n_qubits_);
  ops_.emplace_back(std::move(ch));
}

NoisyCircuit noisy_circuit(const Circuit& c, const NoiseModel& model) {
  NoisyCircuit out(c.n_qubits());
  for (const auto& g : c.gates()) {
    out.add_gate(g);
    if (g.kind == GateKind::Measure || g.kind == GateKind::Barrier) continue;
    if (const KrausChannel* tmpl = model.lookup(g.kind)) out.add_channel(tmpl->with_targets(g.targets));
  }
  return out;
}

template <typename T>
DensityMatrix<T> noisy_dm_run(const NoisyCircuit& nc, const ParamMap& env, const EngineConfig& cfg) {
  DensityMatrix<T> rho(nc.n_qubits(), cfg);
  bool measured = false;
  for (const auto& op : nc.ops()) {
    if (const auto* g = std::get_if<GateInstruction>(&op)) {
      if (g->kind == GateKind::Measure) {
        measured = true;
        continue;
      }
      if (g->kind == GateKind::Barrier) continue;
      if (measured) throw Error(ErrorCode::MidCircuitMeasure, "gate after measurement");
      dm_apply(*g, rho, env);
    } else {
      channel_apply_dm(std::get<KrausChannel>(op), rho);
    }
  }
  return rho;
}

template <typename T>
StateVector<T> noisy_sv_trajectory(const NoisyCircuit& nc, const ParamMap& env, std::uint64_t seed,
                                   std::uint64_t trajectory, const EngineConfig& cfg) {
  StateVector<T> psi(nc.n_qubits(), cfg);
  bool measured = false;
  std::uint64_t ordinal = 0;
  for (const auto& op : nc.ops()) {
    if (const auto* g = std::get_if<GateInstruction>(&op)) {
      if (g->kind == GateKind::Measure) {
        measured = true;
        continue;
      }
      if (g->kind == GateKind::Barrier) continue;
      if (measured) throw Error(ErrorCode::MidCircuitMeasure, "gate after measurement");
      sv_apply(*g, psi, env);
    } else {
      CounterRng rng(seed, trajectory, ordinal++);
      channel_sample_sv(std::get<KrausChannel>(op), psi, rng);
    }
  }
  return psi;
}

template <typename T>
TrajectoryEstimate trajectory_expectation(const NoisyCircuit& nc, const PauliSum& h, const ParamMap& env,
                                          std::uint64_t trajectories, std::uint64_t seed, int workers,
                                          const EngineConfig& cfg) {
  if (trajectories == 0) throw Error(ErrorCode::InvalidTask, "need at least one trajectory");
  std::vector<double> values(trajectories);
  EngineConfig inner = cfg;
  inner.parallel.workers = 1;
  const auto n = static_cast<std::int64_t>(trajectories);
  std::optional<Error> failure;
#pragma omp parallel for schedule(static) num_threads(std::max(workers, 1)) if (workers > 1)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      const auto psi = noisy_sv_trajectory<T>(nc, env, seed, static_cast<std::uint64_t>(k), inner);
      values[static_cast<std::size_t>(k)] = sv_expectation(h, psi);
    } catch (const Error& e) {
#pragma omp critical(qforge_trajectory_failure)
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n)), trajectories};
}

template <typename T>
Counts trajectory_sample(const NoisyCircuit& nc, const ParamMap& env, const std::vector<int>& qubits,
                         std::uint64_t shots, std::uint64_t seed, const EngineConfig& cfg) {
  for (int q : qubits) {
    if (q < 0 || q >= nc.n_qubits()) throw Error(ErrorCode::IndexOutOfRange, "measured qubit " + std::to_string(q));
  }
  // Channel ordinals stay below this one, so the readout draw is independent.
  const std::uint64_t readout = nc.channel_count();
  Counts counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const auto psi = noisy_sv_trajectory<T>(nc, env, seed, s, cfg);
    const auto probs = probabilities(psi);
    double total = 0.0;
    for (double p : probs) total += p;
    CounterRng rng(seed, s, readout);
    const double u = rng.uniform() * total;
    double cum = 0.0;
    Index pick = probs.size() - 1;
    for (Index i = 0; i < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum && probs[i] > 0.0) {
        pick = i;
        break;
      }
    }
    std::string bits(qubits.size(), '0');
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      if ((pick >> qubits[j]) & 1) bits[qubits.size() - 1 - j] = '1';
    }
    ++counts[bits];
  }
  return counts;
}

#define QFORGE_NOISE_INSTANTIATE(T)                                                                               \
  template void channel_apply_dm(const KrausChannel&, DensityMatrix<T>&);                                         \
  template std::vector<int> channel_sample_sv(const KrausChannel&, StateVector<T>&, CounterRng&);                 \
  template DensityMatrix<T> noisy_dm_run(const NoisyCircuit&, const ParamMap&, const EngineConfig&);              \
  template StateVector<T> noisy_sv_trajectory(const NoisyCircuit&, const ParamMap&, std::uint64_t, std::uint64_t, \
                                              const EngineConfig&);                                               \
  template TrajectoryEstimate trajectory_expectation<T>(const NoisyCircuit&, const PauliSum&, const ParamMap&,    \
                                                        std::uint64_t, std::uint64_t, int, const EngineConfig&);  \
  template Counts trajectory_sample<T>(const NoisyCircuit&, const ParamMap&, const std::vector<int>&,             \
                                       std::uint64_t, std::uint64_t, const EngineConfig&);

QFORGE_NOISE_INSTANTIATE(float)
QFORGE_NOISE_INSTANTIATE(double)

}  // namespace qforge
