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

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <span>

#include "qforge/circuit.hpp"
#include "qforge/core.hpp"

namespace qforge {

/// Worker fan-out for gate kernels. Below `threshold_qubits` every kernel runs
/// on the calling thread; at or above it, `workers` threads split the index
/// space into contiguous chunks (0 means one per available hardware thread).
struct ParallelConfig {
  int threshold_qubits = 13;
  int workers = 0;

  int workers_for(int n_qubits) const;
};

int available_workers();

enum class KernelPolicy { Scalar, Vectorized };

const char* to_string(KernelPolicy p);

/// True when the running CPU can execute the AVX double-precision kernels.
bool vectorized_available();

struct EngineConfig {
  KernelPolicy policy = KernelPolicy::Vectorized;
  ParallelConfig parallel;
  int qubit_cap = 30;
};

namespace kernels {

/// Enumerates basis indices with a fixed set of bit positions: positions in
/// `fixed` are inserted as zero, then `set_mask` is OR-ed in.
struct IndexPattern {
  std::array<int, 64> positions{};
  int count = 0;
  Index set_mask = 0;

  IndexPattern(std::span<const int> fixed, Index set_mask);

  Index expand(Index k) const {
    for (int i = 0; i < count; ++i) {
      const int p = positions[static_cast<std::size_t>(i)];
      const Index low = k & ((Index{1} << p) - 1);
      k = ((k >> p) << (p + 1)) | low;
    }
    return k | set_mask;
  }
};

Index control_mask(std::span<const int> controls);

template <typename F>
void parallel_for(Index count, int workers, F&& body) {
  if (workers <= 1 || count < 2) {
    for (Index k = 0; k < count; ++k) body(k);
    return;
  }
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::int64_t k = 0; k < n; ++k) body(static_cast<Index>(k));
}

/// Reference kernels: one loop per gate class, plain complex arithmetic.
template <typename T>
struct ScalarPolicy {
  using C = std::complex<T>;

  /// diag(d0, d1) on `target`. Only the indices that change are visited.
  static void diagonal(C* amps, int n, int target, std::span<const int> controls, C d0, C d1, int workers) {
    const Index tbit = Index{1} << target;
    const Index cmask = control_mask(controls);
    if (d0 == C{1}) {
      std::array<int, 64> fixed{};
      std::copy(controls.begin(), controls.end(), fixed.begin());
      fixed[controls.size()] = target;
      IndexPattern pat(std::span<const int>(fixed.data(), controls.size() + 1), cmask | tbit);
      parallel_for(Index{1} << (n - pat.count), workers, [&](Index k) { amps[pat.expand(k)] *= d1; });
      return;
    }
    IndexPattern pat(controls, cmask);
    parallel_for(Index{1} << (n - pat.count), workers, [&](Index k) {
      const Index i = pat.expand(k);
      amps[i] *= (i & tbit) ? d1 : d0;
    });
  }

  /// [[0, upper], [lower, 0]] on `target`.
  static void anti_diagonal(C* amps, int n, int target, std::span<const int> controls, C upper, C lower,
                            int workers) {
    const Index tbit = Index{1} << target;
    IndexPattern pat = pair_pattern(target, controls);
    parallel_for(Index{1} << (n - pat.count), workers, [&](Index k) {
      const Index i0 = pat.expand(k);
      const Index i1 = i0 | tbit;
      const C a = amps[i0];
      amps[i0] = upper * amps[i1];
      amps[i1] = lower * a;
    });
  }

  static void single(C* amps, int n, int target, std::span<const int> controls, const std::array<C, 4>& m,
                     int workers) {
    const Index tbit = Index{1} << target;
    IndexPattern pat = pair_pattern(target, controls);
    parallel_for(Index{1} << (n - pat.count), workers, [&](Index k) {
      const Index i0 = pat.expand(k);
      const Index i1 = i0 | tbit;
      const C a = amps[i0];
      const C b = amps[i1];
      amps[i0] = m[0] * a + m[1] * b;
      amps[i1] = m[2] * a + m[3] * b;
    });
  }

  /// diag(d[0..3]) on (t0, t1) with local index b0 + 2*b1.
  static void two_diagonal(C* amps, int n, int t0, int t1, std::span<const int> controls,
                           const std::array<C, 4>& d, int workers) {
    const Index b0 = Index{1} << t0;
    const Index b1 = Index{1} << t1;
    IndexPattern pat(controls, control_mask(controls));
    parallel_for(Index{1} << (n - pat.count), workers, [&](Index k) {
      const Index i = pat.expand(k);
      amps[i] *= d[((i & b0) ? 1u : 0u) | ((i & b1) ? 2u : 0u)];
    });
  }

  static void two(C* amps, int n, int t0, int t1, std::span<const int> controls, const std::array<C, 16>& m,
                  int workers) {
    const Index off[4] = {0, Index{1} << t0, Index{1} << t1, (Index{1} << t0) | (Index{1} << t1)};
    std::array<int, 64> fixed{};
    std::copy(controls.begin(), controls.end(), fixed.begin());
    fixed[controls.size()] = t0;
    fixed[controls.size() + 1] = t1;
    IndexPattern pat(std::span<const int>(fixed.data(), controls.size() + 2), control_mask(controls));
    parallel_for(Index{1} << (n - pat.count), workers, [&](Index k) {
      const Index base = pat.expand(k);
      C v[4];
      for (int j = 0; j < 4; ++j) v[j] = amps[base | off[j]];
      for (int r = 0; r < 4; ++r) {
        amps[base | off[r]] = m[4 * r] * v[0] + m[4 * r + 1] * v[1] + m[4 * r + 2] * v[2] + m[4 * r + 3] * v[3];
      }
    });
  }

  static IndexPattern pair_pattern(int target, std::span<const int> controls) {
    std::array<int, 64> fixed{};
    std::copy(controls.begin(), controls.end(), fixed.begin());
    fixed[controls.size()] = target;
    return IndexPattern(std::span<const int>(fixed.data(), controls.size() + 1), control_mask(controls));
  }
};

namespace avx {
// Raw interleaved (re, im) doubles. Return false when the index layout is not
// covered by a vector path; the caller then runs the scalar kernel.
bool single(double* amps, int n, int target, const int* controls, int n_controls, const double* m8, int shape,
            int workers);
bool two(double* amps, int n, int t0, int t1, const int* controls, int n_controls, const double* m32,
         bool diagonal, int workers);
}  // namespace avx

/// Lane-packed kernels. Double precision uses 256-bit registers holding two
/// complex amplitudes; single precision and unsupported layouts fall back to
/// ScalarPolicy.
template <typename T>
struct VectorizedPolicy {
  using C = std::complex<T>;
  using Fallback = ScalarPolicy<T>;

  static void diagonal(C* amps, int n, int target, std::span<const int> controls, C d0, C d1, int workers) {
    if constexpr (std::is_same_v<T, double>) {
      const std::array<C, 4> m{d0, C{0}, C{0}, d1};
      if (run_single(amps, n, target, controls, m, 1, workers)) return;
    }
    Fallback::diagonal(amps, n, target, controls, d0, d1, workers);
  }

  static void anti_diagonal(C* amps, int n, int target, std::span<const int> controls, C upper, C lower,
                            int workers) {
    if constexpr (std::is_same_v<T, double>) {
      const std::array<C, 4> m{C{0}, upper, lower, C{0}};
      if (run_single(amps, n, target, controls, m, 2, workers)) return;
    }
    Fallback::anti_diagonal(amps, n, target, controls, upper, lower, workers);
  }

  static void single(C* amps, int n, int target, std::span<const int> controls, const std::array<C, 4>& m,
                     int workers) {
    if constexpr (std::is_same_v<T, double>) {
      if (run_single(amps, n, target, controls, m, 0, workers)) return;
    }
    Fallback::single(amps, n, target, controls, m, workers);
  }

  static void two_diagonal(C* amps, int n, int t0, int t1, std::span<const int> controls,
                           const std::array<C, 4>& d, int workers) {
    if constexpr (std::is_same_v<T, double>) {
      std::array<C, 16> m{};
      for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(5 * i)] = d[static_cast<std::size_t>(i)];
      if (run_two(amps, n, t0, t1, controls, m, true, workers)) return;
    }
    Fallback::two_diagonal(amps, n, t0, t1, controls, d, workers);
  }

  static void two(C* amps, int n, int t0, int t1, std::span<const int> controls, const std::array<C, 16>& m,
                  int workers) {
    if constexpr (std::is_same_v<T, double>) {
      if (run_two(amps, n, t0, t1, controls, m, false, workers)) return;
    }
    Fallback::two(amps, n, t0, t1, controls, m, workers);
  }

 private:
  static bool run_single(C* amps, int n, int target, std::span<const int> controls, const std::array<C, 4>& m,
                         int shape, int workers) {
    if (!vectorized_available()) return false;
    return avx::single(reinterpret_cast<double*>(amps), n, target, controls.data(),
                       static_cast<int>(controls.size()), reinterpret_cast<const double*>(m.data()), shape, workers);
  }
  static bool run_two(C* amps, int n, int t0, int t1, std::span<const int> controls, const std::array<C, 16>& m,
                      bool diagonal, int workers) {
    if (!vectorized_available()) return false;
    return avx::two(reinterpret_cast<double*>(amps), n, t0, t1, controls.data(), static_cast<int>(controls.size()),
                    reinterpret_cast<const double*>(m.data()), diagonal, workers);
  }
};

/// Routes a 2x2 / 4x4 matrix to the class-specialized kernel of `Policy`.
template <typename Policy, typename T>
void apply_with(std::complex<T>* amps, int n, std::span<const int> targets, std::span<const int> controls,
                GateClass cls, const SmallMatrix& m, int workers) {
  using C = std::complex<T>;
  auto cast = [](std::complex<double> v) { return C(static_cast<T>(v.real()), static_cast<T>(v.imag())); };
  if (targets.size() == 1) {
    const int t = targets[0];
    switch (cls) {
      case GateClass::ZLike:
        Policy::diagonal(amps, n, t, controls, cast(m(0, 0)), cast(m(1, 1)), workers);
        return;
      case GateClass::XLike:
        Policy::anti_diagonal(amps, n, t, controls, cast(m(0, 1)), cast(m(1, 0)), workers);
        return;
      default:
        Policy::single(amps, n, t, controls, {cast(m(0, 0)), cast(m(0, 1)), cast(m(1, 0)), cast(m(1, 1))},
                       workers);
        return;
    }
  }
  if (cls == GateClass::ZLike) {
    Policy::two_diagonal(amps, n, targets[0], targets[1], controls,
                         {cast(m(0, 0)), cast(m(1, 1)), cast(m(2, 2)), cast(m(3, 3))}, workers);
    return;
  }
  std::array<C, 16> mm;
  for (std::size_t i = 0; i < 16; ++i) mm[i] = cast(m.a[i]);
  Policy::two(amps, n, targets[0], targets[1], controls, mm, workers);
}

template <typename T>
void apply_matrix(std::complex<T>* amps, int n, std::span<const int> targets, std::span<const int> controls,
                  GateClass cls, const SmallMatrix& m, const EngineConfig& cfg) {
  const int workers = cfg.parallel.workers_for(n);
  if (cfg.policy == KernelPolicy::Vectorized) {
    apply_with<VectorizedPolicy<T>, T>(amps, n, targets, controls, cls, m, workers);
  } else {
    apply_with<ScalarPolicy<T>, T>(amps, n, targets, controls, cls, m, workers);
  }
}

}  // namespace kernels
}  // namespace qforge
