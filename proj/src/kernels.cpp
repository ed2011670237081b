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

#include "qforge/kernels.hpp"

#include <cstdlib>
#include <string>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qforge {

int available_workers() {
  if (const char* env = std::getenv("QFORGE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return std::max(1u, std::thread::hardware_concurrency());
#endif
}

int ParallelConfig::workers_for(int n_qubits) const {
  if (n_qubits < std::max(1, threshold_qubits)) return 1;
  return workers > 0 ? workers : available_workers();
}

const char* to_string(KernelPolicy p) { return p == KernelPolicy::Scalar ? "scalar" : "vectorized"; }

bool vectorized_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx");
  return ok;
#else
  return false;
#endif
}

namespace kernels {

IndexPattern::IndexPattern(std::span<const int> fixed, Index mask) : set_mask(mask) {
  count = static_cast<int>(fixed.size());
  std::copy(fixed.begin(), fixed.end(), positions.begin());
  std::sort(positions.begin(), positions.begin() + count);
}

Index control_mask(std::span<const int> controls) {
  Index m = 0;
  for (int c : controls) m |= Index{1} << c;
  return m;
}

}  // namespace kernels
}  // namespace qforge
