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

#include "qforge/circuit.hpp"
#include "qforge/kernels.hpp"
#include "qforge/operators.hpp"
#include "qforge/statevector.hpp"

namespace qforge {

inline constexpr int kDensityQubitCap = 13;

/// Dense mixed state. Row-major storage, so the flat index of entry (r, c) is
/// (r << n) | c; the engine treats it as a 2n-qubit vector whose high n bits
/// are the row index and reuses the state-vector kernels on it.
template <typename T>
class DensityMatrix {
 public:
  using Scalar = T;
  using C = std::complex<T>;

  /// |0...0><0...0|.
  explicit DensityMatrix(int n_qubits, EngineConfig cfg = {});
  static DensityMatrix from_matrix(const RowMatrixXc<T>& rho, EngineConfig cfg = {});

  int n_qubits() const { return n_qubits_; }
  Index dim() const { return Index{1} << n_qubits_; }
  const RowMatrixXc<T>& matrix() const { return rho_; }
  RowMatrixXc<T>& matrix() { return rho_; }
  C* data() { return rho_.data(); }
  const C* data() const { return rho_.data(); }
  const EngineConfig& config() const { return cfg_; }

  std::complex<double> trace() const;
  double purity() const;
  /// Largest |rho - rho^dagger| entry.
  double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part (validation only; O(8^n)).
  double min_eigenvalue() const;

  Eigen::MatrixXcd to_double() const { return rho_.template cast<std::complex<double>>(); }

 private:
  DensityMatrix() = default;

  int n_qubits_ = 0;
  EngineConfig cfg_;
  RowMatrixXc<T> rho_;
};

using DensityMatrixF = DensityMatrix<float>;
using DensityMatrixD = DensityMatrix<double>;

/// rho <- M rho M^dagger for a (possibly non-unitary) 2x2 / 4x4 `m`.
template <typename T>
void dm_conjugate(DensityMatrix<T>& rho, std::span<const int> targets, std::span<const int> controls, GateClass cls,
                  const SmallMatrix& m);

template <typename T>
void dm_apply(const GateInstruction& g, DensityMatrix<T>& rho, const ParamMap& env = {});

template <typename T>
DensityMatrix<T> dm_run(const Circuit& c, const ParamMap& env = {}, const EngineConfig& cfg = {});

/// tr(rho H) string by string.
template <typename T>
double dm_expectation(const PauliSum& h, const DensityMatrix<T>& rho);

template <typename T>
DensityMatrix<T> dm_from_statevector(const StateVector<T>& psi);

#define QFORGE_DM_EXTERN(T)                                                                                  \
  extern template class DensityMatrix<T>;                                                                    \
  extern template void dm_conjugate(DensityMatrix<T>&, std::span<const int>, std::span<const int>, GateClass, \
                                    const SmallMatrix&);                                                     \
  extern template void dm_apply(const GateInstruction&, DensityMatrix<T>&, const ParamMap&);                 \
  extern template DensityMatrix<T> dm_run(const Circuit&, const ParamMap&, const EngineConfig&);             \
  extern template double dm_expectation(const PauliSum&, const DensityMatrix<T>&);                           \
  extern template DensityMatrix<T> dm_from_statevector(const StateVector<T>&);

QFORGE_DM_EXTERN(float)
QFORGE_DM_EXTERN(double)
#undef QFORGE_DM_EXTERN

}  // namespace qforge
