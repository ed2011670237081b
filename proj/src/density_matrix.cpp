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

#include "qforge/density_matrix.hpp"

#include <bit>
#include <cmath>
#include <new>

namespace qforge {

namespace {

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

}  // namespace

template <typename T>
DensityMatrix<T>::DensityMatrix(int n_qubits, EngineConfig cfg) : n_qubits_(n_qubits), cfg_(cfg) {
  if (n_qubits < 1) throw Error(ErrorCode::InvalidGate, "density matrix needs at least one qubit");
  if (n_qubits > kDensityQubitCap) {
    throw Error(ErrorCode::QubitCapExceeded, std::to_string(n_qubits) + " qubits exceeds the density-matrix cap of " +
                                                 std::to_string(kDensityQubitCap));
  }
  const auto d = static_cast<Eigen::Index>(dim());
  try {
    rho_ = RowMatrixXc<T>::Zero(d, d);
  } catch (const std::bad_alloc&) {
    throw Error(ErrorCode::QubitCapExceeded, "cannot allocate density matrix");
  }
  rho_(0, 0) = C{1};
}

template <typename T>
DensityMatrix<T> DensityMatrix<T>::from_matrix(const RowMatrixXc<T>& rho, EngineConfig cfg) {
  const auto size = static_cast<Index>(rho.rows());
  if (rho.rows() != rho.cols() || size < 2 || !std::has_single_bit(size)) {
    throw Error(ErrorCode::InvalidGate, "density matrix must be square with power-of-two dimension");
  }
  DensityMatrix out;
  out.n_qubits_ = std::countr_zero(size);
  if (out.n_qubits_ > kDensityQubitCap) throw Error(ErrorCode::QubitCapExceeded, "density matrix exceeds cap");
  out.cfg_ = cfg;
  out.rho_ = rho;
  return out;
}

template <typename T>
std::complex<double> DensityMatrix<T>::trace() const {
  std::complex<double> t{};
  for (Eigen::Index i = 0; i < rho_.rows(); ++i) t += widen(rho_(i, i));
  return t;
}

template <typename T>
double DensityMatrix<T>::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rho_.size(); ++i) acc += std::norm(widen(rho_.data()[i]));
  return acc;
}

template <typename T>
double DensityMatrix<T>::hermiticity_error() const {
  const Eigen::MatrixXcd m = to_double();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename T>
double DensityMatrix<T>::min_eigenvalue() const {
  const Eigen::MatrixXcd m = to_double();
  const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

template <typename T>
void dm_conjugate(DensityMatrix<T>& rho, std::span<const int> targets, std::span<const int> controls, GateClass cls,
                  const SmallMatrix& m) {
  const int n = rho.n_qubits();
  std::array<int, 2> row_targets{};
  std::array<int, 64> row_controls{};
  for (std::size_t i = 0; i < targets.size(); ++i) row_targets[i] = targets[i] + n;
  for (std::size_t i = 0; i < controls.size(); ++i) row_controls[i] = controls[i] + n;
  // M acts on the row index (left multiply), conj(M) on the column index
  // (right multiply by M^dagger).
  kernels::apply_matrix<T>(rho.data(), 2 * n, std::span<const int>(row_targets.data(), targets.size()),
                           std::span<const int>(row_controls.data(), controls.size()), cls, m, rho.config());
  kernels::apply_matrix<T>(rho.data(), 2 * n, targets, controls, cls, m.conjugate(), rho.config());
}

template <typename T>
void dm_apply(const GateInstruction& g, DensityMatrix<T>& rho, const ParamMap& env) {
  if (g.kind == GateKind::Barrier) return;
  if (g.kind == GateKind::Measure) throw Error(ErrorCode::MidCircuitMeasure, "measurement inside a circuit");
  check_gate_fits(g, rho.n_qubits());
  const double angle = is_parameterized(g.kind) ? g.angle(env) : 0.0;
  dm_conjugate(rho, g.targets, g.controls, gate_class(g.kind), small_gate_matrix(g.kind, angle, g.matrix));
}

template <typename T>
DensityMatrix<T> dm_run(const Circuit& c, const ParamMap& env, const EngineConfig& cfg) {
  DensityMatrix<T> rho(c.n_qubits(), cfg);
  bool measured = false;
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Measure) {
      measured = true;
      continue;
    }
    if (g.kind == GateKind::Barrier) continue;
    if (measured) throw Error(ErrorCode::MidCircuitMeasure, "gate after measurement");
    dm_apply(g, rho, env);
  }
  return rho;
}

template <typename T>
double dm_expectation(const PauliSum& h, const DensityMatrix<T>& rho) {
  if (h.max_qubit() >= rho.n_qubits()) throw Error(ErrorCode::IndexOutOfRange, "observable exceeds state");
  const Index d = rho.dim();
  const auto* a = rho.data();
  const int n = rho.n_qubits();
  std::complex<double> total{};
  for (const auto& [s, w] : h.real_terms()) {
    // tr(rho P) = sum_r rho[r, r^x] * i^nY * (-1)^{popcount(r & z)}
    const Index x = s.x_mask();
    const Index z = s.z_mask();
    std::complex<double> acc{};
    for (Index r = 0; r < d; ++r) {
      const std::complex<double> v = widen(a[(r << n) | (r ^ x)]);
      acc += (std::popcount(r & z) & 1) ? -v : v;
    }
    total += w * i_power(s.y_count()) * acc;
  }
  if (std::abs(total.imag()) > 1e-8) throw Error(ErrorCode::NonHermitian, "complex expectation value");
  return total.real();
}

template <typename T>
DensityMatrix<T> dm_from_statevector(const StateVector<T>& psi) {
  if (psi.n_qubits() > kDensityQubitCap) throw Error(ErrorCode::QubitCapExceeded, "state too wide for density matrix");
  const auto& v = psi.amplitudes();
  RowMatrixXc<T> rho = v * v.adjoint();
  return DensityMatrix<T>::from_matrix(rho, psi.config());
}

#define QFORGE_DM_INSTANTIATE(T)                                                                                \
  template class DensityMatrix<T>;                                                                              \
  template void dm_conjugate(DensityMatrix<T>&, std::span<const int>, std::span<const int>, GateClass,          \
                             const SmallMatrix&);                                                               \
  template void dm_apply(const GateInstruction&, DensityMatrix<T>&, const ParamMap&);                           \
  template DensityMatrix<T> dm_run(const Circuit&, const ParamMap&, const EngineConfig&);                       \
  template double dm_expectation(const PauliSum&, const DensityMatrix<T>&);                                     \
  template DensityMatrix<T> dm_from_statevector(const StateVector<T>&);

QFORGE_DM_INSTANTIATE(float)
QFORGE_DM_INSTANTIATE(double)

}  // namespace qforge
