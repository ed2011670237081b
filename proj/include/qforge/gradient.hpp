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
#include <string>
#include <vector>

#include "qforge/circuit.hpp"
#include "qforge/operators.hpp"
#include "qforge/statevector.hpp"

namespace qforge {

/// Expectation values of `hams` and their derivatives with respect to
/// `param_names`, for every row of `batch` (one column per name).
struct GradientTask {
  Circuit circuit;
  std::vector<PauliSum> hams;
  std::vector<std::string> param_names;
  Eigen::MatrixXd batch;

  /// Names taken from circuit.parameters().
  static GradientTask make(Circuit circuit, std::vector<PauliSum> hams, Eigen::MatrixXd batch);

  ParamMap row_env(Eigen::Index row) const;
  /// Throws InvalidTask (shape, names, finiteness) or the Hamiltonian errors.
  void validate() const;
};

struct GradientCounters {
  std::uint64_t gate_applications = 0;
  std::uint64_t generator_elements = 0;
  std::uint64_t circuit_evaluations = 0;
};

struct GradientResult {
  Eigen::MatrixXd values;             // batch x hams
  std::vector<Eigen::MatrixXd> grads;  // per row: hams x params
  GradientCounters counters;

  double grad(Eigen::Index row, Eigen::Index ham, Eigen::Index param) const { return grads[row](ham, param); }
};

struct GradientOptions {
  Precision precision = Precision::Double;
  EngineConfig engine;
  /// Batch rows evaluated concurrently; each row is computed identically
  /// whatever this is set to.
  int row_workers = 1;
};

/// Reverse sweep over (psi, H psi): one forward pass, then two un-applications
/// per gate for each Hamiltonian.
GradientResult adjoint_gradient(const GradientTask& task, const GradientOptions& opt = {});

/// Central differences (f(a + h) - f(a - h)) / 2h per named parameter.
GradientResult fd_gradient(const GradientTask& task, double h = 1e-5, const GradientOptions& opt = {});

/// Exact shift rules per gate occurrence: two terms for uncontrolled
/// rotations and PhaseShift (also controlled), four terms for controlled
/// rotations.
GradientResult parameter_shift_gradient(const GradientTask& task, const GradientOptions& opt = {});

}  // namespace qforge
