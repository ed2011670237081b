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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qforge/circuit.hpp"
#include "qforge/density_matrix.hpp"
#include "qforge/gradient.hpp"
#include "qforge/noise.hpp"
#include "qforge/operators.hpp"
#include "qforge/statevector.hpp"

namespace qforge::io {

using Json = nlohmann::ordered_json;

// All readers throw Error(ParseError) whose message names the offending
// field, e.g. "gates[2].targets[0]: expected integer".

Json expression_to_json(const ParameterExpression& e);
ParameterExpression expression_from_json(const Json& j, const std::string& where = "arg");

/// {"n_qubits", "gates": [{"kind", "targets", "controls", "arg"?, "matrix"?,
/// "allow_non_unitary"?, "label"?}]}. Custom matrices are row lists of
/// [re, im] pairs.
Json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);

/// [{"pauli": "X0 Y1", "coeff_re", "coeff_im"}]; the identity is "".
Json hamiltonian_to_json(const PauliSum& h);
PauliSum hamiltonian_from_json(const Json& j);

/// {"default": {"type", "p"}, "per_kind": {"h": {...}}}. A "custom" channel
/// lists "kraus": [matrix, ...] instead of "p".
Json noise_model_to_json(const NoiseModel& m);
NoiseModel noise_model_from_json(const Json& j);

/// Header row of parameter names, then one numeric row per binding.
struct Batch {
  std::vector<std::string> names;
  Eigen::MatrixXd values;
};
Batch parse_batch_csv(std::string_view text);

/// Columns: row, value_h{j} for each Hamiltonian, then grad_h{j}_{name} in
/// (Hamiltonian, parameter) row-major order. Numbers round-trip exactly.
std::string gradient_csv(const GradientResult& r, const std::vector<std::string>& names);

/// 16-byte header (magic, n_qubits u32, precision u32 with 0 = single and
/// 1 = double, reserved u32 = 0), then little-endian (re, im) doubles.
struct Dump {
  std::string magic;
  int n_qubits = 0;
  Precision precision = Precision::Double;
  std::vector<std::complex<double>> values;
};
template <typename T>
std::string encode_state(const StateVector<T>& psi);
template <typename T>
std::string encode_density(const DensityMatrix<T>& rho);
Dump decode_dump(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);
Json parse_json(std::string_view text, const std::string& what);

}  // namespace qforge::io
