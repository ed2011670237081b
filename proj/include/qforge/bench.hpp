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
#include "qforge/core.hpp"

namespace qforge::bench {

enum class Suite { RandomComplex, RandomSimple };
const char* to_string(Suite s);
Suite parse_suite(std::string_view name);

struct BenchSpec {
  std::vector<Suite> suites{Suite::RandomComplex, Suite::RandomSimple};
  int min_qubits = 4;
  int max_qubits = 8;
  int gates_per_qubit = 10;
  int repetitions = 3;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: engine default
  int threshold_qubits = 13;
  Precision precision = Precision::Double;
  int qubit_cap = 30;

  /// Throws InvalidTask on an empty or inverted range or non-positive counts.
  void validate() const;
};

/// `gates_per_qubit` layers; in each, every qubit receives one gate drawn
/// uniformly from {X, Y, Z, H, CNOT, S, T, RX, RY, RZ, Rxx, Ryy, Rzz, SWAP}.
/// Two-qubit gates take a uniform partner, and with probability 0.3 the gate
/// gains one extra control on a uniformly chosen free qubit. Angles are
/// uniform in [0, 2 pi). The stream is a pure function of (n, depth, seed).
Circuit random_complex(int n_qubits, int gates_per_qubit, std::uint64_t seed);

/// Exactly pass_decompose(random_complex(...)).
Circuit random_simple(int n_qubits, int gates_per_qubit, std::uint64_t seed);

Circuit generate(Suite s, int n_qubits, int gates_per_qubit, std::uint64_t seed);

/// Per-(suite, n) seed so rows can be regenerated independently.
std::uint64_t row_seed(std::uint64_t seed, int n_qubits);

struct BenchRow {
  Suite suite = Suite::RandomComplex;
  int n_qubits = 0;
  std::size_t gates = 0;
  int reps = 0;
  double median_s = 0.0;
  double min_s = 0.0;
  int threads = 1;
  Precision precision = Precision::Double;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<std::string> warnings;
};

/// Times sv_run only (generation and decomposition are excluded) with a
/// monotonic clock. Qubit counts above the cap are skipped with a warning.
BenchReport run(const BenchSpec& spec);

/// Wall time of one sv_run, in seconds.
double time_simulation(const Circuit& c, Precision p, int threads, int threshold_qubits);

std::string to_csv(const BenchReport& r);
std::string render_table(const BenchReport& r);

}  // namespace qforge::bench
