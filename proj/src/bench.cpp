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

#include "qforge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

#include "qforge/compile.hpp"
#include "qforge/statevector.hpp"

namespace qforge::bench {

namespace {

enum class Draw { X, Y, Z, H, CNOT, S, T, RX, RY, RZ, Rxx, Ryy, Rzz, SWAP };
constexpr int kDrawCount = 14;
constexpr Draw kSingleQubit[] = {Draw::X, Draw::Y, Draw::Z, Draw::H, Draw::S, Draw::T, Draw::RX, Draw::RY, Draw::RZ};

bool is_pair(Draw d) {
  return d == Draw::CNOT || d == Draw::Rxx || d == Draw::Ryy || d == Draw::Rzz || d == Draw::SWAP;
}

// Modulo draws keep the stream independent of the standard library's
// distribution implementations.
int pick(std::mt19937_64& rng, int k) { return static_cast<int>(rng() % static_cast<std::uint64_t>(k)); }

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

GateInstruction draw_gate(Draw d, int q, int partner, double angle) {
  switch (d) {
    case Draw::X: return gates::x(q);
    case Draw::Y: return gates::y(q);
    case Draw::Z: return gates::z(q);
    case Draw::H: return gates::h(q);
    case Draw::S: return gates::s(q);
    case Draw::T: return gates::t(q);
    case Draw::RX: return gates::rx(q, angle);
    case Draw::RY: return gates::ry(q, angle);
    case Draw::RZ: return gates::rz(q, angle);
    case Draw::CNOT: return gates::cnot(q, partner);
    case Draw::Rxx: return gates::rxx(q, partner, angle);
    case Draw::Ryy: return gates::ryy(q, partner, angle);
    case Draw::Rzz: return gates::rzz(q, partner, angle);
    case Draw::SWAP: return gates::swap(q, partner);
  }
  throw Error(ErrorCode::InvalidGate, "unreachable draw");
}

}  // namespace

const char* to_string(Suite s) { return s == Suite::RandomComplex ? "RandomComplex" : "RandomSimple"; }

Suite parse_suite(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "randomcomplex" || s == "complex") return Suite::RandomComplex;
  if (s == "randomsimple" || s == "simple") return Suite::RandomSimple;
  throw Error(ErrorCode::ParseError, "unknown suite '" + std::string(name) + "'");
}

void BenchSpec::validate() const {
  if (suites.empty()) throw Error(ErrorCode::InvalidTask, "no suites selected");
  if (min_qubits < 1 || max_qubits < min_qubits) {
    throw Error(ErrorCode::InvalidTask, "qubit range must satisfy 1 <= lo <= hi");
  }
  if (gates_per_qubit < 1) throw Error(ErrorCode::InvalidTask, "gates_per_qubit must be >= 1");
  if (repetitions < 1) throw Error(ErrorCode::InvalidTask, "repetitions must be >= 1");
  if (threads < 0) throw Error(ErrorCode::InvalidTask, "threads must be >= 0");
}

Circuit random_complex(int n_qubits, int gates_per_qubit, std::uint64_t seed) {
  if (n_qubits < 1) throw Error(ErrorCode::InvalidTask, "random circuit needs at least one qubit");
  std::mt19937_64 rng(seed);
  Circuit c(n_qubits);
  for (int layer = 0; layer < gates_per_qubit; ++layer) {
    for (int q = 0; q < n_qubits; ++q) {
      Draw d = n_qubits >= 2 ? static_cast<Draw>(pick(rng, kDrawCount))
                             : kSingleQubit[pick(rng, static_cast<int>(std::size(kSingleQubit)))];
      int partner = -1;
      if (is_pair(d)) {
        partner = pick(rng, n_qubits - 1);
        if (partner >= q) ++partner;
      }
      const double angle = 2.0 * kPi * unit(rng);
      auto g = draw_gate(d, q, partner, angle);
      if (unit(rng) < 0.3) {
        std::vector<int> free;
        for (int k = 0; k < n_qubits; ++k) {
          if (!g.acts_on(k)) free.push_back(k);
        }
        if (!free.empty()) g = controlled(std::move(g), {free[static_cast<std::size_t>(pick(rng, static_cast<int>(free.size())))]});
      }
      c.append(std::move(g));
    }
  }
  return c;
}

Circuit random_simple(int n_qubits, int gates_per_qubit, std::uint64_t seed) {
  return pass_decompose(GateDag::build(random_complex(n_qubits, gates_per_qubit, seed))).to_circuit();
}

Circuit generate(Suite s, int n_qubits, int gates_per_qubit, std::uint64_t seed) {
  return s == Suite::RandomComplex ? random_complex(n_qubits, gates_per_qubit, seed)
                                   : random_simple(n_qubits, gates_per_qubit, seed);
}

std::uint64_t row_seed(std::uint64_t seed, int n_qubits) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(n_qubits + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double time_simulation(const Circuit& c, Precision p, int threads, int threshold_qubits) {
  EngineConfig cfg;
  cfg.parallel.workers = threads;
  cfg.parallel.threshold_qubits = threshold_qubits;
  const auto start = std::chrono::steady_clock::now();
  double sink = 0.0;
  if (p == Precision::Single) {
    sink = sv_run<float>(c, {}, std::nullopt, cfg).norm_squared();
  } else {
    sink = sv_run<double>(c, {}, std::nullopt, cfg).norm_squared();
  }
  const auto stop = std::chrono::steady_clock::now();
  if (!(sink > 0.0)) throw Error(ErrorCode::NonFinite, "benchmark state lost its norm");
  return std::chrono::duration<double>(stop - start).count();
}

BenchReport run(const BenchSpec& spec) {
  spec.validate();
  BenchReport report;
  const int threads_used = spec.threads > 0 ? spec.threads : available_workers();
  for (Suite suite : spec.suites) {
    for (int n = spec.min_qubits; n <= spec.max_qubits; ++n) {
      if (n > spec.qubit_cap) {
        report.warnings.push_back(std::string(to_string(suite)) + " n=" + std::to_string(n) +
                                  " skipped: exceeds the engine cap of " + std::to_string(spec.qubit_cap));
        continue;
      }
      const Circuit c = generate(suite, n, spec.gates_per_qubit, row_seed(spec.seed, n));
      std::vector<double> times;
      for (int r = 0; r < spec.repetitions; ++r) {
        times.push_back(time_simulation(c, spec.precision, spec.threads, spec.threshold_qubits));
      }
      std::sort(times.begin(), times.end());
      const std::size_t m = times.size();
      BenchRow row;
      row.suite = suite;
      row.n_qubits = n;
      row.gates = c.size();
      row.reps = spec.repetitions;
      row.median_s = m % 2 ? times[m / 2] : 0.5 * (times[m / 2 - 1] + times[m / 2]);
      row.min_s = times.front();
      row.threads = n >= spec.threshold_qubits ? threads_used : 1;
      row.precision = spec.precision;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string to_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "suite,n_qubits,gates,reps,median_s,min_s,threads,precision\n";
  for (const auto& row : r.rows) {
    out << to_string(row.suite) << ',' << row.n_qubits << ',' << row.gates << ',' << row.reps << ','
        << format_double(row.median_s) << ',' << format_double(row.min_s) << ',' << row.threads << ','
        << qforge::to_string(row.precision) << '\n';
  }
  return out.str();
}

std::string render_table(const BenchReport& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %4s %8s %5s %12s %12s %8s %9s\n", "suite", "n", "gates", "reps", "median [s]",
                "min [s]", "threads", "precision");
  out << line;
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof line, "%-14s %4d %8zu %5d %12.6f %12.6f %8d %9s\n", to_string(row.suite), row.n_qubits,
                  row.gates, row.reps, row.median_s, row.min_s, row.threads, qforge::to_string(row.precision));
    out << line;
  }
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace qforge::bench
