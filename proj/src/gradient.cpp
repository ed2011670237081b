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

#include "qforge/gradient.hpp"

#include <cmath>
#include <optional>
#include <set>

namespace qforge {

namespace {

struct GeneratorTerm {
  PauliString pauli;
  double weight;
};

// K with dU/dtheta = -i K U (controls excluded; the matrix element is
// restricted to the control subspace instead).
std::vector<GeneratorTerm> generator(const GateInstruction& g) {
  auto on = [&](Pauli p) {
    std::map<int, Pauli> f;
    for (int t : g.targets) f[t] = p;
    return PauliString(f);
  };
  switch (g.kind) {
    case GateKind::RX:
    case GateKind::Rxx: return {{on(Pauli::X), 0.5}};
    case GateKind::RY:
    case GateKind::Ryy: return {{on(Pauli::Y), 0.5}};
    case GateKind::RZ:
    case GateKind::Rzz: return {{on(Pauli::Z), 0.5}};
    case GateKind::PhaseShift: return {{PauliString(), -0.5}, {on(Pauli::Z), 0.5}};  // -|1><1|
    default: throw Error(ErrorCode::NonDifferentiableGate, std::string("no generator for ") + to_string(g.kind));
  }
}

bool contributes(const GateInstruction& g) { return g.arg && !g.arg->is_constant(); }

std::map<std::string, Eigen::Index> name_index(const GradientTask& task) {
  std::map<std::string, Eigen::Index> idx;
  for (std::size_t i = 0; i < task.param_names.size(); ++i) idx[task.param_names[i]] = static_cast<Eigen::Index>(i);
  return idx;
}

template <typename T>
double expectation(const PauliSum& h, const StateVector<T>& psi) {
  return sv_expectation(h, psi);
}

template <typename T>
StateVector<T> run_with_override(const Circuit& c, const ParamMap& env, std::size_t k, double shift,
                                 const EngineConfig& cfg) {
  StateVector<T> psi(c.n_qubits(), cfg);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& g = c[i];
    if (g.kind == GateKind::Measure || g.kind == GateKind::Barrier) continue;
    double angle = is_parameterized(g.kind) ? g.angle(env) : 0.0;
    if (i == k) angle += shift;
    apply_gate(g, angle, false, psi);
  }
  return psi;
}

// Runs `body(row, counters)` for every row, possibly concurrently, and sums
// the counters in row order afterwards.
template <typename F>
GradientCounters for_rows(Eigen::Index rows, int workers, F&& body) {
  std::vector<GradientCounters> per_row(static_cast<std::size_t>(rows));
  std::optional<Error> failure;
#pragma omp parallel for schedule(static) num_threads(std::max(workers, 1)) if (workers > 1 && rows > 1)
  for (Eigen::Index r = 0; r < rows; ++r) {
    try {
      body(r, per_row[static_cast<std::size_t>(r)]);
    } catch (const Error& e) {
#pragma omp critical(qforge_gradient_failure)
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;
  GradientCounters total;
  for (const auto& c : per_row) {
    total.gate_applications += c.gate_applications;
    total.generator_elements += c.generator_elements;
    total.circuit_evaluations += c.circuit_evaluations;
  }
  return total;
}

GradientResult empty_result(const GradientTask& task) {
  GradientResult res;
  const auto rows = task.batch.rows();
  const auto nh = static_cast<Eigen::Index>(task.hams.size());
  const auto np = static_cast<Eigen::Index>(task.param_names.size());
  res.values = Eigen::MatrixXd::Zero(rows, nh);
  res.grads.assign(static_cast<std::size_t>(rows), Eigen::MatrixXd::Zero(nh, np));
  return res;
}

EngineConfig row_engine(const GradientOptions& opt, Eigen::Index rows) {
  EngineConfig cfg = opt.engine;
  if (opt.row_workers > 1 && rows > 1) cfg.parallel.workers = 1;
  return cfg;
}

template <typename T>
GradientResult adjoint_impl(const GradientTask& task, const GradientOptions& opt) {
  task.validate();
  for (const auto& g : task.circuit.gates()) {
    if (g.kind == GateKind::Measure) throw Error(ErrorCode::NonInvertible, "circuit contains a measurement");
    if (g.kind == GateKind::Custom && g.arg) {
      throw Error(ErrorCode::NonDifferentiableGate, "custom matrix gate carries a parameter");
    }
  }
  GradientResult res = empty_result(task);
  const auto idx = name_index(task);
  const auto& gates = task.circuit.gates();
  std::vector<std::vector<GeneratorTerm>> gens(gates.size());
  for (std::size_t k = 0; k < gates.size(); ++k) {
    if (contributes(gates[k])) gens[k] = generator(gates[k]);
  }
  const EngineConfig cfg = row_engine(opt, task.batch.rows());

  res.counters = for_rows(task.batch.rows(), opt.row_workers, [&](Eigen::Index r, GradientCounters& cnt) {
    const ParamMap env = task.row_env(r);
    std::vector<double> angles(gates.size(), 0.0);
    StateVector<T> psi(task.circuit.n_qubits(), cfg);
    for (std::size_t k = 0; k < gates.size(); ++k) {
      const auto& g = gates[k];
      if (g.kind == GateKind::Barrier) continue;
      angles[k] = is_parameterized(g.kind) ? g.angle(env) : 0.0;
      apply_gate(g, angles[k], false, psi);
      ++cnt.gate_applications;
    }
    Eigen::MatrixXd& grad = res.grads[static_cast<std::size_t>(r)];
    for (std::size_t hi = 0; hi < task.hams.size(); ++hi) {
      const PauliSum& h = task.hams[hi];
      res.values(r, static_cast<Eigen::Index>(hi)) = expectation(h, psi);
      StateVector<T> lam = psi;
      StateVector<T> phi = apply_pauli_sum(h, psi);
      for (std::size_t k = gates.size(); k-- > 0;) {
        const auto& g = gates[k];
        if (g.kind == GateKind::Barrier) continue;
        if (!gens[k].empty()) {
          // d<H>/dtheta_k = 2 Im <phi_k| K |psi_k> on the control subspace.
          std::complex<double> elem{};
          for (const auto& term : gens[k]) {
            elem += term.weight * pauli_matrix_element(term.pauli, phi, lam, g.controls);
            ++cnt.generator_elements;
          }
          const double d_theta = 2.0 * elem.imag();
          for (const auto& [name, coeff] : g.arg->terms()) {
            grad(static_cast<Eigen::Index>(hi), idx.at(name)) += coeff * d_theta;
          }
        }
        apply_gate(g, angles[k], true, lam);
        apply_gate(g, angles[k], true, phi);
        cnt.gate_applications += 2;
      }
    }
    cnt.circuit_evaluations += 1;
  });
  return res;
}

template <typename T>
GradientResult fd_impl(const GradientTask& task, double h, const GradientOptions& opt) {
  task.validate();
  if (!(h >= 1e-8 && h <= 1e-2)) throw Error(ErrorCode::InvalidTask, "finite-difference step must lie in [1e-8, 1e-2]");
  GradientResult res = empty_result(task);
  const EngineConfig cfg = row_engine(opt, task.batch.rows());
  const auto nh = task.hams.size();
  res.counters = for_rows(task.batch.rows(), opt.row_workers, [&](Eigen::Index r, GradientCounters& cnt) {
    ParamMap env = task.row_env(r);
    const auto psi = sv_run<T>(task.circuit, env, std::nullopt, cfg);
    ++cnt.circuit_evaluations;
    for (std::size_t hi = 0; hi < nh; ++hi) res.values(r, static_cast<Eigen::Index>(hi)) = expectation(task.hams[hi], psi);
    Eigen::MatrixXd& grad = res.grads[static_cast<std::size_t>(r)];
    for (std::size_t p = 0; p < task.param_names.size(); ++p) {
      const std::string& name = task.param_names[p];
      const double base = env[name];
      ParamMap plus = env, minus = env;
      plus[name] = base + h;
      minus[name] = base - h;
      const auto sp = sv_run<T>(task.circuit, plus, std::nullopt, cfg);
      const auto sm = sv_run<T>(task.circuit, minus, std::nullopt, cfg);
      cnt.circuit_evaluations += 2;
      for (std::size_t hi = 0; hi < nh; ++hi) {
        grad(static_cast<Eigen::Index>(hi), static_cast<Eigen::Index>(p)) =
            (expectation(task.hams[hi], sp) - expectation(task.hams[hi], sm)) / (2.0 * h);
      }
    }
  });
  return res;
}

template <typename T>
GradientResult shift_impl(const GradientTask& task, const GradientOptions& opt) {
  task.validate();
  const auto& gates = task.circuit.gates();
  for (const auto& g : gates) {
    if (g.kind == GateKind::Custom && g.arg) {
      throw Error(ErrorCode::UnsupportedGateForShift, "custom matrix gate carries a parameter");
    }
  }
  GradientResult res = empty_result(task);
  const auto idx = name_index(task);
  const EngineConfig cfg = row_engine(opt, task.batch.rows());
  const auto nh = task.hams.size();
  const double d_plus = (std::sqrt(2.0) + 1.0) / (4.0 * std::sqrt(2.0));
  const double d_minus = (std::sqrt(2.0) - 1.0) / (4.0 * std::sqrt(2.0));

  res.counters = for_rows(task.batch.rows(), opt.row_workers, [&](Eigen::Index r, GradientCounters& cnt) {
    const ParamMap env = task.row_env(r);
    auto values_at = [&](std::size_t k, double shift) {
      const auto psi = run_with_override<T>(task.circuit, env, k, shift, cfg);
      ++cnt.circuit_evaluations;
      std::vector<double> v(nh);
      for (std::size_t hi = 0; hi < nh; ++hi) v[hi] = expectation(task.hams[hi], psi);
      return v;
    };
    const auto base = values_at(gates.size(), 0.0);
    for (std::size_t hi = 0; hi < nh; ++hi) res.values(r, static_cast<Eigen::Index>(hi)) = base[hi];
    Eigen::MatrixXd& grad = res.grads[static_cast<std::size_t>(r)];
    for (std::size_t k = 0; k < gates.size(); ++k) {
      const auto& g = gates[k];
      if (!contributes(g)) continue;
      std::vector<double> d_theta(nh);
      // Generator spectrum {0, +-1/2} needs the four-term rule; {-1/2, 1/2}
      // (uncontrolled rotation) and {0, -1} (phase shift) need two.
      if (g.controls.empty() || g.kind == GateKind::PhaseShift) {
        const auto fp = values_at(k, kPi / 2), fm = values_at(k, -kPi / 2);
        for (std::size_t hi = 0; hi < nh; ++hi) d_theta[hi] = 0.5 * (fp[hi] - fm[hi]);
      } else {
        const auto f1p = values_at(k, kPi / 2), f1m = values_at(k, -kPi / 2);
        const auto f3p = values_at(k, 1.5 * kPi), f3m = values_at(k, -1.5 * kPi);
        for (std::size_t hi = 0; hi < nh; ++hi) {
          d_theta[hi] = d_plus * (f1p[hi] - f1m[hi]) - d_minus * (f3p[hi] - f3m[hi]);
        }
      }
      for (const auto& [name, coeff] : g.arg->terms()) {
        for (std::size_t hi = 0; hi < nh; ++hi) grad(static_cast<Eigen::Index>(hi), idx.at(name)) += coeff * d_theta[hi];
      }
    }
  });
  return res;
}

}  // namespace

GradientTask GradientTask::make(Circuit circuit, std::vector<PauliSum> hams, Eigen::MatrixXd batch) {
  GradientTask t;
  t.param_names = circuit.parameters();
  t.circuit = std::move(circuit);
  t.hams = std::move(hams);
  t.batch = std::move(batch);
  return t;
}

ParamMap GradientTask::row_env(Eigen::Index row) const {
  ParamMap env;
  for (std::size_t i = 0; i < param_names.size(); ++i) env[param_names[i]] = batch(row, static_cast<Eigen::Index>(i));
  return env;
}

void GradientTask::validate() const {
  if (hams.empty()) throw Error(ErrorCode::InvalidTask, "no Hamiltonians");
  if (batch.cols() != static_cast<Eigen::Index>(param_names.size())) {
    throw Error(ErrorCode::InvalidTask, "batch has " + std::to_string(batch.cols()) + " columns for " +
                                            std::to_string(param_names.size()) + " parameters");
  }
  std::set<std::string> names;
  for (const auto& n : param_names) {
    if (!names.insert(n).second) throw Error(ErrorCode::InvalidTask, "duplicate parameter '" + n + "'");
  }
  for (const auto& n : circuit.parameters()) {
    if (!names.count(n)) throw Error(ErrorCode::InvalidTask, "parameter '" + n + "' has no batch column");
  }
  if (!batch.allFinite()) throw Error(ErrorCode::NonFinite, "batch contains non-finite values");
  for (const auto& h : hams) {
    if (h.max_qubit() >= circuit.n_qubits()) throw Error(ErrorCode::IndexOutOfRange, "Hamiltonian exceeds circuit");
    h.real_terms();
  }
}

GradientResult adjoint_gradient(const GradientTask& task, const GradientOptions& opt) {
  return opt.precision == Precision::Single ? adjoint_impl<float>(task, opt) : adjoint_impl<double>(task, opt);
}

GradientResult fd_gradient(const GradientTask& task, double h, const GradientOptions& opt) {
  return opt.precision == Precision::Single ? fd_impl<float>(task, h, opt) : fd_impl<double>(task, h, opt);
}

GradientResult parameter_shift_gradient(const GradientTask& task, const GradientOptions& opt) {
  return opt.precision == Precision::Single ? shift_impl<float>(task, opt) : shift_impl<double>(task, opt);
}

}  // namespace qforge
