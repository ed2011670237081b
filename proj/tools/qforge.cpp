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

// qforge: command-line front end for the simulator, gradient engine, QAOA
// driver, compiler and benchmark harness.
//
// Exit codes: 0 success, 2 usage or input errors (bad flags, unreadable or
// malformed files), 3 engine errors.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qforge/bench.hpp"
#include "qforge/compile.hpp"
#include "qforge/density_matrix.hpp"
#include "qforge/gradient.hpp"
#include "qforge/io.hpp"
#include "qforge/noise.hpp"
#include "qforge/statevector.hpp"
#include "qforge/vqa.hpp"

namespace {

using namespace qforge;
using io::Json;

constexpr int kExitUsage = 2;
constexpr int kExitEngine = 3;
constexpr int kMaxListedProbabilities = 12;

struct EngineFlags {
  std::string backend = "sv";
  std::string precision = "double";
  std::string kernel = "vectorized";
  std::uint64_t seed = 0;
  int threads = 0;
  int threshold_qubits = 13;
  std::vector<std::string> params;
  std::string noise;
  std::uint64_t trajectories = 1000;

  EngineConfig config() const {
    EngineConfig cfg;
    cfg.parallel.workers = threads;
    cfg.parallel.threshold_qubits = threshold_qubits;
    cfg.policy = kernel == "scalar" ? KernelPolicy::Scalar : KernelPolicy::Vectorized;
    return cfg;
  }
  Precision prec() const { return parse_precision(precision); }
  bool dm() const { return backend == "dm"; }
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f, bool with_backend = true) {
  if (with_backend) {
    cmd->add_option("--backend", f.backend, "Simulation backend")
        ->check(CLI::IsMember({"sv", "dm"}))
        ->capture_default_str();
    cmd->add_option("--noise", f.noise, "Noise-model JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--trajectories", f.trajectories, "Trajectories for noisy state-vector estimates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  cmd->add_option("--precision", f.precision, "Floating-point precision")
      ->check(CLI::IsMember({"single", "double"}))
      ->capture_default_str();
  cmd->add_option("--kernel", f.kernel, "Kernel policy")
      ->check(CLI::IsMember({"scalar", "vectorized"}))
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed for every random choice")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0: all available)")
      ->envname("QFORGE_THREADS")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--threshold-qubits", f.threshold_qubits, "Smallest register that uses multiple workers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--params", f.params, "Parameter bindings name=value");
}

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap env;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "--params '" + item + "': expected name=value");
    const std::string name = item.substr(0, eq);
    if (!is_valid_parameter_name(name)) throw Error(ErrorCode::ParseError, "--params: invalid name '" + name + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1 || !std::isfinite(v)) throw std::invalid_argument("trailing");
      env[name] = v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "--params " + name + ": not a finite number");
    }
  }
  return env;
}

/// Error text without the leading "Code: " that Error::what() carries.
std::string detail(const Error& e) {
  const std::string_view w = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  return std::string(w.starts_with(prefix) ? w.substr(prefix.size()) : w);
}

/// Re-raises `e` as a ParseError naming `path`, unless it already does.
[[noreturn]] void in_file(const std::string& path, const Error& e) {
  const std::string d = detail(e);
  throw Error(ErrorCode::ParseError, d.starts_with(path) ? d : path + ": " + d);
}

Circuit load_circuit(const std::string& path) {
  try {
    return io::circuit_from_json(io::parse_json(io::read_file(path), path));
  } catch (const Error& e) {
    in_file(path, e);
  }
}

/// One Hamiltonian (array of terms) or several (array of arrays).
std::vector<PauliSum> load_hamiltonians(const std::string& path) {
  const Json j = io::parse_json(io::read_file(path), path);
  try {
    if (j.is_array() && !j.empty() && j[0].is_array()) {
      std::vector<PauliSum> out;
      for (const auto& h : j) out.push_back(io::hamiltonian_from_json(h));
      return out;
    }
    return {io::hamiltonian_from_json(j)};
  } catch (const Error& e) {
    in_file(path, e);
  }
}

NoiseModel load_noise(const std::string& path) {
  if (path.empty()) return {};
  try {
    return io::noise_model_from_json(io::parse_json(io::read_file(path), path));
  } catch (const Error& e) {
    in_file(path, e);
  }
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<int> default_qubits(const Circuit& c) {
  std::vector<int> qs;
  for (const auto& g : c.gates()) {
    if (g.kind != GateKind::Measure) continue;
    for (int q : g.targets) {
      if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
    }
  }
  if (qs.empty()) {
    for (int q = 0; q < c.n_qubits(); ++q) qs.push_back(q);
  }
  return qs;
}

Json counts_json(const Counts& counts) {
  Json j = Json::object();
  for (const auto& [k, v] : counts) j[k] = v;
  return j;
}

// ---------------------------------------------------------------- run ----

struct RunArgs {
  std::string circuit;
  std::string dump;
};

template <typename T>
Json run_impl(const EngineFlags& f, const RunArgs& a) {
  const Circuit c = load_circuit(a.circuit);
  const ParamMap env = parse_params(f.params);
  const NoiseModel noise = load_noise(f.noise);
  const EngineConfig cfg = f.config();
  Json out;
  out["command"] = "run";
  out["backend"] = f.backend;
  out["precision"] = to_string(precision_of<T>());
  out["n_qubits"] = c.n_qubits();
  out["gates"] = c.size();
  std::vector<double> probs;
  if (f.dm()) {
    const auto rho = noise.empty() ? dm_run<T>(c, env, cfg) : noisy_dm_run<T>(noisy_circuit(c, noise), env, cfg);
    out["trace"] = rho.trace().real();
    out["purity"] = rho.purity();
    for (Index i = 0; i < rho.dim(); ++i) probs.push_back(static_cast<double>(rho.matrix()(i, i).real()));
    if (!a.dump.empty()) io::write_file(a.dump, io::encode_density(rho));
  } else {
    const auto psi = noise.empty() ? sv_run<T>(c, env, std::nullopt, cfg)
                                   : noisy_sv_trajectory<T>(noisy_circuit(c, noise), env, f.seed, 0, cfg);
    out["norm"] = psi.norm_squared();
    probs = probabilities(psi);
    if (!a.dump.empty()) io::write_file(a.dump, io::encode_state(psi));
  }
  if (c.n_qubits() <= kMaxListedProbabilities) out["probabilities"] = probs;
  if (!a.dump.empty()) out["dump"] = a.dump;
  return out;
}

// ------------------------------------------------------------- sample ----

struct SampleArgs {
  std::string circuit;
  std::uint64_t shots = 1024;
  std::vector<int> qubits;
};

template <typename T>
Json sample_impl(const EngineFlags& f, const SampleArgs& a) {
  const Circuit c = load_circuit(a.circuit);
  const ParamMap env = parse_params(f.params);
  const NoiseModel noise = load_noise(f.noise);
  const EngineConfig cfg = f.config();
  const std::vector<int> qubits = a.qubits.empty() ? default_qubits(c) : a.qubits;
  Counts counts;
  if (f.dm()) {
    const auto rho = noise.empty() ? dm_run<T>(c, env, cfg) : noisy_dm_run<T>(noisy_circuit(c, noise), env, cfg);
    std::vector<double> p;
    for (Index i = 0; i < rho.dim(); ++i) p.push_back(std::max(0.0, static_cast<double>(rho.matrix()(i, i).real())));
    counts = sample_distribution(p, c.n_qubits(), qubits, a.shots, f.seed);
  } else if (!noise.empty()) {
    counts = trajectory_sample<T>(noisy_circuit(c, noise), env, qubits, a.shots, f.seed, cfg);
  } else {
    counts = sv_sample(sv_run<T>(c, env, std::nullopt, cfg), qubits, a.shots, f.seed);
  }
  Json out;
  out["command"] = "sample";
  out["backend"] = f.backend;
  out["precision"] = to_string(precision_of<T>());
  out["shots"] = a.shots;
  out["qubits"] = qubits;
  out["counts"] = counts_json(counts);
  return out;
}

// ------------------------------------------------------------- expval ----

struct ExpvalArgs {
  std::string circuit;
  std::string hamiltonian;
};

template <typename T>
Json expval_impl(const EngineFlags& f, const ExpvalArgs& a) {
  const Circuit c = load_circuit(a.circuit);
  const auto hams = load_hamiltonians(a.hamiltonian);
  const ParamMap env = parse_params(f.params);
  const NoiseModel noise = load_noise(f.noise);
  const EngineConfig cfg = f.config();
  Json values = Json::array();
  Json errors = Json::array();
  if (f.dm()) {
    const auto rho = noise.empty() ? dm_run<T>(c, env, cfg) : noisy_dm_run<T>(noisy_circuit(c, noise), env, cfg);
    for (const auto& h : hams) values.push_back(dm_expectation(h, rho));
  } else if (!noise.empty()) {
    const auto nc = noisy_circuit(c, noise);
    const int workers = f.threads > 0 ? f.threads : available_workers();
    for (const auto& h : hams) {
      const auto est = trajectory_expectation<T>(nc, h, env, f.trajectories, f.seed, workers, cfg);
      values.push_back(est.mean);
      errors.push_back(est.std_error);
    }
  } else {
    const auto psi = sv_run<T>(c, env, std::nullopt, cfg);
    for (const auto& h : hams) values.push_back(sv_expectation(h, psi));
  }
  Json out;
  out["command"] = "expval";
  out["backend"] = f.backend;
  out["precision"] = to_string(precision_of<T>());
  out["values"] = values;
  if (!errors.empty()) {
    out["std_errors"] = errors;
    out["trajectories"] = f.trajectories;
  }
  return out;
}

// --------------------------------------------------------------- grad ----

struct GradArgs {
  std::string circuit;
  std::string hamiltonian;
  std::string batch;
  std::string method = "adjoint";
  double fd_step = 1e-5;
  std::string output;
};

int cmd_grad(const EngineFlags& f, const GradArgs& a) {
  GradientTask task;
  task.circuit = load_circuit(a.circuit);
  task.hams = load_hamiltonians(a.hamiltonian);
  io::Batch batch;
  try {
    batch = io::parse_batch_csv(io::read_file(a.batch));
  } catch (const Error& e) {
    in_file(a.batch, e);
  }
  const auto circuit_params = task.circuit.parameters();
  for (const auto& p : circuit_params) {
    if (std::find(batch.names.begin(), batch.names.end(), p) == batch.names.end()) {
      throw Error(ErrorCode::ParseError, a.batch + ": header lacks circuit parameter '" + p + "'");
    }
  }
  task.param_names = batch.names;
  task.batch = batch.values;

  GradientOptions opt;
  opt.precision = f.prec();
  opt.engine = f.config();
  GradientResult r;
  if (a.method == "adjoint") {
    r = adjoint_gradient(task, opt);
  } else if (a.method == "shift") {
    r = parameter_shift_gradient(task, opt);
  } else {
    r = fd_gradient(task, a.fd_step, opt);
  }
  const std::string csv = io::gradient_csv(r, task.param_names);
  if (a.output.empty()) {
    std::cout << csv;
    return 0;
  }
  io::write_file(a.output, csv);
  Json out;
  out["command"] = "grad";
  out["method"] = a.method;
  out["precision"] = f.precision;
  out["rows"] = task.batch.rows();
  out["hamiltonians"] = task.hams.size();
  out["parameters"] = task.param_names;
  out["output"] = a.output;
  out["gate_applications"] = r.counters.gate_applications;
  emit(out);
  return 0;
}

// --------------------------------------------------------------- qaoa ----

struct QaoaArgs {
  std::string graph;
  int p = 1;
  std::string optimizer = "lbfgs";
  int iterations = 200;
  double learning_rate = 0.1;
  std::string init = "random";
  std::uint64_t shots = 1024;
};

int cmd_qaoa(const EngineFlags& f, const QaoaArgs& a) {
  Graph g;
  try {
    g = Graph::parse_edge_list(io::read_file(a.graph));
  } catch (const Error& e) {
    in_file(a.graph, e);
  }
  const Circuit c = qaoa_circuit(g, a.p);
  const PauliSum h = maxcut_hamiltonian(g);
  OptimizerConfig cfg;
  cfg.kind = parse_optimizer_kind(a.optimizer);
  cfg.iterations = a.iterations;
  cfg.learning_rate = a.learning_rate;
  GradientOptions grad;
  grad.precision = f.prec();
  grad.engine = f.config();
  const auto names = c.parameters();
  const Eigen::VectorXd start =
      a.init == "zero" ? Eigen::VectorXd::Zero(static_cast<Eigen::Index>(names.size())) : random_start(names.size(), f.seed);
  const auto res = optimize(c, h, start, cfg, grad);

  ParamMap env;
  Json params = Json::object();
  for (std::size_t i = 0; i < res.names.size(); ++i) {
    env[res.names[i]] = res.best_params[static_cast<Eigen::Index>(i)];
    params[res.names[i]] = res.best_params[static_cast<Eigen::Index>(i)];
  }
  std::vector<int> qubits(static_cast<std::size_t>(g.n_nodes()));
  for (int q = 0; q < g.n_nodes(); ++q) qubits[static_cast<std::size_t>(q)] = q;
  const Counts counts = f.prec() == Precision::Single
                            ? sv_sample(sv_run<float>(c, env, std::nullopt, grad.engine), qubits, a.shots, f.seed)
                            : sv_sample(sv_run<double>(c, env, std::nullopt, grad.engine), qubits, a.shots, f.seed);
  // Highest cut wins; ties go to the more frequent, then the smaller string.
  std::string best;
  double best_cut = -1.0;
  std::uint64_t best_hits = 0;
  for (const auto& [bits, hits] : counts) {
    const double cut = g.cut_value(bits);
    if (cut > best_cut || (cut == best_cut && hits > best_hits)) {
      best = bits;
      best_cut = cut;
      best_hits = hits;
    }
  }

  Json out;
  out["command"] = "qaoa";
  out["n_nodes"] = g.n_nodes();
  out["edges"] = g.edges().size();
  out["p"] = a.p;
  out["optimizer"] = to_string(cfg.kind);
  out["init"] = a.init;
  out["parameters"] = params;
  out["expected_cut"] = -res.best_value;
  out["best_bitstring"] = best;
  out["best_cut"] = best_cut;
  out["best_bitstring_count"] = best_hits;
  if (g.n_nodes() <= 20) out["optimal_cut"] = max_cut_brute_force(g).value;
  Json trace = Json::array();
  for (double v : res.trace) trace.push_back(-v);
  out["trace"] = trace;
  out["iterations"] = res.iterations;
  out["evaluations"] = res.evaluations;
  out["converged"] = res.converged;
  out["shots"] = a.shots;
  emit(out);
  return 0;
}

// ------------------------------------------------------------ compile ----

struct CompileArgs {
  std::string circuit;
  std::string coupling;
  std::string coupling_file;
  bool no_decompose = false;
  bool no_cancel = false;
  bool no_merge = false;
  bool refine_layout = false;
  std::string output;
  std::string layout;
};

std::size_t two_qubit_count(const Circuit& c) {
  std::size_t n = 0;
  for (const auto& g : c.gates()) {
    if (g.kind != GateKind::Measure && g.kind != GateKind::Barrier && g.qubits().size() == 2) ++n;
  }
  return n;
}

int cmd_compile(const EngineFlags& f, const CompileArgs& a) {
  const Circuit c = load_circuit(a.circuit);
  PipelineOptions popt;
  popt.decompose = !a.no_decompose;
  popt.cancel = !a.no_cancel;
  popt.merge = !a.no_merge;
  Circuit compiled = compile_circuit(c, popt);

  Json out;
  out["command"] = "compile";
  out["gates_in"] = c.size();
  Json layout;
  if (!a.coupling.empty() || !a.coupling_file.empty()) {
    CouplingGraph cg;
    try {
      cg = a.coupling_file.empty() ? CouplingGraph::parse(a.coupling)
                                   : CouplingGraph::parse_edge_list(io::read_file(a.coupling_file));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseError && e.code() != ErrorCode::InvalidCoupling) throw;
      throw Error(ErrorCode::ParseError, "--coupling: " + detail(e));
    }
    MappingOptions mopt;
    mopt.seed = f.seed;
    mopt.refine_initial_layout = a.refine_layout;
    auto mapped = map_circuit(compiled, cg, mopt);
    compiled = std::move(mapped.compiled);
    // Inserted SWAPs become three CNOTs on the same coupled pair.
    if (popt.decompose) compiled = pass_decompose(GateDag::build(compiled)).to_circuit();
    layout["initial"] = mapped.initial_layout;
    layout["final"] = mapped.final_layout;
    out["n_physical"] = cg.n_physical();
    out["swaps_inserted"] = mapped.swaps_inserted;
  }
  out["gates_out"] = compiled.size();
  out["two_qubit_gates"] = two_qubit_count(compiled);
  const Json circuit_json = io::circuit_to_json(compiled);
  out["circuit"] = circuit_json;
  if (!layout.is_null()) out["layout"] = layout;
  if (!a.output.empty()) io::write_file(a.output, circuit_json.dump(2) + "\n");
  if (!a.layout.empty()) {
    if (layout.is_null()) throw Error(ErrorCode::ParseError, "--layout requires --coupling or --coupling-file");
    io::write_file(a.layout, layout.dump(2) + "\n");
  }
  emit(out);
  return 0;
}

// -------------------------------------------------------------- bench ----

struct BenchArgs {
  std::string suite = "both";
  int min_qubits = 4;
  int max_qubits = 8;
  int gates_per_qubit = 10;
  int reps = 3;
  std::string csv;
  std::string emit_circuits;
  bool verify = false;
  bool quiet = false;
};

int cmd_bench(const EngineFlags& f, const BenchArgs& a) {
  bench::BenchSpec spec;
  if (a.suite == "both") {
    spec.suites = {bench::Suite::RandomComplex, bench::Suite::RandomSimple};
  } else {
    spec.suites = {bench::parse_suite(a.suite)};
  }
  spec.min_qubits = a.min_qubits;
  spec.max_qubits = a.max_qubits;
  spec.gates_per_qubit = a.gates_per_qubit;
  spec.repetitions = a.reps;
  spec.seed = f.seed;
  spec.threads = f.threads;
  spec.threshold_qubits = f.threshold_qubits;
  spec.precision = f.prec();
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, "bench: " + detail(e));
  }

  if (!a.emit_circuits.empty()) {
    std::filesystem::create_directories(a.emit_circuits);
    for (auto suite : spec.suites) {
      for (int n = spec.min_qubits; n <= std::min(spec.max_qubits, spec.qubit_cap); ++n) {
        const auto c = bench::generate(suite, n, spec.gates_per_qubit, bench::row_seed(spec.seed, n));
        const auto name = std::string(bench::to_string(suite)) + "_n" + std::to_string(n) + ".json";
        io::write_file(std::filesystem::path(a.emit_circuits) / name, io::circuit_to_json(c).dump(2) + "\n");
      }
    }
  }
  if (a.verify) {
    // Test mode: the decomposed suite must reproduce the source state.
    for (int n = spec.min_qubits; n <= std::min(spec.max_qubits, 6); ++n) {
      const auto s = bench::row_seed(spec.seed, n);
      const auto x = sv_run<double>(bench::random_complex(n, spec.gates_per_qubit, s)).to_double();
      const auto y = sv_run<double>(bench::random_simple(n, spec.gates_per_qubit, s)).to_double();
      const std::complex<double> overlap = x.dot(y);
      const double gap = (x * (overlap / std::abs(overlap)) - y).cwiseAbs().maxCoeff();
      if (!(gap <= 1e-10)) {
        throw Error(ErrorCode::InvalidTask, "RandomSimple differs from RandomComplex at n=" + std::to_string(n));
      }
      std::cerr << "verified n=" << n << " (max deviation " << gap << ")\n";
    }
  }
  const auto report = bench::run(spec);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  const std::string csv = bench::to_csv(report);
  if (a.csv.empty()) {
    std::cout << csv;
  } else {
    io::write_file(a.csv, csv);
  }
  if (!a.quiet) std::cerr << bench::render_table(report);
  return 0;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "qforge: " << e.what() << '\n';
    return e.code() == ErrorCode::ParseError ? kExitUsage : kExitEngine;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "qforge: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    std::cerr << "qforge: out of memory\n";
    return kExitEngine;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qforge: quantum circuit simulation, gradients, QAOA and compilation"};
  app.require_subcommand(1);
  // Top-level help lists every subcommand together with all of its flags.
  app.set_help_flag();
  app.set_help_all_flag("-h,--help", "Print every subcommand and flag, then exit");
  app.set_version_flag("--version", "qforge 0.1.0");

  EngineFlags run_f, sample_f, expval_f, grad_f, qaoa_f, compile_f, bench_f;

  RunArgs run_a;
  auto* run = app.add_subcommand("run", "Simulate a circuit and report probabilities");
  run->add_option("circuit", run_a.circuit, "Circuit JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--dump-state", run_a.dump, "Write the final state (QSV1, or QDM1 for --backend dm)");
  add_engine_flags(run, run_f);

  SampleArgs sample_a;
  auto* sample = app.add_subcommand("sample", "Sample measurement outcomes");
  sample->add_option("circuit", sample_a.circuit, "Circuit JSON file")->required()->check(CLI::ExistingFile);
  sample->add_option("--shots", sample_a.shots, "Number of shots")->check(CLI::PositiveNumber)->capture_default_str();
  sample->add_option("--qubits", sample_a.qubits, "Measured qubits (default: measure gates, else all)");
  add_engine_flags(sample, sample_f);

  ExpvalArgs expval_a;
  auto* expval = app.add_subcommand("expval", "Expectation values of Hamiltonians");
  expval->add_option("circuit", expval_a.circuit, "Circuit JSON file")->required()->check(CLI::ExistingFile);
  expval->add_option("hamiltonian", expval_a.hamiltonian, "Hamiltonian JSON file")->required()->check(CLI::ExistingFile);
  add_engine_flags(expval, expval_f);

  GradArgs grad_a;
  auto* grad = app.add_subcommand("grad", "Batched expectation values and gradients as CSV");
  grad->add_option("circuit", grad_a.circuit, "Circuit JSON file")->required()->check(CLI::ExistingFile);
  grad->add_option("hamiltonian", grad_a.hamiltonian, "Hamiltonian JSON file")->required()->check(CLI::ExistingFile);
  grad->add_option("batch", grad_a.batch, "Batch CSV (header: parameter names)")->required()->check(CLI::ExistingFile);
  grad->add_option("--method", grad_a.method, "Gradient method")
      ->check(CLI::IsMember({"adjoint", "shift", "fd"}))
      ->capture_default_str();
  grad->add_option("--fd-step", grad_a.fd_step, "Central-difference step")->capture_default_str();
  grad->add_option("--output", grad_a.output, "Write the CSV here and print a JSON summary");
  add_engine_flags(grad, grad_f, false);

  QaoaArgs qaoa_a;
  auto* qaoa = app.add_subcommand("qaoa", "Max-cut QAOA on an edge-list graph");
  qaoa->add_option("graph", qaoa_a.graph, "Edge list: 'u v [w]' per line")->required()->check(CLI::ExistingFile);
  qaoa->add_option("--p", qaoa_a.p, "Number of QAOA layers")->check(CLI::PositiveNumber)->capture_default_str();
  qaoa->add_option("--optimizer", qaoa_a.optimizer, "Optimizer")
      ->check(CLI::IsMember({"lbfgs", "adam", "gd"}))
      ->capture_default_str();
  qaoa->add_option("--iterations", qaoa_a.iterations, "Iteration budget")->check(CLI::NonNegativeNumber)->capture_default_str();
  qaoa->add_option("--learning-rate", qaoa_a.learning_rate, "Step size for gd and adam")->capture_default_str();
  qaoa->add_option("--init", qaoa_a.init, "Initial parameters")
      ->check(CLI::IsMember({"random", "zero"}))
      ->capture_default_str();
  qaoa->add_option("--shots", qaoa_a.shots, "Shots for the best-bitstring search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_engine_flags(qaoa, qaoa_f, false);

  CompileArgs compile_a;
  auto* compile = app.add_subcommand("compile", "Optimize, decompose and map a circuit");
  compile->add_option("circuit", compile_a.circuit, "Circuit JSON file")->required()->check(CLI::ExistingFile);
  auto* coupling = compile->add_option("--coupling", compile_a.coupling, "line:N, ring:N or grid:RxC");
  compile->add_option("--coupling-file", compile_a.coupling_file, "Edge list of the coupling graph")
      ->check(CLI::ExistingFile)
      ->excludes(coupling);
  compile->add_flag("--no-decompose", compile_a.no_decompose, "Skip basis decomposition");
  compile->add_flag("--no-cancel", compile_a.no_cancel, "Skip adjacent-inverse cancellation");
  compile->add_flag("--no-merge", compile_a.no_merge, "Skip rotation merging");
  compile->add_flag("--refine-layout", compile_a.refine_layout, "Choose the initial layout by a forward/reverse pass");
  compile->add_option("--output", compile_a.output, "Write the compiled circuit JSON");
  compile->add_option("--layout", compile_a.layout, "Write the layout JSON {initial, final}");
  add_engine_flags(compile, compile_f, false);

  BenchArgs bench_a;
  auto* bench_cmd = app.add_subcommand("bench", "Time random-circuit simulation");
  bench_cmd->add_option("--suite", bench_a.suite, "complex, simple or both")
      ->check(CLI::IsMember({"complex", "simple", "both"}))
      ->capture_default_str();
  bench_cmd->add_option("--min-qubits", bench_a.min_qubits, "Smallest register")->capture_default_str();
  bench_cmd->add_option("--max-qubits", bench_a.max_qubits, "Largest register")->capture_default_str();
  bench_cmd->add_option("--gates-per-qubit", bench_a.gates_per_qubit, "Layers of random gates")->capture_default_str();
  bench_cmd->add_option("--reps", bench_a.reps, "Repetitions per row")->capture_default_str();
  bench_cmd->add_option("--csv", bench_a.csv, "Write the CSV here instead of standard output");
  bench_cmd->add_option("--emit-circuits", bench_a.emit_circuits, "Directory for the generated circuit JSON files");
  bench_cmd->add_flag("--verify", bench_a.verify, "Check RandomSimple against RandomComplex for n <= 6");
  bench_cmd->add_flag("--quiet", bench_a.quiet, "Do not print the rendered table");
  add_engine_flags(bench_cmd, bench_f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  auto by_precision = [](const EngineFlags& f, auto&& single, auto&& dbl) {
    return f.prec() == Precision::Single ? single() : dbl();
  };

  if (*run) {
    return guarded([&] {
      emit(by_precision(run_f, [&] { return run_impl<float>(run_f, run_a); }, [&] { return run_impl<double>(run_f, run_a); }));
      return 0;
    });
  }
  if (*sample) {
    return guarded([&] {
      emit(by_precision(sample_f, [&] { return sample_impl<float>(sample_f, sample_a); },
                        [&] { return sample_impl<double>(sample_f, sample_a); }));
      return 0;
    });
  }
  if (*expval) {
    return guarded([&] {
      emit(by_precision(expval_f, [&] { return expval_impl<float>(expval_f, expval_a); },
                        [&] { return expval_impl<double>(expval_f, expval_a); }));
      return 0;
    });
  }
  if (*grad) return guarded([&] { return cmd_grad(grad_f, grad_a); });
  if (*qaoa) return guarded([&] { return cmd_qaoa(qaoa_f, qaoa_a); });
  if (*compile) return guarded([&] { return cmd_compile(compile_f, compile_a); });
  if (*bench_cmd) return guarded([&] { return cmd_bench(bench_f, bench_a); });
  return kExitUsage;
}
