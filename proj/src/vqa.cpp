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

#include "qforge/vqa.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <set>
#include <sstream>

namespace qforge {

Graph::Graph(int n_nodes, std::vector<Edge> edges) : n_nodes_(n_nodes), edges_(std::move(edges)) {
  if (n_nodes < 1) throw Error(ErrorCode::InvalidGraph, "graph needs at least one node");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n_nodes || e.v >= n_nodes) {
      throw Error(ErrorCode::InvalidGraph, "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") out of range");
    }
    if (e.u == e.v) throw Error(ErrorCode::InvalidGraph, "self-loop on node " + std::to_string(e.u));
    if (!std::isfinite(e.w)) throw Error(ErrorCode::InvalidGraph, "non-finite edge weight");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw Error(ErrorCode::InvalidGraph, "duplicate edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
    }
  }
}

Graph Graph::parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Edge> edges;
  int max_node = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 2 || tok.size() > 3) {
      throw Error(ErrorCode::ParseError, "graph line " + std::to_string(line_no) + ": expected 'u v [w]'");
    }
    Edge e;
    try {
      std::size_t used = 0;
      e.u = std::stoi(tok[0], &used);
      if (used != tok[0].size()) throw std::invalid_argument("u");
      e.v = std::stoi(tok[1], &used);
      if (used != tok[1].size()) throw std::invalid_argument("v");
      if (tok.size() == 3) {
        e.w = std::stod(tok[2], &used);
        if (used != tok[2].size()) throw std::invalid_argument("w");
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "graph line " + std::to_string(line_no) + ": malformed number");
    }
    if (e.u < 0 || e.v < 0) throw Error(ErrorCode::InvalidGraph, "negative node index on line " + std::to_string(line_no));
    max_node = std::max({max_node, e.u, e.v});
    edges.push_back(e);
  }
  if (edges.empty()) throw Error(ErrorCode::InvalidGraph, "graph has no edges");
  return Graph(max_node + 1, std::move(edges));
}

Graph Graph::complete(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  }
  return Graph(n, std::move(edges));
}

Graph Graph::cycle(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) edges.push_back({u, (u + 1) % n, 1.0});
  return Graph(n, std::move(edges));
}

double Graph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.w;
  return s;
}

double Graph::cut_value(std::uint64_t assignment) const {
  double s = 0.0;
  for (const auto& e : edges_) {
    if (((assignment >> e.u) ^ (assignment >> e.v)) & 1U) s += e.w;
  }
  return s;
}

double Graph::cut_value(std::string_view bits) const {
  if (static_cast<int>(bits.size()) != n_nodes_) {
    throw Error(ErrorCode::InvalidGraph, "bitstring length does not match node count");
  }
  std::uint64_t a = 0;
  for (int u = 0; u < n_nodes_; ++u) {
    const char c = bits[bits.size() - 1 - static_cast<std::size_t>(u)];
    if (c != '0' && c != '1') throw Error(ErrorCode::ParseError, "bitstring must contain only 0 and 1");
    if (c == '1') a |= std::uint64_t{1} << u;
  }
  return cut_value(a);
}

BruteForceCut max_cut_brute_force(const Graph& g) {
  if (g.n_nodes() > 30) throw Error(ErrorCode::InvalidGraph, "brute force limited to 30 nodes");
  BruteForceCut best;
  const std::uint64_t count = std::uint64_t{1} << g.n_nodes();
  for (std::uint64_t a = 0; a < count; ++a) {
    const double v = g.cut_value(a);
    if (v > best.value) best = {v, a};
  }
  return best;
}

PauliSum maxcut_hamiltonian(const Graph& g) {
  PauliSum h;
  for (const auto& e : g.edges()) {
    h += PauliSum::parse_term("Z" + std::to_string(e.u) + " Z" + std::to_string(e.v), 0.5 * e.w);
    h += PauliSum::identity(-0.5 * e.w);
  }
  return h;
}

Circuit qaoa_circuit(const Graph& g, int p) {
  if (p < 1) throw Error(ErrorCode::InvalidTask, "QAOA depth p must be at least 1");
  Circuit c(g.n_nodes());
  for (int q = 0; q < g.n_nodes(); ++q) c.append(gates::h(q));
  for (int k = 0; k < p; ++k) {
    const auto gamma = ParameterExpression::parameter("g" + std::to_string(k));
    const auto beta = ParameterExpression::parameter("b" + std::to_string(k));
    for (const auto& e : g.edges()) c.append(gates::rzz(e.u, e.v, e.w * gamma));
    for (int q = 0; q < g.n_nodes(); ++q) c.append(gates::rx(q, 2.0 * beta));
  }
  return c;
}

Circuit hardware_efficient(int n, int layers, const std::vector<GateKind>& rotations, GateKind entangler) {
  if (n < 1 || layers < 1) throw Error(ErrorCode::InvalidTask, "ansatz needs n >= 1 and layers >= 1");
  if (rotations.empty()) throw Error(ErrorCode::InvalidTask, "ansatz needs at least one rotation kind");
  for (GateKind k : rotations) {
    if (k != GateKind::RX && k != GateKind::RY && k != GateKind::RZ) {
      throw Error(ErrorCode::InvalidGate, std::string("ansatz rotation must be rx, ry or rz, got ") + to_string(k));
    }
  }
  if (entangler != GateKind::X && entangler != GateKind::Rzz) {
    throw Error(ErrorCode::InvalidGate, "ansatz entangler must be cnot or rzz");
  }
  Circuit c(n);
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n; ++q) {
      for (std::size_t k = 0; k < rotations.size(); ++k) {
        const auto name = "p" + std::to_string(l) + "_" + std::to_string(q) + "_" + std::to_string(k);
        c.append(gates::make(rotations[k], {q}, {}, ParameterExpression::parameter(name)));
      }
    }
    for (int q = 0; q + 1 < n; ++q) {
      c.append(entangler == GateKind::X ? gates::cnot(q, q + 1) : gates::rzz(q, q + 1, kPi / 2));
    }
  }
  return c;
}

const char* to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::GradientDescent:
      return "gd";
    case OptimizerKind::Adam:
      return "adam";
    case OptimizerKind::LBFGS:
      return "lbfgs";
  }
  return "?";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "gd" || s == "gradient_descent" || s == "sgd") return OptimizerKind::GradientDescent;
  if (s == "adam") return OptimizerKind::Adam;
  if (s == "lbfgs" || s == "l-bfgs") return OptimizerKind::LBFGS;
  throw Error(ErrorCode::ParseError, "unknown optimizer '" + std::string(name) + "'");
}

namespace {

class Objective {
 public:
  Objective(const Circuit& c, const PauliSum& h, const GradientOptions& opt)
      : task_(GradientTask::make(c, {h}, Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(c.parameters().size())))),
        opt_(opt) {
    task_.validate();
  }

  const std::vector<std::string>& names() const { return task_.param_names; }
  std::uint64_t evaluations() const { return evaluations_; }

  double value(const Eigen::VectorXd& x) {
    ++evaluations_;
    check_point(x);
    task_.batch.row(0) = x.transpose();
    const auto env = task_.row_env(0);
    const double v = opt_.precision == Precision::Single
                         ? sv_expectation(task_.hams[0], sv_run<float>(task_.circuit, env, std::nullopt, opt_.engine))
                         : sv_expectation(task_.hams[0], sv_run<double>(task_.circuit, env, std::nullopt, opt_.engine));
    return check(v);
  }

  double value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    ++evaluations_;
    check_point(x);
    task_.batch.row(0) = x.transpose();
    const auto r = adjoint_gradient(task_, opt_);
    grad = r.grads[0].row(0).transpose();
    if (!grad.allFinite()) throw Error(ErrorCode::DivergedObjective, "non-finite gradient");
    return check(r.values(0, 0));
  }

 private:
  static void check_point(const Eigen::VectorXd& x) {
    if (!x.allFinite()) throw Error(ErrorCode::DivergedObjective, "optimizer produced non-finite parameters");
  }

  static double check(double v) {
    if (!std::isfinite(v)) throw Error(ErrorCode::DivergedObjective, "objective evaluated to a non-finite value");
    return v;
  }

  GradientTask task_;
  GradientOptions opt_;
  std::uint64_t evaluations_ = 0;
};

struct Recorder {
  OptimizeResult& res;

  void record(const Eigen::VectorXd& x, double f) {
    if (res.values.empty() || f < res.best_value) {
      res.best_value = f;
      res.best_params = x;
    }
    res.values.push_back(f);
    res.trace.push_back(res.best_value);
  }
};

void run_gradient_descent(Objective& obj, Eigen::VectorXd x, const OptimizerConfig& cfg, Recorder& rec) {
  Eigen::VectorXd g;
  double f = obj.value_and_gradient(x, g);
  rec.record(x, f);
  for (int it = 0; it < cfg.iterations; ++it) {
    if (g.size() == 0 || g.lpNorm<Eigen::Infinity>() < cfg.gradient_tolerance) {
      rec.res.converged = true;
      break;
    }
    x -= cfg.learning_rate * g;
    f = obj.value_and_gradient(x, g);
    rec.record(x, f);
    ++rec.res.iterations;
  }
}

void run_adam(Objective& obj, Eigen::VectorXd x, const OptimizerConfig& cfg, Recorder& rec) {
  Eigen::VectorXd g;
  double f = obj.value_and_gradient(x, g);
  rec.record(x, f);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(x.size());
  double b1t = 1.0, b2t = 1.0;
  for (int it = 0; it < cfg.iterations; ++it) {
    if (g.size() == 0 || g.lpNorm<Eigen::Infinity>() < cfg.gradient_tolerance) {
      rec.res.converged = true;
      break;
    }
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    m = cfg.beta1 * m + (1 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1 - cfg.beta2) * g.cwiseAbs2();
    const Eigen::VectorXd mhat = m / (1 - b1t);
    const Eigen::VectorXd vhat = v / (1 - b2t);
    x -= cfg.learning_rate * (mhat.array() / (vhat.array().sqrt() + cfg.epsilon)).matrix();
    f = obj.value_and_gradient(x, g);
    rec.record(x, f);
    ++rec.res.iterations;
  }
}

// Two-loop recursion with backtracking Armijo steps. Curvature pairs with
// s.y <= 0 are dropped; a non-descent direction resets the memory.
void run_lbfgs(Objective& obj, Eigen::VectorXd x, const OptimizerConfig& cfg, Recorder& rec) {
  if (cfg.memory < 1) throw Error(ErrorCode::InvalidTask, "L-BFGS memory must be at least 1");
  Eigen::VectorXd g;
  double f = obj.value_and_gradient(x, g);
  rec.record(x, f);
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha(static_cast<std::size_t>(cfg.memory));

  for (int it = 0; it < cfg.iterations; ++it) {
    if (g.size() == 0 || g.lpNorm<Eigen::Infinity>() < cfg.gradient_tolerance) {
      rec.res.converged = true;
      break;
    }
    Eigen::VectorXd d = -g;
    const std::size_t m = s_hist.size();
    for (std::size_t i = m; i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(d);
      d -= alpha[i] * y_hist[i];
    }
    if (m > 0) d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < m; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(d);
      d += (alpha[i] - beta) * s_hist[i];
    }
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt, step *= 0.5) {
      x_new = x + step * d;
      if (obj.value(x_new) <= f + cfg.armijo_c1 * step * slope) {
        accepted = true;
        break;
      }
    }
    ++rec.res.iterations;
    if (!accepted) {
      // No decrease along the steepest direction either: stationary to
      // working precision.
      if (s_hist.empty()) {
        rec.record(x, f);
        rec.res.converged = true;
        break;
      }
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      rec.record(x, f);
      continue;
    }

    Eigen::VectorXd g_new;
    const double f_new = obj.value_and_gradient(x_new, g_new);
    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (static_cast<int>(s_hist.size()) == cfg.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    rec.record(x, f);
  }
}

}  // namespace

OptimizeResult optimize(const Circuit& circuit, const PauliSum& h, const Eigen::VectorXd& start,
                        const OptimizerConfig& cfg, const GradientOptions& grad) {
  if (cfg.iterations < 0) throw Error(ErrorCode::InvalidTask, "iteration budget must be non-negative");
  if (!(cfg.learning_rate > 0.0)) throw Error(ErrorCode::InvalidTask, "learning rate must be positive");
  Objective obj(circuit, h, grad);
  if (start.size() != static_cast<Eigen::Index>(obj.names().size())) {
    throw Error(ErrorCode::InvalidTask, "start has " + std::to_string(start.size()) + " entries, circuit has " +
                                            std::to_string(obj.names().size()) + " parameters");
  }
  if (!start.allFinite()) throw Error(ErrorCode::NonFinite, "start parameters must be finite");
  OptimizeResult res;
  res.names = obj.names();
  Recorder rec{res};
  switch (cfg.kind) {
    case OptimizerKind::GradientDescent:
      run_gradient_descent(obj, start, cfg, rec);
      break;
    case OptimizerKind::Adam:
      run_adam(obj, start, cfg, rec);
      break;
    case OptimizerKind::LBFGS:
      run_lbfgs(obj, start, cfg, rec);
      break;
  }
  res.evaluations = obj.evaluations();
  return res;
}

Eigen::VectorXd random_start(std::size_t n_params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  Eigen::VectorXd x(static_cast<Eigen::Index>(n_params));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u(rng);
  return x;
}

OptimizeResult optimize(const Circuit& circuit, const PauliSum& h, std::uint64_t seed, const OptimizerConfig& cfg,
                        const GradientOptions& grad) {
  return optimize(circuit, h, random_start(circuit.parameters().size(), seed), cfg, grad);
}

}  // namespace qforge
