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

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <set>
#include <sstream>

#include "qforge/compile.hpp"

namespace qforge {

CouplingGraph::CouplingGraph(int n_physical, std::vector<std::pair<int, int>> edges) : n_(n_physical) {
  if (n_physical < 1) throw Error(ErrorCode::InvalidCoupling, "coupling graph needs at least one qubit");
  adj_.assign(static_cast<std::size_t>(n_), {});
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) {
      throw Error(ErrorCode::InvalidCoupling, "edge (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
    }
    if (a == b) throw Error(ErrorCode::InvalidCoupling, "self-loop on qubit " + std::to_string(a));
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) continue;
    edges_.emplace_back(std::min(a, b), std::max(a, b));
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  std::sort(edges_.begin(), edges_.end());

  dist_.assign(static_cast<std::size_t>(n_ * n_), -1);
  for (int s = 0; s < n_; ++s) {
    std::deque<int> queue{s};
    dist_[static_cast<std::size_t>(s * n_ + s)] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj_[static_cast<std::size_t>(u)]) {
        auto& d = dist_[static_cast<std::size_t>(s * n_ + v)];
        if (d < 0) {
          d = dist_[static_cast<std::size_t>(s * n_ + u)] + 1;
          queue.push_back(v);
        }
      }
    }
  }
}

CouplingGraph CouplingGraph::line(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return CouplingGraph(n, e);
}

CouplingGraph CouplingGraph::ring(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  if (n > 2) e.emplace_back(n - 1, 0);
  return CouplingGraph(n, e);
}

CouplingGraph CouplingGraph::grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::InvalidCoupling, "grid dimensions must be positive");
  std::vector<std::pair<int, int>> e;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int q = r * cols + c;
      if (c + 1 < cols) e.emplace_back(q, q + 1);
      if (r + 1 < rows) e.emplace_back(q, q + cols);
    }
  }
  return CouplingGraph(rows * cols, e);
}

namespace {

int parse_positive(std::string_view s, std::string_view what) {
  int v = 0;
  try {
    std::size_t used = 0;
    v = std::stoi(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "malformed " + std::string(what) + " '" + std::string(s) + "'");
  }
  if (v < 1) throw Error(ErrorCode::InvalidCoupling, std::string(what) + " must be positive");
  return v;
}

}  // namespace

CouplingGraph CouplingGraph::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::ParseError, "coupling spec must be line:N, ring:N or grid:RxC");
  }
  const auto kind = spec.substr(0, colon);
  const auto arg = spec.substr(colon + 1);
  if (kind == "line") return line(parse_positive(arg, "line size"));
  if (kind == "ring") return ring(parse_positive(arg, "ring size"));
  if (kind == "grid") {
    const auto x = arg.find_first_of("xX");
    if (x == std::string_view::npos) throw Error(ErrorCode::ParseError, "grid spec must be grid:RxC");
    return grid(parse_positive(arg.substr(0, x), "grid rows"), parse_positive(arg.substr(x + 1), "grid columns"));
  }
  throw Error(ErrorCode::ParseError, "unknown coupling kind '" + std::string(kind) + "'");
}

CouplingGraph CouplingGraph::parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int max_q = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw Error(ErrorCode::ParseError, "coupling line " + std::to_string(line_no) + ": expected 'a b'");
    int a = 0, b = 0;
    try {
      std::size_t ua = 0, ub = 0;
      a = std::stoi(tok[0], &ua);
      b = std::stoi(tok[1], &ub);
      if (ua != tok[0].size() || ub != tok[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "coupling line " + std::to_string(line_no) + ": malformed index");
    }
    max_q = std::max({max_q, a, b});
    edges.emplace_back(a, b);
  }
  if (edges.empty()) throw Error(ErrorCode::InvalidCoupling, "coupling file has no edges");
  return CouplingGraph(max_q + 1, std::move(edges));
}

bool CouplingGraph::adjacent(int a, int b) const {
  const auto& nb = adj_[static_cast<std::size_t>(a)];
  return std::binary_search(nb.begin(), nb.end(), b);
}

bool CouplingGraph::is_connected() const {
  for (int v = 0; v < n_; ++v) {
    if (distance(0, v) < 0) return false;
  }
  return true;
}

bool respects_coupling(const Circuit& c, const CouplingGraph& cg) {
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Barrier || g.kind == GateKind::Measure) continue;
    const auto q = g.qubits();
    if (q.size() > 2) return false;
    if (q.size() == 2 && !cg.adjacent(q[0], q[1])) return false;
  }
  return true;
}

namespace {

bool is_interaction(const GateInstruction& g) {
  return g.kind != GateKind::Barrier && g.kind != GateKind::Measure && g.qubits().size() == 2;
}

struct Router {
  const GateDag& dag;
  const CouplingGraph& cg;
  const MappingOptions& opt;
  std::vector<int> l2p;
  std::vector<int> p2l;
  std::mt19937_64 rng;
  Circuit out;
  int swaps = 0;

  Router(const GateDag& d, const CouplingGraph& c, const MappingOptions& o, std::vector<int> layout)
      : dag(d), cg(c), opt(o), l2p(std::move(layout)), p2l(l2p.size()), rng(o.seed), out(c.n_physical()) {
    for (std::size_t l = 0; l < l2p.size(); ++l) p2l[static_cast<std::size_t>(l2p[l])] = static_cast<int>(l);
  }

  int phys(int l) const { return l2p[static_cast<std::size_t>(l)]; }

  int gate_distance(const GateInstruction& g) const {
    const auto q = g.qubits();
    return cg.distance(phys(q[0]), phys(q[1]));
  }

  bool executable(const GateInstruction& g) const { return !is_interaction(g) || gate_distance(g) == 1; }

  void emit(const GateInstruction& g) {
    GateInstruction m = g;
    for (auto& t : m.targets) t = phys(t);
    for (auto& c : m.controls) c = phys(c);
    std::sort(m.controls.begin(), m.controls.end());
    if (m.kind == GateKind::Barrier && m.targets.empty()) {
      for (int p = 0; p < cg.n_physical(); ++p) m.targets.push_back(p);
    }
    out.append(std::move(m));
  }

  void swap(int pa, int pb) {
    out.append(gates::swap(pa, pb));
    ++swaps;
    const int la = p2l[static_cast<std::size_t>(pa)], lb = p2l[static_cast<std::size_t>(pb)];
    std::swap(p2l[static_cast<std::size_t>(pa)], p2l[static_cast<std::size_t>(pb)]);
    l2p[static_cast<std::size_t>(la)] = pb;
    l2p[static_cast<std::size_t>(lb)] = pa;
  }

  // Up to `limit` interaction gates reachable from the front, nearest first.
  std::vector<std::size_t> extended_set(const std::vector<std::size_t>& front,
                                        const std::vector<std::size_t>& indeg) const {
    std::vector<std::size_t> ext;
    std::vector<std::size_t> deg = indeg;
    std::deque<std::size_t> queue(front.begin(), front.end());
    while (!queue.empty() && static_cast<int>(ext.size()) < opt.extended_set_size) {
      const auto i = queue.front();
      queue.pop_front();
      for (auto j : dag.successors()[i]) {
        if (--deg[j] != 0) continue;
        if (is_interaction(dag.nodes()[j])) ext.push_back(j);
        if (static_cast<int>(ext.size()) >= opt.extended_set_size) break;
        queue.push_back(j);
      }
    }
    return ext;
  }

  double score(const std::vector<std::size_t>& front, const std::vector<std::size_t>& ext) const {
    double f = 0.0, e = 0.0;
    for (auto i : front) f += gate_distance(dag.nodes()[i]);
    f /= static_cast<double>(front.size());
    if (!ext.empty()) {
      for (auto i : ext) e += gate_distance(dag.nodes()[i]);
      e /= static_cast<double>(ext.size());
    }
    return f + opt.lookahead_weight * e;
  }

  // Walk the first blocked gate's qubits together along a shortest path.
  void route_directly(const GateInstruction& g) {
    const auto q = g.qubits();
    while (gate_distance(g) > 1) {
      const int pa = phys(q[0]), pb = phys(q[1]);
      for (int nb : cg.neighbours(pa)) {
        if (cg.distance(nb, pb) == cg.distance(pa, pb) - 1) {
          swap(pa, nb);
          break;
        }
      }
    }
  }

  void run() {
    const std::size_t n = dag.size();
    std::vector<std::size_t> indeg(n);
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < n; ++i) {
      indeg[i] = dag.predecessors()[i].size();
      if (indeg[i] == 0) front.push_back(i);
    }
    std::vector<double> penalty(static_cast<std::size_t>(cg.n_physical()), 1.0);
    int stalled = 0;
    const int stall_limit = 4 * cg.n_physical() + 16;

    while (!front.empty()) {
      bool progress = true;
      while (progress) {
        progress = false;
        std::sort(front.begin(), front.end());
        std::vector<std::size_t> next;
        for (auto i : front) {
          if (executable(dag.nodes()[i])) {
            emit(dag.nodes()[i]);
            progress = true;
            for (auto j : dag.successors()[i]) {
              if (--indeg[j] == 0) next.push_back(j);
            }
          } else {
            next.push_back(i);
          }
        }
        front = std::move(next);
        if (progress) {
          std::fill(penalty.begin(), penalty.end(), 1.0);
          stalled = 0;
        }
      }
      if (front.empty()) break;

      if (++stalled > stall_limit) {
        route_directly(dag.nodes()[front.front()]);
        stalled = 0;
        continue;
      }

      std::set<std::pair<int, int>> candidates;
      for (auto i : front) {
        for (int l : dag.nodes()[i].qubits()) {
          const int p = phys(l);
          for (int nb : cg.neighbours(p)) candidates.emplace(std::min(p, nb), std::max(p, nb));
        }
      }
      const auto ext = extended_set(front, indeg);
      double best = std::numeric_limits<double>::infinity();
      std::vector<std::pair<int, int>> ties;
      for (auto [a, b] : candidates) {
        swap_layout(a, b);
        const double s = std::max(penalty[static_cast<std::size_t>(a)], penalty[static_cast<std::size_t>(b)]) *
                         score(front, ext);
        swap_layout(a, b);
        if (s < best - 1e-12) {
          best = s;
          ties.assign(1, {a, b});
        } else if (std::abs(s - best) <= 1e-12) {
          ties.emplace_back(a, b);
        }
      }
      const auto pick = ties[ties.size() == 1 ? 0 : std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
      swap(pick.first, pick.second);
      penalty[static_cast<std::size_t>(pick.first)] /= opt.decay;
      penalty[static_cast<std::size_t>(pick.second)] /= opt.decay;
    }
  }

  void swap_layout(int pa, int pb) {
    const int la = p2l[static_cast<std::size_t>(pa)], lb = p2l[static_cast<std::size_t>(pb)];
    std::swap(p2l[static_cast<std::size_t>(pa)], p2l[static_cast<std::size_t>(pb)]);
    l2p[static_cast<std::size_t>(la)] = pb;
    l2p[static_cast<std::size_t>(lb)] = pa;
  }
};

std::vector<int> identity_layout(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

}  // namespace

MappingResult map_circuit(const Circuit& c, const CouplingGraph& cg, const MappingOptions& opt) {
  if (c.n_qubits() > cg.n_physical()) {
    throw Error(ErrorCode::TooManyLogicalQubits, std::to_string(c.n_qubits()) + " logical qubits on " +
                                                     std::to_string(cg.n_physical()) + " physical");
  }
  if (!cg.is_connected()) throw Error(ErrorCode::InvalidCoupling, "coupling graph is not connected");
  if (!(opt.decay > 0.0 && opt.decay <= 1.0)) throw Error(ErrorCode::InvalidCoupling, "decay must lie in (0, 1]");
  for (const auto& g : c.gates()) {
    if (g.kind != GateKind::Barrier && g.kind != GateKind::Measure && g.qubits().size() > 2) {
      throw Error(ErrorCode::InvalidGate, std::string(to_string(g.kind)) +
                                              " touches more than two qubits; decompose before mapping");
    }
  }
  // Widen to the physical register so idle physical qubits carry logical ids.
  Circuit wide(cg.n_physical());
  for (const auto& g : c.gates()) wide.append(g);
  const auto dag = GateDag::build(wide);

  auto layout = identity_layout(cg.n_physical());
  if (opt.refine_initial_layout) {
    Router forward(dag, cg, opt, layout);
    forward.run();
    Circuit reversed(cg.n_physical());
    for (auto it = wide.gates().rbegin(); it != wide.gates().rend(); ++it) reversed.append(*it);
    const auto rdag = GateDag::build(reversed);
    Router backward(rdag, cg, opt, forward.l2p);
    backward.run();
    layout = backward.l2p;
  }

  Router router(dag, cg, opt, layout);
  router.run();
  MappingResult res;
  res.compiled = std::move(router.out);
  res.initial_layout = layout;
  res.final_layout = router.l2p;
  res.swaps_inserted = router.swaps;
  return res;
}

}  // namespace qforge
