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

#include "qforge/io.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

namespace qforge::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

void only_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(where + "." + key, "unknown field");
  }
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "not finite");
  return v;
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected integer");
  const auto v = j.get<std::int64_t>();
  if (v < 0 || v > 1'000'000) fail(where, "out of range");
  return static_cast<int>(v);
}

std::vector<int> int_list(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

const std::string& text(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected string");
  return j.get_ref<const std::string&>();
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) fail(rw, "expected square matrix row");
    for (Eigen::Index c = 0; c < n; ++c) {
      const std::string cw = rw + "[" + std::to_string(c) + "]";
      const Json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = number(e, cw);
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = {number(e[0], cw + "[0]"), number(e[1], cw + "[1]")};
      } else {
        fail(cw, "expected number or [re, im]");
      }
    }
  }
  return m;
}

Json channel_to_json(const KrausChannel& ch) {
  Json j;
  j["type"] = to_string(ch.kind());
  if (ch.kind() == ChannelKind::Custom) {
    j["kraus"] = Json::array();
    for (const auto& k : ch.operators()) j["kraus"].push_back(matrix_to_json(k.to_eigen()));
  } else {
    j["p"] = ch.parameter();
  }
  return j;
}

KrausChannel channel_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected object");
  only_keys(j, {"type", "p", "kraus"}, where);
  ChannelKind kind{};
  try {
    kind = parse_channel_kind(text(field(j, "type", where), where + ".type"));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidChannel) throw;
    fail(where + ".type", e.what());
  }
  if (kind == ChannelKind::Custom) {
    const Json& ops = field(j, "kraus", where);
    if (!ops.is_array() || ops.empty()) fail(where + ".kraus", "expected non-empty array");
    std::vector<Eigen::Matrix2cd> ks;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const std::string w = where + ".kraus[" + std::to_string(i) + "]";
      const auto m = matrix_from_json(ops[i], w);
      if (m.rows() != 2) fail(w, "Kraus operators must be 2x2");
      ks.emplace_back(m);
    }
    return KrausChannel::custom(ks);
  }
  return KrausChannel::make(kind, number(field(j, "p", where), where + ".p"));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::string_view b, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= std::uint64_t{static_cast<unsigned char>(b[at + i])} << (8 * i);
  return v;
}

template <typename C>
std::string encode(const char* magic, int n, Precision p, const C* data, std::size_t count) {
  std::string out(magic, 4);
  out.reserve(16 + count * 16);
  put_u32(out, static_cast<std::uint32_t>(n));
  put_u32(out, p == Precision::Single ? 0u : 1u);
  put_u32(out, 0u);
  for (std::size_t i = 0; i < count; ++i) {
    put_f64(out, static_cast<double>(data[i].real()));
    put_f64(out, static_cast<double>(data[i].imag()));
  }
  return out;
}

}  // namespace

Json expression_to_json(const ParameterExpression& e) {
  Json terms = Json::object();
  for (const auto& [name, coeff] : e.terms()) terms[name] = coeff;
  return Json{{"terms", std::move(terms)}, {"const", e.constant()}};
}

ParameterExpression expression_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return ParameterExpression(number(j, where));
  if (j.is_string()) {
    try {
      return ParameterExpression::parse(j.get<std::string>());
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }
  if (!j.is_object()) fail(where, "expected {\"terms\", \"const\"}");
  only_keys(j, {"terms", "const"}, where);
  std::map<std::string, double> terms;
  if (const auto it = j.find("terms"); it != j.end()) {
    if (!it->is_object()) fail(where + ".terms", "expected object");
    for (const auto& [name, coeff] : it->items()) {
      if (!is_valid_parameter_name(name)) fail(where + ".terms", "invalid parameter name '" + name + "'");
      terms[name] = number(coeff, where + ".terms." + name);
    }
  }
  double constant = 0.0;
  if (const auto it = j.find("const"); it != j.end()) constant = number(*it, where + ".const");
  return ParameterExpression::from_terms(std::move(terms), constant);
}

Json circuit_to_json(const Circuit& c) {
  Json gates = Json::array();
  for (const auto& g : c.gates()) {
    Json jg;
    jg["kind"] = to_string(g.kind);
    jg["targets"] = g.targets;
    jg["controls"] = g.controls;
    if (g.arg) jg["arg"] = expression_to_json(*g.arg);
    if (g.kind == GateKind::Custom) {
      jg["matrix"] = matrix_to_json(g.matrix);
      if (g.allow_non_unitary) jg["allow_non_unitary"] = true;
    }
    if (!g.label.empty()) jg["label"] = g.label;
    gates.push_back(std::move(jg));
  }
  return Json{{"n_qubits", c.n_qubits()}, {"gates", std::move(gates)}};
}

Circuit circuit_from_json(const Json& j) {
  if (!j.is_object()) fail("circuit", "expected object");
  only_keys(j, {"n_qubits", "gates"}, "circuit");
  const int n = integer(field(j, "n_qubits", "circuit"), "n_qubits");
  const Json& gates = field(j, "gates", "circuit");
  if (!gates.is_array()) fail("gates", "expected array");
  Circuit c(n);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string where = "gates[" + std::to_string(i) + "]";
    const Json& jg = gates[i];
    if (!jg.is_object()) fail(where, "expected object");
    only_keys(jg, {"kind", "targets", "controls", "arg", "matrix", "allow_non_unitary", "label"}, where);
    GateInstruction g;
    try {
      g.kind = parse_gate_kind(text(field(jg, "kind", where), where + ".kind"));
    } catch (const Error& e) {
      fail(where + ".kind", e.what());
    }
    g.targets = int_list(field(jg, "targets", where), where + ".targets");
    if (const auto it = jg.find("controls"); it != jg.end()) g.controls = int_list(*it, where + ".controls");
    // "cnot"/"cx" name X with its first qubit as control when no controls are listed.
    const std::string& kind_name = jg["kind"].get_ref<const std::string&>();
    if (g.controls.empty() && g.targets.size() == 2 && (kind_name == "cnot" || kind_name == "cx")) {
      g.controls = {g.targets[0]};
      g.targets = {g.targets[1]};
    }
    std::sort(g.controls.begin(), g.controls.end());
    if (is_parameterized(g.kind)) {
      g.arg = expression_from_json(field(jg, "arg", where), where + ".arg");
    } else if (jg.contains("arg")) {
      fail(where + ".arg", std::string("gate kind '") + to_string(g.kind) + "' takes no argument");
    }
    if (g.kind == GateKind::Custom) {
      g.matrix = matrix_from_json(field(jg, "matrix", where), where + ".matrix");
      if (const auto it = jg.find("allow_non_unitary"); it != jg.end()) {
        if (!it->is_boolean()) fail(where + ".allow_non_unitary", "expected boolean");
        g.allow_non_unitary = it->get<bool>();
      }
    } else if (jg.contains("matrix")) {
      fail(where + ".matrix", "only custom gates carry a matrix");
    }
    if (const auto it = jg.find("label"); it != jg.end()) g.label = text(*it, where + ".label");
    try {
      c.append(std::move(g));
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }
  return c;
}

Json hamiltonian_to_json(const PauliSum& h) {
  Json out = Json::array();
  for (const auto& [s, coeff] : h.terms()) {
    const auto v = PauliSum::value_of(coeff);
    out.push_back(Json{{"pauli", s.to_string()}, {"coeff_re", v.real()}, {"coeff_im", v.imag()}});
  }
  return out;
}

PauliSum hamiltonian_from_json(const Json& j) {
  if (!j.is_array()) fail("hamiltonian", "expected array of terms");
  PauliSum h;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "hamiltonian[" + std::to_string(i) + "]";
    const Json& t = j[i];
    if (!t.is_object()) fail(where, "expected object");
    only_keys(t, {"pauli", "coeff_re", "coeff_im"}, where);
    const std::string& spec = text(field(t, "pauli", where), where + ".pauli");
    PauliString s;
    try {
      s = PauliString::parse(spec);
    } catch (const Error& e) {
      fail(where + ".pauli", e.what());
    }
    const double re = number(field(t, "coeff_re", where), where + ".coeff_re");
    double im = 0.0;
    if (const auto it = t.find("coeff_im"); it != t.end()) im = number(*it, where + ".coeff_im");
    h.add_term(s, std::complex<double>(re, im));
  }
  return h;
}

Json noise_model_to_json(const NoiseModel& m) {
  Json j = Json::object();
  if (m.fallback) j["default"] = channel_to_json(*m.fallback);
  Json per = Json::object();
  for (const auto& [kind, ch] : m.per_kind) per[to_string(kind)] = channel_to_json(ch);
  j["per_kind"] = std::move(per);
  return j;
}

NoiseModel noise_model_from_json(const Json& j) {
  if (!j.is_object()) fail("noise", "expected object");
  only_keys(j, {"default", "per_kind"}, "noise");
  NoiseModel m;
  try {
    if (const auto it = j.find("default"); it != j.end() && !it->is_null()) m.fallback = channel_from_json(*it, "default");
    if (const auto it = j.find("per_kind"); it != j.end()) {
      if (!it->is_object()) fail("per_kind", "expected object");
      for (const auto& [name, ch] : it->items()) {
        GateKind kind{};
        try {
          kind = parse_gate_kind(name);
        } catch (const Error& e) {
          fail("per_kind." + name, e.what());
        }
        m.per_kind.insert_or_assign(kind, channel_from_json(ch, "per_kind." + name));
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, std::string("noise: ") + e.what());
  }
  return m;
}

Batch parse_batch_csv(std::string_view text_in) {
  Batch b;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  bool header = true;
  std::size_t pos = 0;
  while (pos <= text_in.size()) {
    const auto end = std::min(text_in.find('\n', pos), text_in.size());
    std::string_view line = text_in.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (end == text_in.size()) break;
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t s = 0;
    while (true) {
      const auto comma = line.find(',', s);
      auto cell = line.substr(s, comma == std::string_view::npos ? std::string_view::npos : comma - s);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
      cells.push_back(cell);
      if (comma == std::string_view::npos) break;
      s = comma + 1;
    }
    const std::string where = "batch line " + std::to_string(line_no);
    if (header) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        std::string name(cells[k]);
        if (!is_valid_parameter_name(name)) fail(where + " column " + std::to_string(k + 1), "invalid parameter name '" + name + "'");
        if (std::find(b.names.begin(), b.names.end(), name) != b.names.end()) {
          fail(where + " column " + std::to_string(k + 1), "duplicate parameter '" + name + "'");
        }
        b.names.push_back(std::move(name));
      }
      header = false;
    } else {
      if (cells.size() != b.names.size()) {
        fail(where, "expected " + std::to_string(b.names.size()) + " values, got " + std::to_string(cells.size()));
      }
      std::vector<double> row;
      for (std::size_t k = 0; k < cells.size(); ++k) {
        double v = 0.0;
        const char* first = cells[k].data();
        const char* last = first + cells[k].size();
        if (!cells[k].empty() && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
          fail(where + " column '" + b.names[k] + "'", "not a finite number: '" + std::string(cells[k]) + "'");
        }
        row.push_back(v);
      }
      rows.push_back(std::move(row));
    }
    if (end == text_in.size()) break;
  }
  if (header) fail("batch", "missing header row");
  b.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(b.names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < b.names.size(); ++k) b.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = rows[r][k];
  }
  return b;
}

std::string gradient_csv(const GradientResult& r, const std::vector<std::string>& names) {
  const Eigen::Index rows = r.values.rows();
  const Eigen::Index hams = r.values.cols();
  std::ostringstream out;
  out << "row";
  for (Eigen::Index h = 0; h < hams; ++h) out << ",value_h" << h;
  for (Eigen::Index h = 0; h < hams; ++h) {
    for (const auto& n : names) out << ",grad_h" << h << '_' << n;
  }
  out << '\n';
  for (Eigen::Index row = 0; row < rows; ++row) {
    out << row;
    for (Eigen::Index h = 0; h < hams; ++h) out << ',' << format_double(r.values(row, h));
    for (Eigen::Index h = 0; h < hams; ++h) {
      for (Eigen::Index p = 0; p < static_cast<Eigen::Index>(names.size()); ++p) out << ',' << format_double(r.grad(row, h, p));
    }
    out << '\n';
  }
  return out.str();
}

template <typename T>
std::string encode_state(const StateVector<T>& psi) {
  return encode("QSV1", psi.n_qubits(), precision_of<T>(), psi.data(), static_cast<std::size_t>(psi.dim()));
}

template <typename T>
std::string encode_density(const DensityMatrix<T>& rho) {
  const auto d = static_cast<std::size_t>(rho.dim());
  return encode("QDM1", rho.n_qubits(), precision_of<T>(), rho.data(), d * d);
}

template std::string encode_state(const StateVector<float>&);
template std::string encode_state(const StateVector<double>&);
template std::string encode_density(const DensityMatrix<float>&);
template std::string encode_density(const DensityMatrix<double>&);

Dump decode_dump(std::string_view bytes) {
  if (bytes.size() < 16) fail("dump", "shorter than the 16-byte header");
  Dump d;
  d.magic = std::string(bytes.substr(0, 4));
  if (d.magic != "QSV1" && d.magic != "QDM1") fail("dump.magic", "unknown magic '" + d.magic + "'");
  const auto n = get_le(bytes, 4, 4);
  const auto prec = get_le(bytes, 8, 4);
  if (n > 30 || (d.magic == "QDM1" && n > 15)) fail("dump.n_qubits", "too large");
  if (prec > 1) fail("dump.precision", "expected 0 or 1");
  d.n_qubits = static_cast<int>(n);
  d.precision = prec == 0 ? Precision::Single : Precision::Double;
  const std::size_t count = std::size_t{1} << (d.magic == "QSV1" ? n : 2 * n);
  if (bytes.size() != 16 + count * 16) fail("dump", "payload size does not match the header");
  d.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    d.values[i] = {std::bit_cast<double>(get_le(bytes, 16 + 16 * i, 8)), std::bit_cast<double>(get_le(bytes, 24 + 16 * i, 8))};
  }
  return d;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::ParseError, path.string() + ": cannot open for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::ParseError, path.string() + ": write failed");
}

Json parse_json(std::string_view text_in, const std::string& what) {
  try {
    return Json::parse(text_in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(what, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace qforge::io
