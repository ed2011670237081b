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

#include "qforge/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

namespace qforge {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::InvalidExpression: return "InvalidExpression";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::OverlappingTargetControl: return "OverlappingTargetControl";
    case ErrorCode::InvalidGate: return "InvalidGate";
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::MidCircuitMeasure: return "MidCircuitMeasure";
    case ErrorCode::ParameterizedProduct: return "ParameterizedProduct";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::UnboundCoefficient: return "UnboundCoefficient";
    case ErrorCode::QubitCapExceeded: return "QubitCapExceeded";
    case ErrorCode::IncompleteChannel: return "IncompleteChannel";
    case ErrorCode::InvalidChannel: return "InvalidChannel";
    case ErrorCode::ZeroNormBranch: return "ZeroNormBranch";
    case ErrorCode::NonDifferentiableGate: return "NonDifferentiableGate";
    case ErrorCode::UnsupportedGateForShift: return "UnsupportedGateForShift";
    case ErrorCode::InvalidTask: return "InvalidTask";
    case ErrorCode::DivergedObjective: return "DivergedObjective";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::UnsupportedDecomposition: return "UnsupportedDecomposition";
    case ErrorCode::TooManyLogicalQubits: return "TooManyLogicalQubits";
    case ErrorCode::InvalidCoupling: return "InvalidCoupling";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

const char* to_string(Precision p) { return p == Precision::Single ? "single" : "double"; }

Precision parse_precision(const std::string& s) {
  if (s == "single" || s == "float" || s == "f32") return Precision::Single;
  if (s == "double" || s == "f64") return Precision::Double;
  throw Error(ErrorCode::ParseError, "unknown precision '" + s + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool is_valid_parameter_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

ParameterExpression::ParameterExpression(double constant) : constant_(constant == 0.0 ? 0.0 : constant) {
  if (!std::isfinite(constant)) throw Error(ErrorCode::NonFinite, "non-finite constant");
}

ParameterExpression ParameterExpression::parameter(const std::string& name, double coeff) {
  return from_terms({{name, coeff}}, 0.0);
}

ParameterExpression ParameterExpression::from_terms(std::map<std::string, double> terms, double constant) {
  ParameterExpression e(constant);
  for (const auto& [name, c] : terms) {
    if (!is_valid_parameter_name(name)) {
      throw Error(ErrorCode::InvalidExpression, "invalid parameter name '" + name + "'");
    }
    if (!std::isfinite(c)) throw Error(ErrorCode::NonFinite, "non-finite coefficient for '" + name + "'");
  }
  e.terms_ = std::move(terms);
  e.prune();
  return e;
}

double ParameterExpression::coefficient(const std::string& name) const {
  auto it = terms_.find(name);
  return it == terms_.end() ? 0.0 : it->second;
}

void ParameterExpression::prune() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
}

double ParameterExpression::eval(const ParamMap& env) const {
  double acc = 0.0;
  for (const auto& [name, c] : terms_) {
    auto it = env.find(name);
    if (it == env.end()) throw Error(ErrorCode::MissingParameter, name);
    acc += c * it->second;
  }
  return acc + constant_;
}

std::string ParameterExpression::render() const {
  if (terms_.empty()) return format_double(constant_);
  std::string out;
  bool first = true;
  auto emit = [&](double v, const std::string& suffix) {
    if (first) {
      out += format_double(v);
    } else if (std::signbit(v)) {
      out += " - " + format_double(-v);
    } else {
      out += " + " + format_double(v);
    }
    out += suffix;
    first = false;
  };
  for (const auto& [name, c] : terms_) emit(c, "*" + name);
  if (constant_ != 0.0) emit(constant_, "");
  return out;
}

namespace {

bool is_name_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '*' && c != '+' && c != '-';
}

}  // namespace

// Grammar: term (('+'|'-') term)*, term := [sign] (number | name | number '*' name).
ParameterExpression ParameterExpression::parse(std::string_view text) {
  auto fail = [&](const std::string& why) -> ParameterExpression {
    throw Error(ErrorCode::InvalidExpression, why + " in '" + std::string(text) + "'");
  };
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  std::map<std::string, double> terms;
  double constant = 0.0;
  bool expect_term = true;
  double sign = 1.0;
  skip_ws();
  if (pos == text.size()) return fail("empty expression");
  while (pos < text.size()) {
    skip_ws();
    if (pos >= text.size()) break;
    if (!expect_term) {
      if (text[pos] == '+') sign = 1.0;
      else if (text[pos] == '-') sign = -1.0;
      else return fail("expected '+' or '-'");
      ++pos;
      expect_term = true;
      continue;
    }
    if (text[pos] == '-' || text[pos] == '+') {
      if (text[pos] == '-') sign = -sign;
      ++pos;
      continue;
    }
    double value = 1.0;
    bool have_number = false;
    if (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.') {
      const char* begin = text.data() + pos;
      auto res = std::from_chars(begin, text.data() + text.size(), value);
      if (res.ec != std::errc()) return fail("bad number");
      pos += static_cast<std::size_t>(res.ptr - begin);
      have_number = true;
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip_ws();
      } else {
        constant += sign * value;
        sign = 1.0;
        expect_term = false;
        continue;
      }
    }
    std::size_t start = pos;
    while (pos < text.size() && is_name_char(text[pos])) ++pos;
    if (pos == start) return fail(have_number ? "expected parameter name after '*'" : "expected term");
    std::string name(text.substr(start, pos - start));
    skip_ws();
    if (pos < text.size() && text[pos] == '*') return fail("product of parameters is not linear");
    terms[name] += sign * value;
    sign = 1.0;
    expect_term = false;
  }
  if (expect_term) return fail("dangling operator");
  return from_terms(std::move(terms), constant);
}

ParameterExpression expr_add(const ParameterExpression& lhs, const ParameterExpression& rhs) {
  auto terms = lhs.terms();
  for (const auto& [name, c] : rhs.terms()) terms[name] += c;
  return ParameterExpression::from_terms(std::move(terms), lhs.constant() + rhs.constant());
}

ParameterExpression expr_scale(const ParameterExpression& e, double k) {
  if (!std::isfinite(k)) throw Error(ErrorCode::NonFinite, "scale factor must be finite");
  std::map<std::string, double> terms;
  for (const auto& [name, c] : e.terms()) terms[name] = c * k;
  return ParameterExpression::from_terms(std::move(terms), e.constant() * k);
}

double expr_eval(const ParameterExpression& e, const ParamMap& env) { return e.eval(env); }

}  // namespace qforge
