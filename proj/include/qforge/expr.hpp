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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qforge/core.hpp"

namespace qforge {

/// A real linear combination of named parameters plus a constant.
///
/// Terms with a coefficient of exactly zero are never stored, so an
/// expression whose terms all cancel compares equal to a plain constant.
/// Products of parameters are not representable.
class ParameterExpression {
 public:
  ParameterExpression() = default;
  ParameterExpression(double constant);  // NOLINT(google-explicit-constructor)

  static ParameterExpression parameter(const std::string& name, double coeff = 1.0);
  static ParameterExpression from_terms(std::map<std::string, double> terms, double constant);

  const std::map<std::string, double>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }
  double coefficient(const std::string& name) const;

  double eval(const ParamMap& env) const;

  /// Shortest round-trip decimals, terms ordered by name: "3.14*a + 0.5*b - 1".
  std::string render() const;
  static ParameterExpression parse(std::string_view text);

  friend bool operator==(const ParameterExpression&, const ParameterExpression&) = default;

 private:
  void prune();

  std::map<std::string, double> terms_;
  double constant_ = 0.0;
};

ParameterExpression expr_add(const ParameterExpression& lhs, const ParameterExpression& rhs);
ParameterExpression expr_scale(const ParameterExpression& e, double k);
double expr_eval(const ParameterExpression& e, const ParamMap& env);

inline ParameterExpression operator+(const ParameterExpression& a, const ParameterExpression& b) {
  return expr_add(a, b);
}
inline ParameterExpression operator-(const ParameterExpression& a) { return expr_scale(a, -1.0); }
inline ParameterExpression operator-(const ParameterExpression& a, const ParameterExpression& b) {
  return expr_add(a, expr_scale(b, -1.0));
}
inline ParameterExpression operator*(double k, const ParameterExpression& e) { return expr_scale(e, k); }
inline ParameterExpression operator*(const ParameterExpression& e, double k) { return expr_scale(e, k); }

bool is_valid_parameter_name(std::string_view name);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace qforge
