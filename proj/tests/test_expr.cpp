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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "qforge/expr.hpp"

using qforge::Error;
using qforge::ErrorCode;
using qforge::kPi;
using qforge::ParameterExpression;
using E = ParameterExpression;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ParseError;
}

E random_expr(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5, 5);
  std::map<std::string, double> terms;
  const char* names[] = {"a", "b", "c", "theta_1"};
  for (const char* n : names) {
    if (rng() % 2) terms[n] = u(rng);
  }
  return E::from_terms(terms, u(rng));
}

}  // namespace

TEST_CASE("addition sums terms and constants") {
  const E sum = kPi * E::parameter("a") + 0.5 * E::parameter("b");
  CHECK(sum.coefficient("a") == kPi);
  CHECK(sum.coefficient("b") == 0.5);
  CHECK(sum.render() == "3.141592653589793*a + 0.5*b");

  const E cancelled = E::parameter("a") + E::parameter("a", -1.0);
  CHECK(cancelled.is_constant());
  CHECK(cancelled.terms().empty());
  CHECK(cancelled == E(0.0));

  const E folded = (2.0 * E::parameter("a") + E(3.0)) + E(4.0);
  CHECK(folded == E::from_terms({{"a", 2.0}}, 7.0));
}

TEST_CASE("scaling") {
  CHECK(qforge::expr_scale(E::parameter("a") + E(1.0), 2.0) == E::from_terms({{"a", 2.0}}, 2.0));
  const E zero = qforge::expr_scale(kPi * E::parameter("a"), 0.0);
  CHECK(zero.is_constant());
  CHECK(zero.constant() == 0.0);
  CHECK_FALSE(std::signbit(qforge::expr_scale(E(1.0), -0.0).constant()));
  CHECK(qforge::expr_scale(0.5 * E::parameter("b"), -2.0) == E::parameter("b", -1.0));
  CHECK(code_of([] { qforge::expr_scale(E(1.0), std::numeric_limits<double>::infinity()); }) == ErrorCode::NonFinite);
  CHECK(code_of([] { qforge::expr_scale(E(1.0), std::nan("")); }) == ErrorCode::NonFinite);
}

TEST_CASE("evaluation") {
  const E e = kPi * E::parameter("a") + 0.5 * E::parameter("b");
  CHECK(qforge::expr_eval(e, {{"a", 1.0}, {"b", 2.0}}) == Catch::Approx(kPi + 1.0).epsilon(1e-15));
  CHECK(qforge::expr_eval(E(3.0), {}) == 3.0);
  try {
    qforge::expr_eval(E::parameter("a"), {});
    FAIL("expected MissingParameter");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::MissingParameter);
    CHECK(std::string(err.what()).find('a') != std::string::npos);
  }
}

TEST_CASE("construction validates names and values") {
  CHECK(code_of([] { E::parameter(""); }) == ErrorCode::InvalidExpression);
  CHECK(code_of([] { E::parameter("a b"); }) == ErrorCode::InvalidExpression);
  CHECK(code_of([] { E::parameter("a", std::nan("")); }) == ErrorCode::NonFinite);
  CHECK(code_of([] { E(std::numeric_limits<double>::infinity()); }) == ErrorCode::NonFinite);
  CHECK(E::parameter("A") != E::parameter("a"));
  CHECK(E::parameter("a", 0.0).is_constant());
}

TEST_CASE("parse accepts linear forms and rejects products") {
  CHECK(E::parse("2*a + 0.5*b - 1") == E::from_terms({{"a", 2.0}, {"b", 0.5}}, -1.0));
  CHECK(E::parse("-a") == E::parameter("a", -1.0));
  CHECK(E::parse("a + a") == E::parameter("a", 2.0));
  CHECK(E::parse("3") == E(3.0));
  CHECK(E::parse("1e-3*x") == E::parameter("x", 1e-3));
  CHECK(code_of([] { E::parse("a*b"); }) == ErrorCode::InvalidExpression);
  CHECK(code_of([] { E::parse(""); }) == ErrorCode::InvalidExpression);
  CHECK(code_of([] { E::parse("a +"); }) == ErrorCode::InvalidExpression);
  CHECK(code_of([] { E::parse("2 3"); }) == ErrorCode::InvalidExpression);
}

TEST_CASE("property: render then parse round-trips exactly") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const E e = random_expr(rng);
    INFO(e.render());
    CHECK(E::parse(e.render()) == e);
  }
}

TEST_CASE("property: addition is commutative and associative") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    // Integer-valued coefficients keep the sums exact.
    auto ints = [&] {
      std::map<std::string, double> t;
      for (const char* n : {"a", "b", "c"}) {
        if (rng() % 2) t[n] = static_cast<double>(static_cast<int>(rng() % 19) - 9);
      }
      return E::from_terms(t, static_cast<double>(static_cast<int>(rng() % 11) - 5));
    };
    const E x = ints(), y = ints(), z = ints();
    CHECK(x + y == y + x);
    CHECK((x + y) + z == x + (y + z));
  }
}

TEST_CASE("property: evaluation commutes with scaling") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    const E e = random_expr(rng);
    const qforge::ParamMap env = {{"a", u(rng)}, {"b", u(rng)}, {"c", u(rng)}, {"theta_1", u(rng)}};
    // Power-of-two factors are exact in binary floating point.
    const double k2 = std::ldexp(1.0, static_cast<int>(rng() % 9) - 4) * ((rng() % 2) ? 1 : -1);
    CHECK(qforge::expr_eval(qforge::expr_scale(e, k2), env) == k2 * qforge::expr_eval(e, env));
    // General factors: both sides round each product once per term, so the gap
    // is bounded by a few ulps of the summed magnitudes.
    const double k = u(rng);
    double mag = std::abs(e.constant());
    for (const auto& [n, c] : e.terms()) mag += std::abs(c * env.at(n));
    const double bound = 4.0 * (static_cast<double>(e.terms().size()) + 1.0) *
                         std::numeric_limits<double>::epsilon() * std::abs(k) * mag;
    CHECK(std::abs(qforge::expr_eval(qforge::expr_scale(e, k), env) - k * qforge::expr_eval(e, env)) <= bound);
  }
}
