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

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qforge {

enum class ErrorCode {
  MissingParameter,
  InvalidExpression,
  NonFinite,
  IndexOutOfRange,
  OverlappingTargetControl,
  InvalidGate,
  NonUnitary,
  NonInvertible,
  MidCircuitMeasure,
  ParameterizedProduct,
  NonHermitian,
  UnboundCoefficient,
  QubitCapExceeded,
  IncompleteChannel,
  InvalidChannel,
  ZeroNormBranch,
  NonDifferentiableGate,
  UnsupportedGateForShift,
  InvalidTask,
  DivergedObjective,
  InvalidGraph,
  UnsupportedDecomposition,
  TooManyLogicalQubits,
  InvalidCoupling,
  ParseError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class Precision { Single, Double };

template <typename T>
constexpr Precision precision_of() {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  return std::is_same_v<T, float> ? Precision::Single : Precision::Double;
}

const char* to_string(Precision p);
Precision parse_precision(const std::string& s);

using ParamMap = std::map<std::string, double>;

template <typename T>
using Complex = std::complex<T>;
template <typename T>
using VectorXc = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;
template <typename T>
using MatrixXc = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using RowMatrixXc = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Index = std::uint64_t;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace qforge
