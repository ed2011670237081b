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
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qforge/core.hpp"
#include "qforge/expr.hpp"

namespace qforge {

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

/// Tensor product of single-qubit Paulis; qubits not listed carry identity.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::map<int, Pauli> factors);

  /// "X0 Y1 Z3"; letters are case-insensitive, "" or "I" is the identity.
  static PauliString parse(std::string_view text);

  const std::map<int, Pauli>& factors() const { return factors_; }
  bool is_identity() const { return factors_.empty(); }
  int max_qubit() const { return factors_.empty() ? -1 : factors_.rbegin()->first; }
  std::string to_string() const;

  /// Bit masks for qubits < 64: flip mask (X or Y), phase mask (Y or Z), Y count.
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  int y_count() const;

  friend auto operator<=>(const PauliString&, const PauliString&) = default;
  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::map<int, Pauli> factors_;
};

/// Either a complex number or a real parameter expression.
using PauliCoefficient = std::variant<std::complex<double>, ParameterExpression>;

class PauliSum {
 public:
  PauliSum() = default;
  PauliSum(const PauliString& s, std::complex<double> coeff);
  PauliSum(const PauliString& s, const ParameterExpression& coeff);

  static PauliSum identity(std::complex<double> coeff = 1.0);
  static PauliSum parse_term(std::string_view pauli, std::complex<double> coeff = 1.0);

  const std::map<PauliString, PauliCoefficient>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  int max_qubit() const;

  void add_term(const PauliString& s, const PauliCoefficient& coeff);

  bool is_parameterized() const;
  /// Evaluates every expression coefficient; the result has only complex coefficients.
  PauliSum bind(const ParamMap& env) const;
  /// Complex coefficient of a bound term; throws UnboundCoefficient on a free parameter.
  static std::complex<double> value_of(const PauliCoefficient& c);
  std::complex<double> coefficient(const PauliString& s) const;

  bool is_hermitian(double tol = 1e-10) const;
  /// Throws UnboundCoefficient / NonHermitian; returns (string, real weight) pairs.
  std::vector<std::pair<PauliString, double>> real_terms(double tol = 1e-10) const;

  std::string to_string() const;

  PauliSum& operator+=(const PauliSum& other);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator*(std::complex<double> k, const PauliSum& a);

 private:
  std::map<PauliString, PauliCoefficient> terms_;
};

PauliSum pauli_mul(const PauliSum& a, const PauliSum& b);
inline PauliSum operator*(const PauliSum& a, const PauliSum& b) { return pauli_mul(a, b); }

/// Dense 2^n x 2^n matrix (qubit 0 least significant). Reference semantics.
Eigen::MatrixXcd to_dense(const PauliSum& h, int n_qubits);
Eigen::MatrixXcd to_dense(const PauliString& s, int n_qubits);

/// <psi|H|psi> via the dense matrix; intended as an oracle for small systems.
double expectation_dense(const PauliSum& h, const Eigen::VectorXcd& psi);

/// A product of ladder operators: (mode, is_creation) applied right-to-left
/// as written left-to-right, e.g. {(0,true),(1,false)} is a0^ a1.
using LadderProduct = std::vector<std::pair<int, bool>>;

class FermionSum {
 public:
  FermionSum() = default;
  FermionSum(LadderProduct product, std::complex<double> coeff);

  /// OpenFermion-style "0^ 1" (creation marked with ^).
  static FermionSum parse_term(std::string_view text, std::complex<double> coeff = 1.0);

  const std::map<LadderProduct, std::complex<double>>& terms() const { return terms_; }
  FermionSum& operator+=(const FermionSum& other);
  friend FermionSum operator+(FermionSum a, const FermionSum& b) { return a += b; }

 private:
  std::map<LadderProduct, std::complex<double>> terms_;
};

PauliSum jordan_wigner(const FermionSum& f);

}  // namespace qforge
