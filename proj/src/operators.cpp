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

#include "qforge/operators.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

namespace qforge {

namespace {

using C = std::complex<double>;

bool is_zero(const PauliCoefficient& c) {
  if (const auto* v = std::get_if<C>(&c)) return *v == C{0.0, 0.0};
  const auto& e = std::get<ParameterExpression>(c);
  return e.is_constant() && e.constant() == 0.0;
}

PauliCoefficient add(const PauliCoefficient& a, const PauliCoefficient& b) {
  const auto* ca = std::get_if<C>(&a);
  const auto* cb = std::get_if<C>(&b);
  if (ca && cb) return *ca + *cb;
  if (!ca && !cb) return expr_add(std::get<ParameterExpression>(a), std::get<ParameterExpression>(b));
  const C& num = ca ? *ca : *cb;
  const auto& ex = ca ? std::get<ParameterExpression>(b) : std::get<ParameterExpression>(a);
  if (num.imag() != 0.0) {
    throw Error(ErrorCode::InvalidExpression, "cannot add a complex constant to a real parameter expression");
  }
  return expr_add(ex, ParameterExpression(num.real()));
}

// Single-qubit product a*b = phase * result (result absent for identity).
std::pair<C, std::optional<Pauli>> mul_single(Pauli a, Pauli b) {
  if (a == b) return {C{1.0, 0.0}, std::nullopt};
  const C i{0.0, 1.0};
  if (a == Pauli::X && b == Pauli::Y) return {i, Pauli::Z};
  if (a == Pauli::Y && b == Pauli::Z) return {i, Pauli::X};
  if (a == Pauli::Z && b == Pauli::X) return {i, Pauli::Y};
  if (a == Pauli::Y && b == Pauli::X) return {-i, Pauli::Z};
  if (a == Pauli::Z && b == Pauli::Y) return {-i, Pauli::X};
  return {-i, Pauli::Y};  // X*Z
}

std::pair<C, PauliString> mul_strings(const PauliString& a, const PauliString& b) {
  std::map<int, Pauli> out = a.factors();
  C phase{1.0, 0.0};
  for (const auto& [q, p] : b.factors()) {
    auto it = out.find(q);
    if (it == out.end()) {
      out.emplace(q, p);
      continue;
    }
    auto [ph, r] = mul_single(it->second, p);
    phase *= ph;
    if (r) it->second = *r;
    else out.erase(it);
  }
  return {phase, PauliString(std::move(out))};
}

Eigen::Matrix2cd single_pauli(Pauli p) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (p) {
    case Pauli::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::Y:
      m(0, 1) = C{0.0, -1.0};
      m(1, 0) = C{0.0, 1.0};
      break;
    case Pauli::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

}  // namespace

PauliString::PauliString(std::map<int, Pauli> factors) : factors_(std::move(factors)) {
  for (const auto& [q, p] : factors_) {
    if (q < 0) throw Error(ErrorCode::IndexOutOfRange, "negative qubit in Pauli string");
  }
}

PauliString PauliString::parse(std::string_view text) {
  std::map<int, Pauli> factors;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> PauliString {
    throw Error(ErrorCode::ParseError, "Pauli string '" + std::string(text) + "': " + why);
  };
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[pos])));
    ++pos;
    if (letter == 'I' && (pos == text.size() || std::isspace(static_cast<unsigned char>(text[pos])))) continue;
    Pauli p;
    if (letter == 'X') p = Pauli::X;
    else if (letter == 'Y') p = Pauli::Y;
    else if (letter == 'Z') p = Pauli::Z;
    else return fail(std::string("unknown letter '") + letter + "'");
    int q = 0;
    auto res = std::from_chars(text.data() + pos, text.data() + text.size(), q);
    if (res.ec != std::errc() || res.ptr == text.data() + pos) return fail("missing qubit index");
    pos = static_cast<std::size_t>(res.ptr - text.data());
    if (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) return fail("expected space");
    if (factors.count(q)) return fail("qubit " + std::to_string(q) + " repeated");
    factors.emplace(q, p);
  }
  return PauliString(std::move(factors));
}

std::string PauliString::to_string() const {
  if (factors_.empty()) return "I";
  std::string out;
  for (const auto& [q, p] : factors_) {
    if (!out.empty()) out += ' ';
    out += static_cast<char>(p);
    out += std::to_string(q);
  }
  return out;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (const auto& [q, p] : factors_) {
    if (p != Pauli::Z) m |= std::uint64_t{1} << q;
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (const auto& [q, p] : factors_) {
    if (p != Pauli::X) m |= std::uint64_t{1} << q;
  }
  return m;
}

int PauliString::y_count() const {
  int n = 0;
  for (const auto& [q, p] : factors_) n += p == Pauli::Y;
  return n;
}

PauliSum::PauliSum(const PauliString& s, std::complex<double> coeff) { add_term(s, coeff); }
PauliSum::PauliSum(const PauliString& s, const ParameterExpression& coeff) { add_term(s, coeff); }

PauliSum PauliSum::identity(std::complex<double> coeff) { return PauliSum(PauliString{}, coeff); }

PauliSum PauliSum::parse_term(std::string_view pauli, std::complex<double> coeff) {
  return PauliSum(PauliString::parse(pauli), coeff);
}

int PauliSum::max_qubit() const {
  int m = -1;
  for (const auto& [s, c] : terms_) m = std::max(m, s.max_qubit());
  return m;
}

void PauliSum::add_term(const PauliString& s, const PauliCoefficient& coeff) {
  auto it = terms_.find(s);
  if (it == terms_.end()) {
    if (!is_zero(coeff)) terms_.emplace(s, coeff);
    return;
  }
  it->second = add(it->second, coeff);
  if (is_zero(it->second)) terms_.erase(it);
}

bool PauliSum::is_parameterized() const {
  for (const auto& [s, c] : terms_) {
    if (const auto* e = std::get_if<ParameterExpression>(&c); e && !e->is_constant()) return true;
  }
  return false;
}

PauliSum PauliSum::bind(const ParamMap& env) const {
  PauliSum out;
  for (const auto& [s, c] : terms_) {
    if (const auto* e = std::get_if<ParameterExpression>(&c)) out.add_term(s, C{e->eval(env), 0.0});
    else out.add_term(s, c);
  }
  return out;
}

std::complex<double> PauliSum::value_of(const PauliCoefficient& c) {
  if (const auto* v = std::get_if<C>(&c)) return *v;
  const auto& e = std::get<ParameterExpression>(c);
  if (!e.is_constant()) throw Error(ErrorCode::UnboundCoefficient, "coefficient '" + e.render() + "' is unbound");
  return {e.constant(), 0.0};
}

std::complex<double> PauliSum::coefficient(const PauliString& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? C{0.0, 0.0} : value_of(it->second);
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [s, c] : terms_) {
    if (std::abs(value_of(c).imag()) > tol) return false;
  }
  return true;
}

std::vector<std::pair<PauliString, double>> PauliSum::real_terms(double tol) const {
  std::vector<std::pair<PauliString, double>> out;
  out.reserve(terms_.size());
  for (const auto& [s, c] : terms_) {
    const C v = value_of(c);
    if (std::abs(v.imag()) > tol) {
      throw Error(ErrorCode::NonHermitian, "term " + s.to_string() + " has imaginary weight");
    }
    out.emplace_back(s, v.real());
  }
  return out;
}

std::string PauliSum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (const auto* v = std::get_if<C>(&c)) {
      os << '(' << format_double(v->real());
      if (v->imag() != 0.0) os << (std::signbit(v->imag()) ? "-" : "+") << format_double(std::abs(v->imag())) << 'i';
      os << ')';
    } else {
      os << '(' << std::get<ParameterExpression>(c).render() << ')';
    }
    os << ' ' << s.to_string();
  }
  return first ? "0" : os.str();
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  for (const auto& [s, c] : other.terms_) add_term(s, c);
  return *this;
}

PauliSum operator*(std::complex<double> k, const PauliSum& a) {
  PauliSum out;
  for (const auto& [s, c] : a.terms_) {
    if (const auto* v = std::get_if<C>(&c)) {
      out.add_term(s, k * *v);
    } else {
      if (k.imag() != 0.0) throw Error(ErrorCode::InvalidExpression, "complex scaling of a parameter expression");
      out.add_term(s, expr_scale(std::get<ParameterExpression>(c), k.real()));
    }
  }
  return out;
}

PauliSum pauli_mul(const PauliSum& a, const PauliSum& b) {
  if (a.is_parameterized() || b.is_parameterized()) {
    throw Error(ErrorCode::ParameterizedProduct, "multiplication requires constant coefficients");
  }
  PauliSum out;
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      auto [phase, s] = mul_strings(sa, sb);
      out.add_term(s, phase * PauliSum::value_of(ca) * PauliSum::value_of(cb));
    }
  }
  return out;
}

Eigen::MatrixXcd to_dense(const PauliString& s, int n_qubits) {
  // Kronecker product with qubit n-1 as the leftmost factor.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = n_qubits - 1; q >= 0; --q) {
    auto it = s.factors().find(q);
    Eigen::Matrix2cd f = it == s.factors().end() ? Eigen::Matrix2cd::Identity() : single_pauli(it->second);
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) next.block(r * 2, c * 2, 2, 2) = m(r, c) * f;
    }
    m = std::move(next);
  }
  return m;
}

Eigen::MatrixXcd to_dense(const PauliSum& h, int n_qubits) {
  if (h.max_qubit() >= n_qubits) throw Error(ErrorCode::IndexOutOfRange, "operator exceeds qubit count");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [s, c] : h.terms()) m += PauliSum::value_of(c) * to_dense(s, n_qubits);
  return m;
}

double expectation_dense(const PauliSum& h, const Eigen::VectorXcd& psi) {
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(psi.size()))));
  if (h.max_qubit() >= n) throw Error(ErrorCode::IndexOutOfRange, "operator exceeds state qubit count");
  h.real_terms();  // hermiticity / binding checks
  const C v = psi.dot(to_dense(h, n) * psi);
  if (std::abs(v.imag()) > 1e-10) throw Error(ErrorCode::NonHermitian, "complex expectation value");
  return v.real();
}

FermionSum::FermionSum(LadderProduct product, std::complex<double> coeff) {
  for (const auto& [mode, dag] : product) {
    if (mode < 0) throw Error(ErrorCode::IndexOutOfRange, "negative fermionic mode");
  }
  if (coeff != C{0.0, 0.0}) terms_.emplace(std::move(product), coeff);
}

FermionSum FermionSum::parse_term(std::string_view text, std::complex<double> coeff) {
  LadderProduct prod;
  std::istringstream is{std::string(text)};
  std::string tok;
  while (is >> tok) {
    bool dag = !tok.empty() && tok.back() == '^';
    if (dag) tok.pop_back();
    int mode = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), mode);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::ParseError, "bad ladder operator '" + tok + "'");
    }
    prod.emplace_back(mode, dag);
  }
  return FermionSum(std::move(prod), coeff);
}

FermionSum& FermionSum::operator+=(const FermionSum& other) {
  for (const auto& [p, c] : other.terms_) {
    auto& slot = terms_[p];
    slot += c;
    if (slot == C{0.0, 0.0}) terms_.erase(p);
  }
  return *this;
}

PauliSum jordan_wigner(const FermionSum& f) {
  PauliSum total;
  for (const auto& [product, coeff] : f.terms()) {
    PauliSum term = PauliSum::identity(coeff);
    for (const auto& [mode, dag] : product) {
      std::map<int, Pauli> tail;
      for (int q = 0; q < mode; ++q) tail.emplace(q, Pauli::Z);
      auto with = [&](Pauli p) {
        auto m = tail;
        m.emplace(mode, p);
        return PauliString(std::move(m));
      };
      PauliSum ladder(with(Pauli::X), C{0.5, 0.0});
      ladder.add_term(with(Pauli::Y), C{0.0, dag ? -0.5 : 0.5});
      term = pauli_mul(term, ladder);
    }
    total += term;
  }
  return total;
}

}  // namespace qforge
