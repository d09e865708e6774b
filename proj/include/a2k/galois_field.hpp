#pragma once

// Finite fields F_{p^k} represented by coefficient vectors modulo a monic
// primitive polynomial, with full log/antilog tables. Sizes targeted here are
// tiny (at most a few thousand elements), so every multiplication is a table
// lookup.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace a2k {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense code of an element: sum of coeffs[i] * p^i.
using ElemCode = std::uint32_t;

struct FieldDescriptor {
  unsigned p = 0;
  unsigned k = 0;
  std::vector<unsigned> modulus;  // k+1 coefficients, constant first, monic
  std::uint64_t order = 0;        // p^k
  bool primitive = false;         // class of x generates the multiplicative group

  // Generator used for the tables: the class of x when `primitive`, otherwise
  // the least primitive root (prime field with modulus x).
  ElemCode generator = 0;
  std::vector<ElemCode> antilog;  // exponent -> element, size order-1
  std::vector<std::uint32_t> log; // element -> exponent, log[0] unused

  std::uint64_t group_order() const { return order - 1; }
  std::string modulus_string() const;  // "c0,c1,...,ck"
  std::string polynomial_string() const;  // "x^3+x+1"
};

using FieldPtr = std::shared_ptr<const FieldDescriptor>;

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Decomposes q = p^k; nullopt when q is not a prime power.
std::optional<std::pair<unsigned, unsigned>> prime_power(std::uint64_t q);

/// Builds F_{p^k}. Without a modulus, picks the smallest monic primitive
/// polynomial of degree k (ordered by the value sum c_i p^i), or `x` when k == 1.
/// Throws FieldError for non-prime p, malformed moduli, reducible moduli
/// (with a witness factor) and non-primitive moduli (with the order of x).
FieldPtr make_field(unsigned p, unsigned k, std::optional<std::vector<unsigned>> modulus = std::nullopt);

/// Parses "c0,c1,...,ck".
std::vector<unsigned> parse_modulus(const std::string& text);

class FieldElem {
 public:
  FieldElem(FieldPtr owner, ElemCode code);
  static FieldElem zero(const FieldPtr& f) { return {f, 0}; }
  static FieldElem one(const FieldPtr& f) { return {f, 1}; }
  static FieldElem from_coeffs(const FieldPtr& f, const std::vector<unsigned>& coeffs);
  /// g^e for the field's table generator.
  static FieldElem generator_power(const FieldPtr& f, std::uint64_t e);
  /// Class of the indeterminate x.
  static FieldElem indeterminate(const FieldPtr& f);

  const FieldPtr& owner() const { return owner_; }
  ElemCode code() const { return code_; }
  std::vector<unsigned> coeffs() const;
  bool is_zero() const { return code_ == 0; }
  std::string to_string() const;

  bool operator==(const FieldElem& o) const { return owner_ == o.owner_ && code_ == o.code_; }

 private:
  FieldPtr owner_;
  ElemCode code_;
};

enum class ArithOp { add, sub, mul, inv, div };

/// Dispatches one field operation. `inv` ignores b.
FieldElem fe_arith(const FieldElem& a, const FieldElem& b, ArithOp op);

FieldElem operator+(const FieldElem& a, const FieldElem& b);
FieldElem operator-(const FieldElem& a, const FieldElem& b);
FieldElem operator*(const FieldElem& a, const FieldElem& b);
FieldElem operator/(const FieldElem& a, const FieldElem& b);
FieldElem inverse(const FieldElem& a);
FieldElem pow(const FieldElem& a, std::uint64_t e);

/// Relative trace x + x^q + x^{q^2} of F_{q^3}/F_q with q = p^subfield_degree.
/// The result is returned inside the big field and is checked to be
/// Frobenius-fixed. Throws unless the field degree is 3 * subfield_degree.
FieldElem relative_trace(const FieldElem& x, unsigned subfield_degree);

/// Least e >= 0 with gen^e == y.
std::uint64_t discrete_log(const FieldElem& gen, const FieldElem& y);

/// Multiplicative order of a nonzero element.
std::uint64_t multiplicative_order(const FieldElem& a);

}  // namespace a2k
