#include "a2k/galois_field.hpp"

#include <numeric>
#include <sstream>
#include <tuple>

namespace a2k {

namespace {

using Poly = std::vector<unsigned>;  // constant first, trailing zeros trimmed

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

unsigned inv_mod(unsigned a, unsigned p) {
  // p is small; Fermat is fine
  std::uint64_t r = 1, b = a % p;
  for (unsigned e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<unsigned>(r);
}

// Remainder of a modulo b over F_p.
Poly poly_mod(Poly a, Poly b, unsigned p) {
  trim(a);
  trim(b);
  const unsigned lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const unsigned c = static_cast<unsigned>(std::uint64_t(a.back()) * lead_inv % p);
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = static_cast<unsigned>((a[shift + i] + std::uint64_t(p - c) * b[i]) % p);
    }
    trim(a);
  }
  return a;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

Poly decode(std::uint64_t code, unsigned p, unsigned len) {
  Poly c(len);
  for (unsigned i = 0; i < len; ++i) {
    c[i] = static_cast<unsigned>(code % p);
    code /= p;
  }
  return c;
}

ElemCode encode(const Poly& c, unsigned p) {
  std::uint64_t code = 0;
  for (std::size_t i = c.size(); i-- > 0;) code = code * p + c[i];
  return static_cast<ElemCode>(code);
}

// Witness monic factor of degree <= k/2, if any.
std::optional<Poly> find_factor(const Poly& modulus, unsigned p, unsigned k) {
  for (unsigned d = 1; 2 * d <= k; ++d) {
    const std::uint64_t count = ipow(p, d);
    for (std::uint64_t low = 0; low < count; ++low) {
      Poly f = decode(low, p, d);
      f.push_back(1);
      if (poly_mod(modulus, f, p).empty()) return f;
    }
  }
  return std::nullopt;
}

// Powers of x modulo the modulus until they return to 1, capped at order-1 steps.
std::vector<ElemCode> powers_of_x(const Poly& modulus, unsigned p, unsigned k, std::uint64_t group_order) {
  std::vector<ElemCode> out;
  out.reserve(group_order);
  Poly cur(k, 0);
  cur[0] = 1;
  for (std::uint64_t e = 0; e < group_order; ++e) {
    const ElemCode code = encode(cur, p);
    if (e > 0 && code == 1) break;
    out.push_back(code);
    // multiply by x
    const unsigned top = cur[k - 1];
    for (unsigned i = k - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0) {
      for (unsigned i = 0; i < k; ++i) {
        cur[i] = static_cast<unsigned>((cur[i] + std::uint64_t(p - top) * modulus[i] % p) % p);
      }
    }
  }
  return out;
}

bool is_primitive_root(unsigned g, unsigned p) {
  if (g == 0) return false;
  if (p == 2) return g == 1;
  for (auto r : prime_factors(p - 1)) {
    std::uint64_t acc = 1, b = g;
    for (std::uint64_t e = (p - 1) / r; e; e >>= 1) {
      if (e & 1) acc = acc * b % p;
      b = b * b % p;
    }
    if (acc == 1) return false;
  }
  return true;
}

void fill_tables(FieldDescriptor& f, const std::vector<ElemCode>& antilog) {
  f.antilog = antilog;
  f.log.assign(f.order, 0);
  for (std::uint32_t e = 0; e < antilog.size(); ++e) f.log[antilog[e]] = e;
  f.generator = antilog.size() > 1 ? antilog[1] : 1;
}

std::string poly_string(const Poly& c) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!first) os << '+';
    first = false;
    if (c[i] != 1 || i == 0) os << c[i];
    if (i >= 1) os << 'x';
    if (i >= 2) os << '^' << i;
  }
  if (first) os << '0';
  return os.str();
}

void check_same_owner(const FieldElem& a, const FieldElem& b) {
  if (a.owner() != b.owner()) throw FieldError("field element owner mismatch");
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::optional<std::pair<unsigned, unsigned>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  auto f = prime_factors(q);
  if (f.size() != 1) return std::nullopt;
  unsigned k = 0;
  for (std::uint64_t r = q; r > 1; r /= f[0]) ++k;
  return std::make_pair(static_cast<unsigned>(f[0]), k);
}

std::string FieldDescriptor::modulus_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < modulus.size(); ++i) os << (i ? "," : "") << modulus[i];
  return os.str();
}

std::string FieldDescriptor::polynomial_string() const { return poly_string(modulus); }

std::vector<unsigned> parse_modulus(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<unsigned>(v));
    } catch (const std::exception&) {
      throw FieldError("malformed modulus coefficient '" + item + "'");
    }
  }
  if (out.empty()) throw FieldError("empty modulus");
  return out;
}

FieldPtr make_field(unsigned p, unsigned k, std::optional<std::vector<unsigned>> modulus) {
  if (!is_prime(p)) throw FieldError(std::to_string(p) + " is not prime");
  if (k == 0) throw FieldError("extension degree must be at least 1");
  const std::uint64_t order = ipow(p, k);
  if (order > (std::uint64_t{1} << 24)) throw FieldError("field too large for table arithmetic");

  auto f = std::make_shared<FieldDescriptor>();
  f->p = p;
  f->k = k;
  f->order = order;
  const std::uint64_t group_order = order - 1;

  if (k == 1) {
    Poly m = modulus.value_or(Poly{0, 1});
    if (m.size() != 2 || m[1] != 1 || m[0] >= p) throw FieldError("modulus must be monic of degree 1 with coefficients below p");
    f->modulus = m;
    const unsigned x_class = (p - m[0]) % p;
    f->primitive = is_primitive_root(x_class, p);
    unsigned g = x_class;
    if (!f->primitive) {
      g = 1;
      while (!is_primitive_root(g, p)) ++g;
    }
    std::vector<ElemCode> antilog;
    std::uint64_t cur = 1;
    for (std::uint64_t e = 0; e < group_order; ++e) {
      antilog.push_back(static_cast<ElemCode>(cur));
      cur = cur * g % p;
    }
    fill_tables(*f, antilog);
    return f;
  }

  if (modulus) {
    const Poly& m = *modulus;
    if (m.size() != k + 1) throw FieldError("modulus must have exactly k+1 coefficients (constant first)");
    if (m.back() != 1) throw FieldError("modulus must be monic");
    for (auto c : m)
      if (c >= p) throw FieldError("modulus coefficient out of range [0,p)");
    if (auto w = find_factor(m, p, k)) {
      throw FieldError("modulus " + poly_string(m) + " is reducible: witness factor " + poly_string(*w));
    }
    auto pw = powers_of_x(m, p, k, group_order);
    if (pw.size() != group_order) {
      throw FieldError("modulus " + poly_string(m) + " is not primitive: x has order " + std::to_string(pw.size()) +
                       ", a proper divisor of " + std::to_string(group_order));
    }
    f->modulus = m;
    f->primitive = true;
    fill_tables(*f, pw);
    return f;
  }

  // Smallest primitive polynomial by value; the constant term must be nonzero.
  for (std::uint64_t low = 1; low < order; ++low) {
    Poly m = decode(low, p, k);
    if (m[0] == 0) continue;
    m.push_back(1);
    if (find_factor(m, p, k)) continue;
    auto pw = powers_of_x(m, p, k, group_order);
    if (pw.size() != group_order) continue;
    f->modulus = m;
    f->primitive = true;
    fill_tables(*f, pw);
    return f;
  }
  throw FieldError("no primitive polynomial found");  // unreachable for valid p, k
}

FieldElem::FieldElem(FieldPtr owner, ElemCode code) : owner_(std::move(owner)), code_(code) {
  if (!owner_) throw FieldError("field element without owner");
  if (code_ >= owner_->order) throw FieldError("field element code out of range");
}

FieldElem FieldElem::from_coeffs(const FieldPtr& f, const std::vector<unsigned>& coeffs) {
  if (coeffs.size() != f->k) throw FieldError("coefficient vector length must equal k");
  for (auto c : coeffs)
    if (c >= f->p) throw FieldError("coefficient out of range");
  return {f, encode(coeffs, f->p)};
}

FieldElem FieldElem::generator_power(const FieldPtr& f, std::uint64_t e) {
  return {f, f->antilog[e % f->group_order()]};
}

FieldElem FieldElem::indeterminate(const FieldPtr& f) {
  if (f->k == 1) return {f, (f->p - f->modulus[0]) % f->p};
  Poly c(f->k, 0);
  c[1] = 1;
  return from_coeffs(f, c);
}

std::vector<unsigned> FieldElem::coeffs() const { return decode(code_, owner_->p, owner_->k); }

std::string FieldElem::to_string() const { return poly_string(coeffs()); }

FieldElem fe_arith(const FieldElem& a, const FieldElem& b, ArithOp op) {
  const auto& f = *a.owner();
  if (op != ArithOp::inv) check_same_owner(a, b);
  const std::uint64_t g = f.group_order();
  switch (op) {
    case ArithOp::add:
    case ArithOp::sub: {
      auto x = a.coeffs();
      auto y = b.coeffs();
      for (unsigned i = 0; i < f.k; ++i) {
        x[i] = op == ArithOp::add ? (x[i] + y[i]) % f.p : (x[i] + f.p - y[i]) % f.p;
      }
      return {a.owner(), encode(x, f.p)};
    }
    case ArithOp::mul:
      if (a.is_zero() || b.is_zero()) return FieldElem::zero(a.owner());
      return {a.owner(), f.antilog[(std::uint64_t(f.log[a.code()]) + f.log[b.code()]) % g]};
    case ArithOp::inv:
      if (a.is_zero()) throw FieldError("division by zero");
      return {a.owner(), f.antilog[(g - f.log[a.code()]) % g]};
    case ArithOp::div:
      if (b.is_zero()) throw FieldError("division by zero");
      if (a.is_zero()) return FieldElem::zero(a.owner());
      return {a.owner(), f.antilog[(std::uint64_t(f.log[a.code()]) + g - f.log[b.code()]) % g]};
  }
  throw FieldError("unknown operation");
}

FieldElem operator+(const FieldElem& a, const FieldElem& b) { return fe_arith(a, b, ArithOp::add); }
FieldElem operator-(const FieldElem& a, const FieldElem& b) { return fe_arith(a, b, ArithOp::sub); }
FieldElem operator*(const FieldElem& a, const FieldElem& b) { return fe_arith(a, b, ArithOp::mul); }
FieldElem operator/(const FieldElem& a, const FieldElem& b) { return fe_arith(a, b, ArithOp::div); }
FieldElem inverse(const FieldElem& a) { return fe_arith(a, a, ArithOp::inv); }

FieldElem pow(const FieldElem& a, std::uint64_t e) {
  const auto& f = *a.owner();
  if (a.is_zero()) return e == 0 ? FieldElem::one(a.owner()) : a;
  const std::uint64_t g = f.group_order();
  const std::uint64_t exp = (std::uint64_t(f.log[a.code()]) * (e % g)) % g;
  return {a.owner(), f.antilog[exp]};
}

FieldElem relative_trace(const FieldElem& x, unsigned subfield_degree) {
  const auto& f = *x.owner();
  if (subfield_degree == 0 || f.k != 3 * subfield_degree) {
    throw FieldError("relative trace needs field degree 3*" + std::to_string(subfield_degree) + ", got " +
                     std::to_string(f.k));
  }
  const std::uint64_t q = ipow(f.p, subfield_degree);
  const FieldElem xq = pow(x, q);
  const FieldElem tr = x + xq + pow(xq, q);
  if (!(pow(tr, q) == tr)) throw FieldError("trace left the subfield");  // table corruption
  return tr;
}

std::uint64_t multiplicative_order(const FieldElem& a) {
  if (a.is_zero()) throw FieldError("zero has no multiplicative order");
  const std::uint64_t g = a.owner()->group_order();
  return g / std::gcd(g, std::uint64_t(a.owner()->log[a.code()]));
}

std::uint64_t discrete_log(const FieldElem& gen, const FieldElem& y) {
  check_same_owner(gen, y);
  if (y.is_zero()) throw FieldError("discrete log of zero");
  if (gen.is_zero() || multiplicative_order(gen) != gen.owner()->group_order()) {
    throw FieldError("generator " + gen.to_string() + " is not primitive");
  }
  const auto& f = *gen.owner();
  const std::int64_t m = static_cast<std::int64_t>(f.group_order());
  // log_gen(y) = log_T(y) * log_T(gen)^{-1} mod m
  std::int64_t old_r = f.log[gen.code()], r = m, old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t t = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - t * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - t * s);
  }
  const std::int64_t inv = ((old_s % m) + m) % m;
  return static_cast<std::uint64_t>((static_cast<__int128>(f.log[y.code()]) * inv) % m);
}

}  // namespace a2k
