#pragma once

// Polynomials over the prime field F_b.
//
// A polynomial is identified with its canonical integer code, the value of
// the polynomial evaluated at X = b. For b = 2 this is the usual bit-packed
// representation and every operation has a bitwise fast path; the generic
// digit-vector path is kept for all other primes and is required to agree
// with the fast path bit for bit.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace hoplr::gf {

using PolyCode = std::uint64_t;

/// Degree reported for the zero polynomial (stands in for -infinity).
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

/// A small prime base b. Construction throws std::invalid_argument if b is
/// not prime or is larger than kMaxBase.
class PrimeBase {
 public:
  static constexpr std::uint32_t kMaxBase = 65521;

  explicit PrimeBase(std::uint32_t b);

  std::uint32_t value() const noexcept { return b_; }
  bool is_binary() const noexcept { return b_ == 2; }

  /// Multiplicative inverse of a nonzero residue.
  std::uint32_t inverse(std::uint32_t a) const;

  /// b^e, throwing std::overflow_error if it does not fit in 63 bits.
  std::uint64_t power(int e) const;

  friend bool operator==(const PrimeBase&, const PrimeBase&) = default;

 private:
  std::uint32_t b_;
};

/// Dense coefficient form, least significant coefficient first, normalized
/// (no trailing zero coefficients).
class Poly {
 public:
  Poly() = default;
  Poly(std::vector<std::uint32_t> coeffs, const PrimeBase& base);

  static Poly from_code(PolyCode code, const PrimeBase& base);
  static Poly monomial(int degree, std::uint32_t coeff, const PrimeBase& base);

  PolyCode code(const PrimeBase& base) const;
  int degree() const noexcept {
    return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
  }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::uint32_t coeff(int i) const noexcept {
    return i >= 0 && static_cast<std::size_t>(i) < coeffs_.size() ? coeffs_[i] : 0;
  }
  std::uint32_t leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
  std::span<const std::uint32_t> coeffs() const noexcept { return coeffs_; }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void normalize();
  std::vector<std::uint32_t> coeffs_;
};

Poly add(const Poly& a, const Poly& b, const PrimeBase& base);
Poly sub(const Poly& a, const Poly& b, const PrimeBase& base);
Poly mul(const Poly& a, const Poly& b, const PrimeBase& base);
Poly mod(const Poly& a, const Poly& m, const PrimeBase& base);
Poly gcd(Poly a, Poly b, const PrimeBase& base);

int degree_of(PolyCode code, const PrimeBase& base);

/// Bitwise implementations for F_2. Codes are plain bit masks.
namespace binary {
PolyCode add(PolyCode a, PolyCode b) noexcept;
PolyCode mulmod(PolyCode a, PolyCode b, PolyCode p) noexcept;
PolyCode mod(PolyCode a, PolyCode p) noexcept;
std::uint64_t vn_map(PolyCode w, PolyCode p, int digits) noexcept;
bool is_irreducible(PolyCode p) noexcept;
}  // namespace binary

/// Digit-vector implementations, valid for any prime base including 2.
namespace generic {
PolyCode add(PolyCode a, PolyCode b, const PrimeBase& base);
PolyCode mulmod(PolyCode a, PolyCode b, PolyCode p, const PrimeBase& base);
std::uint64_t vn_map(PolyCode w, PolyCode p, int digits, const PrimeBase& base);
std::vector<std::uint32_t> laurent_digits(PolyCode w, PolyCode p, int count, const PrimeBase& base);
bool is_irreducible(PolyCode p, const PrimeBase& base);
}  // namespace generic

/// An irreducible modulus p(X) of degree n. The irreducibility certificate
/// is established at construction, so holding a Modulus means p is valid.
class Modulus {
 public:
  /// Throws std::invalid_argument if p is reducible or has degree < 1.
  Modulus(PolyCode p, const PrimeBase& base);

  PolyCode code() const noexcept { return code_; }
  int degree() const noexcept { return n_; }
  const PrimeBase& base() const noexcept { return base_; }
  /// b^n, the number of residues modulo p.
  std::uint64_t field_size() const noexcept { return size_; }
  /// b^n - 1, the order of the multiplicative group G_{b,n}.
  std::uint64_t group_order() const noexcept { return size_ - 1; }

 private:
  PrimeBase base_;
  PolyCode code_;
  int n_;
  std::uint64_t size_;
};

PolyCode poly_add(PolyCode a, PolyCode b, const PrimeBase& base);

/// (a * b) mod p. Requires deg(a), deg(b) < deg(p).
PolyCode poly_mulmod(PolyCode a, PolyCode b, const Modulus& m);

PolyCode poly_powmod(PolyCode a, std::uint64_t e, const Modulus& m);

/// Ben-Or test: p is irreducible iff gcd(X^{b^i} - X, p) = 1 for 1 <= i <= n/2.
bool is_irreducible(PolyCode p, const PrimeBase& base);

/// The irreducible polynomial of degree n with the smallest code.
Modulus find_irreducible(int n, const PrimeBase& base);

/// Distinct prime factors of v, ascending. Results are memoized.
const std::vector<std::uint64_t>& prime_factors(std::uint64_t v);

/// True iff g has multiplicative order exactly b^n - 1 modulo p.
bool is_generator(PolyCode g, const Modulus& m);

/// Smallest-code generator of (F_b[X]/p)^x.
PolyCode find_generator(const Modulus& m);

/// Powers of a generator: exp[δ] = g^δ mod p for δ = 0..b^n-2, together
/// with the inverse map log[w] = δ for every nonzero residue w.
class ExpTable {
 public:
  static constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

  ExpTable(const Modulus& m, PolyCode g);

  PolyCode generator() const noexcept { return g_; }
  std::uint64_t order() const noexcept { return exp_.size(); }
  PolyCode exp(std::uint64_t delta) const noexcept { return exp_[delta % exp_.size()]; }
  /// Exponent of a nonzero residue; kNoLog for w = 0.
  std::uint32_t log(PolyCode w) const noexcept { return log_[w]; }
  std::span<const PolyCode> exps() const noexcept { return exp_; }

 private:
  PolyCode g_;
  std::vector<PolyCode> exp_;
  std::vector<std::uint32_t> log_;
};

/// Numerator v of v_n(w/p) = v / b^digits, read off the first `digits`
/// coefficients of the Laurent expansion of w/p. Requires deg(w) < deg(p).
std::uint64_t vn_map(PolyCode w, const Modulus& m, int digits);

/// Laurent coefficients u_1..u_count of w/p.
std::vector<std::uint32_t> laurent_digits(PolyCode w, const Modulus& m, int count);

}  // namespace hoplr::gf
