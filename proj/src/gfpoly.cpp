#include "hoplr/gfpoly.hpp"

#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace hoplr::gf {

namespace {

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

}  // namespace

PrimeBase::PrimeBase(std::uint32_t b) : b_(b) {
  if (b > kMaxBase || !is_prime(b)) {
    throw std::invalid_argument("base " + std::to_string(b) + " is not a supported prime");
  }
}

std::uint32_t PrimeBase::inverse(std::uint32_t a) const {
  a %= b_;
  if (a == 0) throw std::domain_error("inverse of zero in F_b");
  // Fermat: a^(b-2).
  std::uint64_t result = 1, x = a;
  for (std::uint32_t e = b_ - 2; e != 0; e >>= 1) {
    if (e & 1u) result = result * x % b_;
    x = x * x % b_;
  }
  return static_cast<std::uint32_t>(result);
}

std::uint64_t PrimeBase::power(int e) const {
  if (e < 0) throw std::domain_error("negative exponent");
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / b_) throw std::overflow_error("b^e does not fit in 63 bits");
    r *= b_;
  }
  return r;
}

// --- Poly ------------------------------------------------------------------

Poly::Poly(std::vector<std::uint32_t> coeffs, const PrimeBase& base) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c %= base.value();
  normalize();
}

void Poly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::from_code(PolyCode code, const PrimeBase& base) {
  std::vector<std::uint32_t> c;
  const std::uint32_t b = base.value();
  while (code != 0) {
    c.push_back(static_cast<std::uint32_t>(code % b));
    code /= b;
  }
  Poly p;
  p.coeffs_ = std::move(c);
  return p;
}

Poly Poly::monomial(int degree, std::uint32_t coeff, const PrimeBase& base) {
  std::vector<std::uint32_t> c(static_cast<std::size_t>(degree) + 1, 0);
  c.back() = coeff;
  return Poly(std::move(c), base);
}

PolyCode Poly::code(const PrimeBase& base) const {
  PolyCode r = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * base.value() + *it;
  return r;
}

Poly add(const Poly& a, const Poly& b, const PrimeBase& base) {
  const auto n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<std::uint32_t> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = (a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i))) % base.value();
  }
  return Poly(std::move(c), base);
}

Poly sub(const Poly& a, const Poly& b, const PrimeBase& base) {
  const auto n = std::max(a.coeffs().size(), b.coeffs().size());
  const std::uint32_t q = base.value();
  std::vector<std::uint32_t> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = (a.coeff(static_cast<int>(i)) + q - b.coeff(static_cast<int>(i))) % q;
  }
  return Poly(std::move(c), base);
}

Poly mul(const Poly& a, const Poly& b, const PrimeBase& base) {
  if (a.is_zero() || b.is_zero()) return {};
  const std::uint64_t q = base.value();
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  std::vector<std::uint64_t> acc(ac.size() + bc.size() - 1, 0);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    for (std::size_t j = 0; j < bc.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t{ac[i]} * bc[j]) % q;
  }
  return Poly(std::vector<std::uint32_t>(acc.begin(), acc.end()), base);
}

Poly mod(const Poly& a, const Poly& m, const PrimeBase& base) {
  if (m.is_zero()) throw std::domain_error("polynomial division by zero");
  const std::uint64_t q = base.value();
  std::vector<std::uint32_t> r(a.coeffs().begin(), a.coeffs().end());
  const int dm = m.degree();
  const std::uint64_t inv_lead = base.inverse(m.leading());
  for (int i = static_cast<int>(r.size()) - 1; i >= dm; --i) {
    const std::uint64_t f = r[i] * inv_lead % q;
    if (f == 0) continue;
    for (int j = 0; j <= dm; ++j) {
      r[i - dm + j] = static_cast<std::uint32_t>((r[i - dm + j] + q * q - f * m.coeff(j)) % q);
    }
  }
  if (static_cast<int>(r.size()) > dm) r.resize(static_cast<std::size_t>(dm));
  return Poly(std::move(r), base);
}

Poly gcd(Poly a, Poly b, const PrimeBase& base) {
  while (!b.is_zero()) {
    Poly r = mod(a, b, base);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  // Normalize to monic.
  const std::uint64_t inv = base.inverse(a.leading());
  std::vector<std::uint32_t> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& x : c) x = static_cast<std::uint32_t>(x * inv % base.value());
  return Poly(std::move(c), base);
}

int degree_of(PolyCode code, const PrimeBase& base) {
  if (code == 0) return kZeroDegree;
  if (base.is_binary()) return std::bit_width(code) - 1;
  int d = -1;
  while (code != 0) {
    code /= base.value();
    ++d;
  }
  return d;
}

// --- F_2 fast path -------------------------------------------------------------

namespace binary {

PolyCode add(PolyCode a, PolyCode b) noexcept { return a ^ b; }

PolyCode mod(PolyCode a, PolyCode p) noexcept {
  const int dp = std::bit_width(p) - 1;
  while (a != 0) {
    const int da = std::bit_width(a) - 1;
    if (da < dp) break;
    a ^= p << (da - dp);
  }
  return a;
}

PolyCode mulmod(PolyCode a, PolyCode b, PolyCode p) noexcept {
  const PolyCode top = std::bit_floor(p);
  PolyCode r = 0;
  while (b != 0) {
    if (b & 1u) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= p;
  }
  return r;
}

std::uint64_t vn_map(PolyCode w, PolyCode p, int digits) noexcept {
  const PolyCode top = std::bit_floor(p);
  std::uint64_t v = 0;
  for (int i = 0; i < digits; ++i) {
    w <<= 1;
    const bool u = (w & top) != 0;
    if (u) w ^= p;
    v = (v << 1) | static_cast<std::uint64_t>(u);
  }
  return v;
}

namespace {
PolyCode gcd(PolyCode a, PolyCode b) noexcept {
  while (b != 0) {
    const PolyCode r = mod(a, b);
    a = b;
    b = r;
  }
  return a;
}
}  // namespace

bool is_irreducible(PolyCode p) noexcept {
  const int n = std::bit_width(p) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  const PolyCode x = 2;
  PolyCode h = x;
  for (int i = 1; i <= n / 2; ++i) {
    h = mulmod(h, h, p);
    if (gcd(p, h ^ x) != 1) return false;
  }
  return true;
}

}  // namespace binary

// --- generic path ----------------------------------------------------------------

namespace generic {

PolyCode add(PolyCode a, PolyCode b, const PrimeBase& base) {
  return gf::add(Poly::from_code(a, base), Poly::from_code(b, base), base).code(base);
}

PolyCode mulmod(PolyCode a, PolyCode b, PolyCode p, const PrimeBase& base) {
  const Poly pm = Poly::from_code(p, base);
  return mod(mul(Poly::from_code(a, base), Poly::from_code(b, base), base), pm, base).code(base);
}

std::vector<std::uint32_t> laurent_digits(PolyCode w, PolyCode p, int count, const PrimeBase& base) {
  const std::uint64_t q = base.value();
  const Poly pm = Poly::from_code(p, base);
  const int n = pm.degree();
  const std::uint64_t inv_lead = base.inverse(pm.leading());
  // Remainder kept as a dense vector of n+1 coefficients.
  std::vector<std::uint64_t> r(static_cast<std::size_t>(n) + 1, 0);
  {
    const Poly wp = Poly::from_code(w, base);
    for (int i = 0; i <= wp.degree(); ++i) r[i] = wp.coeff(i);
  }
  std::vector<std::uint32_t> u(static_cast<std::size_t>(count));
  for (int step = 0; step < count; ++step) {
    for (int i = n; i > 0; --i) r[i] = r[i - 1];
    r[0] = 0;
    const std::uint64_t d = r[n] * inv_lead % q;
    if (d != 0) {
      for (int j = 0; j <= n; ++j) r[j] = (r[j] + q * q - d * pm.coeff(j)) % q;
    }
    u[step] = static_cast<std::uint32_t>(d);
  }
  return u;
}

std::uint64_t vn_map(PolyCode w, PolyCode p, int digits, const PrimeBase& base) {
  std::uint64_t v = 0;
  for (const auto d : laurent_digits(w, p, digits, base)) v = v * base.value() + d;
  return v;
}

bool is_irreducible(PolyCode p, const PrimeBase& base) {
  const Poly pm = Poly::from_code(p, base);
  const int n = pm.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  const Poly x = Poly::monomial(1, 1, base);
  Poly h = mod(x, pm, base);
  for (int i = 1; i <= n / 2; ++i) {
    // h <- h^b mod p
    Poly acc = Poly::monomial(0, 1, base);
    for (std::uint32_t k = 0; k < base.value(); ++k) acc = mod(mul(acc, h, base), pm, base);
    h = std::move(acc);
    if (gcd(pm, sub(h, x, base), base).degree() != 0) return false;
  }
  return true;
}

}  // namespace generic

// --- dispatching API ---------------------------------------------------------------

Modulus::Modulus(PolyCode p, const PrimeBase& base) : base_(base), code_(p), n_(degree_of(p, base)) {
  if (p == 0 || n_ < 1) throw std::invalid_argument("modulus must have degree >= 1");
  if (!is_irreducible(p, base)) {
    throw std::invalid_argument("modulus " + std::to_string(p) + " is reducible over F_" +
                                std::to_string(base.value()));
  }
  size_ = base.power(n_);
}

PolyCode poly_add(PolyCode a, PolyCode b, const PrimeBase& base) {
  return base.is_binary() ? binary::add(a, b) : generic::add(a, b, base);
}

PolyCode poly_mulmod(PolyCode a, PolyCode b, const Modulus& m) {
  return m.base().is_binary() ? binary::mulmod(a, b, m.code()) : generic::mulmod(a, b, m.code(), m.base());
}

PolyCode poly_powmod(PolyCode a, std::uint64_t e, const Modulus& m) {
  PolyCode r = 1;
  while (e != 0) {
    if (e & 1u) r = poly_mulmod(r, a, m);
    a = poly_mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_irreducible(PolyCode p, const PrimeBase& base) {
  return base.is_binary() ? binary::is_irreducible(p) : generic::is_irreducible(p, base);
}

Modulus find_irreducible(int n, const PrimeBase& base) {
  if (n < 1) throw std::invalid_argument("degree must be >= 1");
  const PolyCode lo = base.power(n);
  const PolyCode hi = lo * 2;  // monic candidates come first
  for (PolyCode p = lo; p < hi; ++p) {
    if (is_irreducible(p, base)) return Modulus(p, base);
  }
  throw std::logic_error("no monic irreducible found");  // unreachable: they exist for all n
}

const std::vector<std::uint64_t>& prime_factors(std::uint64_t v) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::vector<std::uint64_t>> cache;
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.try_emplace(v);
  if (inserted) {
    std::uint64_t x = v;
    for (std::uint64_t d = 2; d * d <= x; ++d) {
      if (x % d == 0) {
        it->second.push_back(d);
        while (x % d == 0) x /= d;
      }
    }
    if (x > 1) it->second.push_back(x);
  }
  return it->second;
}

bool is_generator(PolyCode g, const Modulus& m) {
  if (g == 0 || degree_of(g, m.base()) >= m.degree()) return false;
  const std::uint64_t order = m.group_order();
  if (poly_powmod(g, order, m) != 1) return false;
  for (const auto r : prime_factors(order)) {
    if (poly_powmod(g, order / r, m) == 1) return false;
  }
  return true;
}

PolyCode find_generator(const Modulus& m) {
  for (PolyCode g = 1; g < m.field_size(); ++g) {
    if (is_generator(g, m)) return g;
  }
  throw std::logic_error("multiplicative group has no generator");  // unreachable for irreducible p
}

ExpTable::ExpTable(const Modulus& m, PolyCode g) : g_(g) {
  const std::uint64_t order = m.group_order();
  if (m.field_size() > (std::uint64_t{1} << 32)) throw std::length_error("exp table larger than 2^32 entries");
  if (!is_generator(g, m)) throw std::invalid_argument("not a generator of the multiplicative group");
  exp_.resize(order);
  log_.assign(m.field_size(), kNoLog);
  PolyCode t = 1;
  const bool bin = m.base().is_binary();
  const PolyCode top = std::bit_floor(m.code());
  for (std::uint64_t d = 0; d < order; ++d) {
    exp_[d] = t;
    log_[t] = static_cast<std::uint32_t>(d);
    if (bin && g == 2) {
      t <<= 1;
      if (t & top) t ^= m.code();
    } else {
      t = poly_mulmod(t, g, m);
    }
  }
}

std::uint64_t vn_map(PolyCode w, const Modulus& m, int digits) {
  return m.base().is_binary() ? binary::vn_map(w, m.code(), digits) : generic::vn_map(w, m.code(), digits, m.base());
}

std::vector<std::uint32_t> laurent_digits(PolyCode w, const Modulus& m, int count) {
  if (!m.base().is_binary()) return generic::laurent_digits(w, m.code(), count, m.base());
  std::vector<std::uint32_t> u(static_cast<std::size_t>(count));
  const PolyCode top = std::bit_floor(m.code());
  for (auto& d : u) {
    w <<= 1;
    d = (w & top) != 0 ? 1u : 0u;
    if (d != 0) w ^= m.code();
  }
  return u;
}

}  // namespace hoplr::gf
