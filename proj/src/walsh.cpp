#include "hoplr/walsh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hoplr/parallel.hpp"

namespace hoplr::walsh {

namespace {

// b^{-e} for e >= 0.
double inv_power(std::uint32_t b, int e) { return std::pow(static_cast<double>(b), -e); }

// Sum over kappa = 1..b-1 of exp(2 pi i kappa xi / b).
double character_sum(std::uint32_t b, std::uint32_t xi) { return xi == 0 ? b - 1.0 : -1.0; }

void require_alpha_2_or_3(Smoothness alpha) {
  if (alpha.value() != 2 && alpha.value() != 3) {
    throw std::domain_error("closed forms are available for alpha in {2,3} only, got " +
                            std::to_string(alpha.value()));
  }
}

}  // namespace

DigitRational::DigitRational(std::uint64_t v, int n, const PrimeBase& base) : v_(v), n_(n), base_(base) {
  if (n < 0) throw std::invalid_argument("precision must be nonnegative");
  if (v >= base.power(n)) throw std::invalid_argument("numerator out of range for precision");
}

std::uint32_t DigitRational::digit(int i) const noexcept {
  if (i < 1 || i > n_) return 0;
  if (base_.is_binary()) return static_cast<std::uint32_t>((v_ >> (n_ - i)) & 1u);
  std::uint64_t w = v_;
  for (int k = 0; k < n_ - i; ++k) w /= base_.value();
  return static_cast<std::uint32_t>(w % base_.value());
}

int DigitRational::leading_position() const noexcept {
  if (v_ == 0) return 0;
  if (base_.is_binary()) return n_ - std::bit_width(v_) + 1;
  int len = 0;
  for (std::uint64_t w = v_; w > 0; w /= base_.value()) ++len;
  return n_ - len + 1;
}

double DigitRational::value() const noexcept {
  return static_cast<double>(v_) * inv_power(base_.value(), n_);
}

Smoothness::Smoothness(int alpha) : alpha_(alpha) {
  if (alpha < 2) throw std::invalid_argument("alpha must be >= 2, got " + std::to_string(alpha));
}

double r_alpha(std::uint64_t k, Smoothness alpha, const PrimeBase& base) {
  const std::uint32_t b = base.value();
  std::vector<int> positions;
  for (int a = 0; k > 0; ++a, k /= b) {
    if (k % b != 0) positions.push_back(a);
  }
  double r = 1.0;
  const int used = std::min<int>(alpha.value(), static_cast<int>(positions.size()));
  for (int i = 0; i < used; ++i) r *= inv_power(b, positions[positions.size() - 1 - i] + 1);
  return r;
}

std::complex<double> wal(std::uint64_t k, const DigitRational& x) {
  const std::uint32_t b = x.base().value();
  std::uint64_t e = 0;
  for (int a = 0; k > 0; ++a, k /= b) e += (k % b) * x.digit(a + 1);
  e %= b;
  if (e == 0) return {1.0, 0.0};
  if (b == 2) return {-1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / b);
}

// --- triangular sums ---

ProductIntegrand::ProductIntegrand(int factors, int positions)
    : r_(factors), n_(positions), values_(static_cast<std::size_t>(std::max(0, factors * positions)), 0.0) {
  if (factors < 0 || positions < 0) throw std::invalid_argument("negative integrand shape");
}

std::size_t ProductIntegrand::index(int factor, int position) const {
  if (factor < 1 || factor > r_ || position < 0 || position >= n_) {
    throw std::out_of_range("integrand index out of range");
  }
  return static_cast<std::size_t>(factor - 1) * n_ + position;
}

double triangular_sum(const ProductIntegrand& g) {
  const int r = g.factors();
  const int n = g.positions();
  if (r == 0) return 1.0;
  // V_t(a): partial sum with a_t = a over the outer variables a_1 > ... > a_t.
  std::vector<double> v(n);
  for (int a = 0; a < n; ++a) v[a] = g.at(1, a);
  for (int t = 2; t <= r; ++t) {
    double above = 0.0;
    for (int a = n - 1; a >= 0; --a) {
      const double outer = above;
      above += v[a];
      v[a] = g.at(t, a) * outer;
    }
  }
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

std::vector<double> triangular_sum_all(const ProductIntegrand& g) {
  const int r = g.factors();
  const int n = g.positions();
  std::vector<double> out(r, 0.0);
  if (r == 0) return out;
  // W_t(a): g_t(a) times the sum of W_{t+1} over positions below a.
  std::vector<double> w(n);
  for (int a = 0; a < n; ++a) w[a] = g.at(r, a);
  for (int t = r;; --t) {
    double total = 0.0;
    for (double x : w) total += x;
    out[t - 1] = total;
    if (t == 1) break;
    double below = 0.0;
    for (int a = 0; a < n; ++a) {
      const double inner = below;
      below += w[a];
      w[a] = g.at(t - 1, a) * inner;
    }
  }
  return out;
}

TailConstants tail_constants(const PrimeBase& base, Smoothness alpha, int n) {
  const long double b = base.value();
  const int a = alpha.value();
  TailConstants k;
  k.c.resize(a);
  k.c_bar.resize(a);
  long double c = 1.0L;
  long double c_bar = 0.0L;
  const long double shrink = std::pow(b, -static_cast<long double>(n));
  for (int t = 0; t < a; ++t) {
    if (t > 0) c *= shrink * (b - 1.0L) / (std::pow(b, static_cast<long double>(t)) - 1.0L);
    c_bar += c;
    k.c[t] = static_cast<double>(c);
    k.c_bar[t] = static_cast<double>(c_bar);
  }
  return k;
}

// --- kernel evaluators ---

double omega_zero(const PrimeBase& base, Smoothness alpha) {
  const long double b = base.value();
  const int a = alpha.value();
  long double prod = 1.0L;
  long double sum = 0.0L;
  for (int r = 1; r < a; ++r) {
    prod *= (b - 1.0L) / (std::pow(b, static_cast<long double>(r)) - 1.0L);
    sum += prod;
  }
  sum += (b - 1.0L) / (std::pow(b, static_cast<long double>(a)) - b) * prod;
  return static_cast<double>(sum);
}

double omega_digits(const DigitRational& x, Smoothness alpha) {
  const PrimeBase& base = x.base();
  const std::uint32_t b = base.value();
  const int n = x.precision();
  const int a = alpha.value();
  if (x.numerator() == 0) return omega_zero(base, alpha);

  const int beta = x.leading_position();
  std::vector<double> z(n);
  for (int pos = 0; pos < n; ++pos) z[pos] = x.digit(pos + 1) == 0 ? b - 1.0 : -1.0;

  ProductIntegrand plain(a - 1, n);
  ProductIntegrand tilde(a, n);
  for (int pos = 0; pos < n; ++pos) {
    const double f = inv_power(b, pos + 1) * z[pos];
    for (int i = 1; i < a; ++i) {
      plain.at(i, pos) = f;
      tilde.at(i, pos) = f;
    }
    tilde.at(a, pos) = pos < beta ? z[pos] / b : 0.0;
  }
  const std::vector<double> t = triangular_sum_all(plain);
  const std::vector<double> tt = triangular_sum_all(tilde);
  const TailConstants k = tail_constants(base, alpha, n);

  double omega = k.c_bar[a - 1] - 1.0;
  for (int i = 0; i <= a - 2; ++i) omega += k.c_bar[i] * t[i];
  for (int i = 0; i <= a - 1; ++i) omega += k.c[i] * tt[i];
  return omega;
}

std::vector<NonzeroDigit> nonzero_digits(const DigitRational& x) {
  std::vector<NonzeroDigit> out;
  for (int i = 1; i <= x.precision(); ++i) {
    const std::uint32_t d = x.digit(i);
    if (d != 0) out.push_back({i, d});
  }
  return out;
}

namespace {

struct DigitPowers {
  double s = 0.0;   // sum of b^{-a_j}
  double s2 = 0.0;  // sum of b^{-2 a_j}
};

DigitPowers digit_powers(std::span<const NonzeroDigit> digits, std::uint32_t b, int shift) {
  DigitPowers p;
  for (const auto& d : digits) {
    const double w = inv_power(b, d.position - shift);
    p.s += w;
    p.s2 += w * w;
  }
  return p;
}

double s1_of(const DigitPowers& p, double b) { return 1.0 - b * p.s; }

double s2_of(const DigitPowers& p, double b) {
  return 1.0 / (b + 1.0) - b * (b - 2.0) / 2.0 * (p.s * p.s - p.s2) - b * (b - 1.0) * (1.0 / (b - 1.0) - p.s) * p.s;
}

}  // namespace

double omega_nonzero_digits(std::span<const NonzeroDigit> digits, const PrimeBase& base, Smoothness alpha) {
  require_alpha_2_or_3(alpha);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i].position < 1 || digits[i].digit == 0 || digits[i].digit >= base.value() ||
        (i > 0 && digits[i].position <= digits[i - 1].position)) {
      throw std::invalid_argument("nonzero digit list must have increasing positions and digits in 1..b-1");
    }
  }
  const double b = base.value();
  const DigitPowers p = digit_powers(digits, base.value(), 0);
  const double s1 = s1_of(p, b);

  if (alpha.value() == 2) {
    if (digits.empty()) return s1 + 1.0 / b;
    const int A = digits.front().position;
    const double tilde_s2 = 1.0 / b - 2.0 * inv_power(base.value(), A) - inv_power(base.value(), A + 1) -
                            (A * b - A - b) * p.s;
    return s1 + tilde_s2;
  }

  const double s2 = s2_of(p, b);
  if (digits.empty()) return s1 + s2 + 1.0 / (b * (b + 1.0) * (b + 1.0));

  const int A = digits.front().position;
  const int K = A - 1;
  const double sq = p.s * p.s;
  const double head = (1.0 - inv_power(base.value(), 2 * K)) / ((b + 1.0) * (b * b - 1.0)) -
                      K * b * (b - 2.0) / 2.0 * (sq - p.s2) -
                      p.s * b * (1.0 - inv_power(base.value(), K)) / (b - 1.0) + K * b * (b - 1.0) * sq;
  const DigitPowers rest = digit_powers(digits.subspan(1), base.value(), A);
  const double tilde_s3 = (b - 1.0) / b * head - inv_power(base.value(), 2 * A + 1) * s2_of(rest, b);
  return s1 + s2 + tilde_s3;
}

double omega_nonzero_digits(const DigitRational& x, Smoothness alpha) {
  const auto digits = nonzero_digits(x);
  return omega_nonzero_digits(digits, x.base(), alpha);
}

namespace {

double base2_formula(double x, int a1, Smoothness alpha) {
  const double t1 = a1 == 0 ? 0.0 : std::ldexp(1.0, -a1);
  const double t2 = t1 * t1;
  const double s1 = 1.0 - 2.0 * x;
  if (alpha.value() == 2) return s1 + (1.0 - 5.0 * t1) / 2.0 + (2.0 - a1) * x;
  const double s2 = 1.0 / 3.0 - 2.0 * (1.0 - x) * x;
  const double tilde_s3 = (1.0 - 43.0 * t2) / 18.0 + (5.0 * t1 - 1.0) * x - (2.0 - a1) * x * x;
  return s1 + s2 + tilde_s3;
}

}  // namespace

double omega_base2(double x, Smoothness alpha) {
  require_alpha_2_or_3(alpha);
  if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("x must lie in [0, 1)");
  if (x == 0.0) return base2_formula(0.0, 0, alpha);
  int e = 0;
  std::frexp(x, &e);
  return base2_formula(x, 1 - e, alpha);
}

double omega_base2(const DigitRational& x, Smoothness alpha) {
  require_alpha_2_or_3(alpha);
  if (!x.base().is_binary()) throw std::domain_error("base-2 formulas need b = 2");
  return base2_formula(x.value(), x.leading_position(), alpha);
}

// --- series oracle ---

SeriesEstimate omega_series(const DigitRational& x, Smoothness alpha, int truncation_digits) {
  if (truncation_digits < x.precision()) throw std::invalid_argument("truncation must cover the precision of x");
  const std::uint32_t b = x.base().value();
  const int a = alpha.value();
  // dp[c]: signed weight of all digit prefixes (positions above the current
  // one) that contain c counted nonzero digits, capped at alpha.
  std::vector<double> dp(a + 1, 0.0);
  dp[0] = 1.0;
  for (int pos = truncation_digits - 1; pos >= 0; --pos) {
    const double chi = character_sum(b, x.digit(pos + 1));
    const double w = inv_power(b, pos + 1);
    std::vector<double> next(dp);
    for (int c = 0; c <= a; ++c) {
      if (dp[c] == 0.0) continue;
      const int to = std::min(c + 1, a);
      next[to] += dp[c] * chi * (c < a ? w : 1.0);
    }
    dp.swap(next);
  }
  double total = -1.0;
  for (double v : dp) total += v;
  return {total, series_tail_bound(x.base(), alpha, truncation_digits)};
}

double r_alpha_partial_sum(const PrimeBase& base, Smoothness alpha, int truncation_digits) {
  return omega_series(DigitRational(0, 0, base), alpha, truncation_digits).value;
}

double series_tail_bound(const PrimeBase& base, Smoothness alpha, int truncation_digits) {
  const double b = base.value();
  const int a = alpha.value();
  // prefix[j] = sum_{a' < A} G_j(a'), where G_j(A) = (b-1) b^{-(A+1)} F_{j-1}(A)
  // and F_j(A) = 1 + prefix[j] weighs all k < b^A with j counted digits left.
  std::vector<double> prefix(a + 1, 0.0);
  double tail = 0.0;
  const int limit = truncation_digits + 4000;
  for (int A = 0; A < limit; ++A) {
    std::vector<double> g(a + 1, 0.0);
    g[1] = (b - 1.0) / b;
    for (int j = 2; j <= a; ++j) g[j] = (b - 1.0) * std::pow(b, -(A + 1.0)) * (1.0 + prefix[j - 1]);
    if (A >= truncation_digits) {
      tail += g[a];
      if (A > truncation_digits + 4 * a && g[a] <= 1e-18 * tail) {
        // Beyond this point consecutive terms shrink by a factor below 2/3.
        return tail + 2.0 * g[a];
      }
    }
    for (int j = 1; j <= a; ++j) prefix[j] += g[j];
  }
  return tail;
}

KernelRoute parse_route(std::string_view name) {
  if (name == "digits") return KernelRoute::digits;
  if (name == "closed") return KernelRoute::closed;
  if (name == "base2") return KernelRoute::base2;
  if (name == "series") return KernelRoute::series;
  if (name == "auto") return KernelRoute::automatic;
  throw std::invalid_argument("unknown kernel route '" + std::string(name) + "'");
}

double omega(const DigitRational& x, Smoothness alpha, KernelRoute route) {
  switch (route) {
    case KernelRoute::automatic:
      if (x.base().is_binary() && alpha.value() <= 3) return omega_base2(x, alpha);
      return omega_digits(x, alpha);
    case KernelRoute::digits:
      return omega_digits(x, alpha);
    case KernelRoute::closed:
      return omega_nonzero_digits(x, alpha);
    case KernelRoute::base2:
      return omega_base2(x, alpha);
    case KernelRoute::series:
      return omega_series(x, alpha, x.precision() + 12).value;
  }
  throw std::logic_error("unreachable kernel route");
}

KernelTable::KernelTable(const gf::Modulus& modulus, const gf::ExpTable& exp, Smoothness alpha, KernelRoute route)
    : values_(exp.order()), zero_(omega(DigitRational(0, modulus.degree(), modulus.base()), alpha, route)) {
  const int n = modulus.degree();
  const PrimeBase base = modulus.base();
  parallel_for(values_.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) {
      const std::uint64_t v = gf::vn_map(exp.exp(d), modulus, n);
      values_[d] = omega(DigitRational(v, n, base), alpha, route);
    }
  });
}

}  // namespace hoplr::walsh
