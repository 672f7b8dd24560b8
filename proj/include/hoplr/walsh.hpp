#pragma once

// The one-dimensional Walsh kernel
//
//   omega_alpha(x) = sum_{k >= 1} r_alpha(k) wal_k(x)
//
// that appears in the product form of the worst-case error. Several
// independent evaluators are provided:
//
//   omega_digits          O(alpha n) digit algorithm for x = v / b^n, built on
//                         triangular sums over digit positions.
//   omega_nonzero_digits  closed forms in the nonzero digits of x, alpha in {2,3}.
//   omega_base2           explicit b = 2 formulas, alpha in {2,3}.
//   omega_series          the defining series truncated to k < b^K, with a
//                         bound on the omitted part.
//
// The kernel is real for every prime base: sum_{kappa=1}^{b-1} of the digit
// characters is b-1 or -1.

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hoplr/gfpoly.hpp"

namespace hoplr::walsh {

using gf::PrimeBase;

/// x = v / b^n with 0 <= v < b^n.
class DigitRational {
 public:
  DigitRational(std::uint64_t v, int n, const PrimeBase& base);

  std::uint64_t numerator() const noexcept { return v_; }
  int precision() const noexcept { return n_; }
  const PrimeBase& base() const noexcept { return base_; }

  /// Digit xi_i of x = (0.xi_1 xi_2 ...)_b, 1-based; zero beyond the precision.
  std::uint32_t digit(int i) const noexcept;
  /// Position of the first nonzero digit (1-based); 0 when x = 0.
  int leading_position() const noexcept;
  double value() const noexcept;

 private:
  std::uint64_t v_;
  int n_;
  PrimeBase base_;
};

/// Smoothness alpha >= 2.
class Smoothness {
 public:
  explicit Smoothness(int alpha);
  int value() const noexcept { return alpha_; }

 private:
  int alpha_;
};

/// r_alpha(k): b^{-(a_1+1)} ... b^{-(a_t+1)} over the top min(#k, alpha)
/// nonzero digit positions of k; r_alpha(0) = 1.
double r_alpha(std::uint64_t k, Smoothness alpha, const PrimeBase& base);

/// wal_k(x) in base b.
std::complex<double> wal(std::uint64_t k, const DigitRational& x);

// --- triangular sums -----------------------------------------------------

/// A product-form integrand g_1(a_1) ... g_r(a_r) sampled at positions
/// 0..n-1. Factor indices are 1-based to match the summation variables.
class ProductIntegrand {
 public:
  ProductIntegrand(int factors, int positions);

  int factors() const noexcept { return r_; }
  int positions() const noexcept { return n_; }
  double& at(int factor, int position) { return values_[index(factor, position)]; }
  double at(int factor, int position) const { return values_[index(factor, position)]; }

 private:
  std::size_t index(int factor, int position) const;
  int r_;
  int n_;
  std::vector<double> values_;
};

/// Sum of g_1(a_1)...g_r(a_r) over n-1 >= a_1 > a_2 > ... > a_r >= 0, in O(nr).
/// r = 0 gives 1; r > n gives the empty sum 0.
double triangular_sum(const ProductIntegrand& g);

/// All suffix sums S_t = sum over n-1 >= a_t > ... > a_r >= 0 of
/// g_t(a_t)...g_r(a_r), t = 1..r, in a single O(nr) pass. Element t-1 holds S_t.
std::vector<double> triangular_sum_all(const ProductIntegrand& g);

/// Tail constants of the digit algorithm for precision n:
/// C_t = b^{-nt} prod_{i=1}^t (b-1)/(b^i-1) for t = 0..alpha-1, and their
/// prefix sums. Accumulated in extended precision.
struct TailConstants {
  std::vector<double> c;
  std::vector<double> c_bar;
};
TailConstants tail_constants(const PrimeBase& base, Smoothness alpha, int n);

// --- kernel evaluators ------------------------------------------------------

/// omega_alpha(0) in closed form.
double omega_zero(const PrimeBase& base, Smoothness alpha);

double omega_digits(const DigitRational& x, Smoothness alpha);

/// One nonzero digit of x: x contains digit * b^{-position}.
struct NonzeroDigit {
  int position;
  std::uint32_t digit;
};

std::vector<NonzeroDigit> nonzero_digits(const DigitRational& x);

/// Closed forms in the nonzero digits of x (positions strictly increasing).
/// Throws std::domain_error unless alpha is 2 or 3.
double omega_nonzero_digits(std::span<const NonzeroDigit> digits, const PrimeBase& base, Smoothness alpha);
double omega_nonzero_digits(const DigitRational& x, Smoothness alpha);

/// Explicit base-2 formulas; valid for any real x in [0, 1).
/// Throws std::domain_error unless alpha is 2 or 3.
double omega_base2(double x, Smoothness alpha);
/// Exact-input variant for b = 2 digit rationals.
double omega_base2(const DigitRational& x, Smoothness alpha);

struct SeriesEstimate {
  double value;
  /// Upper bound on |sum_{k >= b^K} r_alpha(k) wal_k(x)|.
  double tail_bound;
};

/// sum_{k=1}^{b^K - 1} r_alpha(k) wal_k(x). Requires K >= x.precision().
SeriesEstimate omega_series(const DigitRational& x, Smoothness alpha, int truncation_digits);

/// sum_{k=1}^{b^K - 1} r_alpha(k).
double r_alpha_partial_sum(const PrimeBase& base, Smoothness alpha, int truncation_digits);

/// sum_{k >= b^K} r_alpha(k), which bounds the series tail for every x.
double series_tail_bound(const PrimeBase& base, Smoothness alpha, int truncation_digits);

enum class KernelRoute { automatic, digits, closed, base2, series };

KernelRoute parse_route(std::string_view name);

/// Evaluate with the requested route. `automatic` picks base2 for b = 2 and
/// alpha in {2,3}, otherwise the digit algorithm. The series route uses
/// truncation n + 12.
double omega(const DigitRational& x, Smoothness alpha, KernelRoute route = KernelRoute::automatic);

// --- kernel table for the fast construction --------------------------------------

/// omega indexed by generator exponent: values[δ] = omega(v_n(g^δ mod p / p)).
class KernelTable {
 public:
  KernelTable(const gf::Modulus& modulus, const gf::ExpTable& exp, Smoothness alpha,
              KernelRoute route = KernelRoute::automatic);

  std::span<const double> values() const noexcept { return values_; }
  double at(std::uint64_t delta) const noexcept { return values_[delta]; }
  /// The h = 0 term, omega_alpha(0).
  double at_zero() const noexcept { return zero_; }

 private:
  std::vector<double> values_;
  double zero_;
};

}  // namespace hoplr::walsh
