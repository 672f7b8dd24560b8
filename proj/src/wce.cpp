#include "hoplr/wce.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hoplr/parallel.hpp"

namespace hoplr {

double mean_excess(std::span<const double> products) {
  if (products.empty()) return 0.0;
  std::vector<double> excess(products.size());
  for (std::size_t h = 0; h < products.size(); ++h) excess[h] = products[h] - 1.0;
  return pairwise_sum(excess) / static_cast<double>(products.size());
}

std::vector<double> wce_prefix_errors(const PointSet& points, walsh::Smoothness alpha,
                                      std::span<const double> gamma) {
  if (gamma.size() < static_cast<std::size_t>(points.s)) throw std::invalid_argument("fewer weights than dimensions");
  const gf::PrimeBase base(points.b);
  const std::uint64_t count = points.count();
  std::vector<double> prod(count, 1.0);
  std::vector<double> errors;
  for (int j = 0; j < points.s; ++j) {
    const double g = gamma[j];
    parallel_for(count, [&](std::size_t begin, std::size_t end) {
      for (std::size_t h = begin; h < end; ++h) {
        const walsh::DigitRational x(points.numerator(h, j), points.n, base);
        prod[h] *= 1.0 + g * walsh::omega(x, alpha);
      }
    });
    errors.push_back(mean_excess(prod));
  }
  return errors;
}

double wce_product(const PointSet& points, walsh::Smoothness alpha, std::span<const double> gamma) {
  const auto e = wce_prefix_errors(points, alpha, gamma);
  return e.empty() ? 0.0 : e.back();
}

DualSum wce_dual_bruteforce(const gf::Modulus& modulus, std::span<const gf::PolyCode> q, int m,
                            walsh::Smoothness alpha, std::span<const double> gamma, int truncation_digits,
                            std::uint64_t max_terms) {
  const gf::PrimeBase& base = modulus.base();
  const int n = modulus.degree();
  const int s = static_cast<int>(q.size());
  const int K = truncation_digits;
  if (gamma.size() < q.size()) throw std::invalid_argument("fewer weights than dimensions");
  if (m < 0 || m > n) throw std::invalid_argument("m must lie in [0, deg p]");
  if (K < n) throw std::invalid_argument("truncation must keep at least n digits");
  const double k_terms = std::pow(static_cast<double>(base.value()), K);
  const double tuples = std::pow(static_cast<double>(modulus.field_size()), s);
  if (k_terms > static_cast<double>(max_terms) || tuples > static_cast<double>(max_terms)) {
    throw BudgetExceeded("dual enumeration needs b^K = " + std::to_string(k_terms) + " frequencies and b^(ns) = " +
                         std::to_string(tuples) + " residue tuples; limit " + std::to_string(max_terms));
  }
  if (s == 0) return {0.0, 0.0};

  // r[k] for 1 <= k < b^K, grouped by the residue k mod b^n.
  const std::uint64_t freq = base.power(K);
  const std::uint64_t residues = modulus.field_size();
  std::vector<double> grouped(residues, 0.0);
  double partial = 0.0;
  for (std::uint64_t k = 1; k < freq; ++k) {
    const double r = walsh::r_alpha(k, alpha, base);
    grouped[k % residues] += r;
    partial += r;
  }
  std::vector<std::vector<double>> weight(s, std::vector<double>(residues));
  for (int j = 0; j < s; ++j) {
    for (std::uint64_t t = 0; t < residues; ++t) weight[j][t] = gamma[j] * grouped[t];
    weight[j][0] += 1.0;  // k_j = 0
  }

  const gf::PolyCode small = base.power(n - m);  // codes of degree < n - m
  double total = 0.0;
  // Depth-first over residue tuples, carrying sum_j t_j q_j mod p.
  auto visit = [&](auto&& self, int j, gf::PolyCode acc, double w) -> void {
    if (j == s) {
      if (acc < small) total += w;
      return;
    }
    for (std::uint64_t t = 0; t < residues; ++t) {
      const double wj = weight[j][t];
      if (wj == 0.0) continue;
      const gf::PolyCode term = t == 0 ? 0 : gf::poly_mulmod(t, q[j], modulus);
      self(self, j + 1, gf::poly_add(acc, term, base), w * wj);
    }
  };
  visit(visit, 0, 0, 1.0);

  const double tail = walsh::series_tail_bound(base, alpha, K);
  double full = 1.0, kept = 1.0;
  for (int j = 0; j < s; ++j) {
    full *= 1.0 + gamma[j] * (partial + tail);
    kept *= 1.0 + gamma[j] * partial;
  }
  return {total - 1.0, full - kept};
}

double bound_constant(const gf::PrimeBase& base, walsh::Smoothness alpha, double tau) {
  const int a = alpha.value();
  if (!(tau >= 1.0 && tau < a)) throw std::domain_error("tau must satisfy 1 <= tau < alpha");
  const double b = base.value();
  const double root = std::pow(b, 1.0 / tau);
  double c = std::pow(b - 1.0, a) / (std::pow(b, a / tau) - b);
  for (int i = 1; i < a; ++i) c /= std::pow(b, i / tau) - 1.0;
  if (tau == 1.0) {
    c += a - 1.0;
  } else {
    c += (b - 1.0) * (std::pow(b - 1.0, a - 1) - std::pow(root - 1.0, a - 1)) /
         ((b - root) * std::pow(root - 1.0, a - 1));
  }
  return c;
}

double wce_bound(const gf::PrimeBase& base, walsh::Smoothness alpha, double tau, int m, int n,
                 std::span<const double> gamma) {
  const double c = bound_constant(base, alpha, tau);
  double bound = std::pow(static_cast<double>(base.value()), -std::min(tau * m, static_cast<double>(n)));
  for (double g : gamma) bound *= std::pow(1.0 + 3.0 * std::pow(g, 1.0 / tau) * c, tau);
  return bound;
}

}  // namespace hoplr
