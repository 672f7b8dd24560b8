#pragma once

// Worst-case error in the Walsh space W_{alpha,s,gamma}: the product formula
// for digital nets, a brute-force sum over the dual polynomial lattice, and
// the a priori bound satisfied by component-by-component constructions.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hoplr/gfpoly.hpp"
#include "hoplr/pointgen.hpp"
#include "hoplr/walsh.hpp"

namespace hoplr {

/// Thrown when an enumeration or search would exceed its work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// -1 + mean over h of products[h], accumulated as a pairwise sum of
/// (products[h] - 1).
double mean_excess(std::span<const double> products);

/// e = -1 + b^{-m} sum_h prod_j (1 + gamma_j omega_alpha(x_{h,j})).
/// Zero when the point set has no coordinates.
double wce_product(const PointSet& points, walsh::Smoothness alpha, std::span<const double> gamma);

/// Errors of the projections onto the first d coordinates, d = 1..s.
std::vector<double> wce_prefix_errors(const PointSet& points, walsh::Smoothness alpha,
                                      std::span<const double> gamma);

struct DualSum {
  /// Sum of r_alpha(gamma, k) over nonzero dual vectors with all k_j < b^K.
  double value;
  /// Upper bound on the omitted terms.
  double tail_bound;
};

/// Brute-force sum over the dual polynomial lattice: k is dual iff
/// sum_j tr_n(k_j)(X) q_j(X) mod p has degree < n - m, where tr_n keeps the
/// lowest n base-b digits. Throws BudgetExceeded when b^K or b^{ns} exceeds
/// max_terms.
DualSum wce_dual_bruteforce(const gf::Modulus& modulus, std::span<const gf::PolyCode> q, int m,
                            walsh::Smoothness alpha, std::span<const double> gamma, int truncation_digits,
                            std::uint64_t max_terms = std::uint64_t{1} << 26);

/// C_{b,alpha,tau}; throws std::domain_error unless 1 <= tau < alpha.
double bound_constant(const gf::PrimeBase& base, walsh::Smoothness alpha, double tau);

/// b^{-min(tau m, n)} prod_{j<=d} (1 + 3 gamma_j^{1/tau} C_{b,alpha,tau})^tau with d = gamma.size().
double wce_bound(const gf::PrimeBase& base, walsh::Smoothness alpha, double tau, int m, int n,
                 std::span<const double> gamma);

}  // namespace hoplr
