#pragma once

// Component-by-component construction of higher order polynomial lattice
// rules. The naive driver scans every q in G_{b,n} per dimension; the fast
// driver evaluates the same scan as a circular correlation over the
// multiplicative group, indexed by generator exponents, with q = g^{-δ}.
//
// Both drivers rank candidates by the exact score
//   sum_{h=1}^{b^m-1} P_{d-1}(h) omega_alpha(v_n(h q / p)),
// accumulated identically, and break ties by the smallest q code.

#include <cstdint>
#include <span>
#include <vector>

#include "hoplr/convolve.hpp"
#include "hoplr/gfpoly.hpp"
#include "hoplr/rule.hpp"
#include "hoplr/walsh.hpp"
#include "hoplr/wce.hpp"

namespace hoplr {

struct CbcLimits {
  /// Naive driver: refuse when b^n * b^m exceeds this.
  std::uint64_t naive_work = std::uint64_t{1} << 30;
  /// Fast driver: refuse when b^n exceeds this.
  std::uint64_t fast_size = std::uint64_t{1} << 26;

  /// Defaults, with both thresholds replaced by HOPLR_BUDGET when it is set.
  static CbcLimits from_environment();
};

/// Per-dimension record of the fast driver.
struct CbcStep {
  std::uint64_t delta;       // selected exponent, q = g^{-delta}
  double correlation;        // S_d(delta) from the FFT
  double exact_score;        // the same sum evaluated directly
  double p_zero;             // P_{d-1}(0)
  std::size_t candidates;    // exponents re-scored exactly
};

/// `prefix` fixes q_1..q_k; the search starts at dimension k + 1.
LatticeRule cbc_naive(int s, int m, walsh::Smoothness alpha, const gf::Modulus& modulus, const WeightSpec& weights,
                      const CbcLimits& limits = {}, std::span<const gf::PolyCode> prefix = {});

LatticeRule cbc_fast(int s, int m, walsh::Smoothness alpha, const gf::Modulus& modulus, const WeightSpec& weights,
                     const CbcLimits& limits = {}, std::vector<CbcStep>* trace = nullptr,
                     conv::Strategy strategy = conv::Strategy::automatic, std::span<const gf::PolyCode> prefix = {});

/// Q(β) = P(g^β mod p) when deg(g^β mod p) < m, else 0, for β < b^n - 1.
std::vector<double> embed_Q(std::span<const double> P, const gf::ExpTable& exp, int m, const gf::PrimeBase& base);

/// P(h) *= 1 + gamma omega_alpha(v_n(h q / p)) for 0 <= h < b^m.
void update_P(std::vector<double>& P, gf::PolyCode q, double gamma, const gf::Modulus& modulus,
              walsh::Smoothness alpha);

/// sum_{h=1}^{b^m-1} P(h) omega_alpha(v_n(h q / p)), pairwise accumulated.
/// omega_of_residue maps a nonzero residue w to omega_alpha(v_n(w / p)).
template <class OmegaOfResidue>
double cbc_score(std::span<const double> P, std::span<const gf::PolyCode> multiples, OmegaOfResidue&& omega_of_residue);

/// Tolerance under which two exact scores count as tied.
double tie_tolerance(std::span<const double> P, double omega_zero);

}  // namespace hoplr

#include "hoplr/parallel.hpp"

template <class OmegaOfResidue>
double hoplr::cbc_score(std::span<const double> P, std::span<const gf::PolyCode> multiples,
                        OmegaOfResidue&& omega_of_residue) {
  thread_local std::vector<double> terms;
  terms.resize(P.size() > 0 ? P.size() - 1 : 0);
  for (std::size_t h = 1; h < P.size(); ++h) terms[h - 1] = P[h] * omega_of_residue(multiples[h]);
  return pairwise_sum(terms);
}
