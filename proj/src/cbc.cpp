#include "hoplr/cbc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "hoplr/parallel.hpp"
#include "hoplr/pointgen.hpp"

namespace hoplr {

namespace {

// FFT-computed correlations within this fraction of the score scale of the
// minimum are re-scored exactly.
constexpr double kCandidateWindow = 1e-9;
constexpr double kTieWindow = 1e-12;

void check_shape(int s, int m, walsh::Smoothness alpha, const gf::Modulus& modulus,
                 std::span<const gf::PolyCode> prefix) {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  if (prefix.size() > static_cast<std::size_t>(s)) throw std::invalid_argument("prefix longer than s");
  for (gf::PolyCode q : prefix) {
    if (q == 0 || q >= modulus.field_size()) throw std::invalid_argument("prefix polynomial out of range");
  }
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (modulus.degree() != alpha.value() * m) {
    throw std::invalid_argument("deg p = " + std::to_string(modulus.degree()) + " but alpha m = " +
                                std::to_string(alpha.value() * m));
  }
}

LatticeRule empty_rule(int m, walsh::Smoothness alpha, const gf::Modulus& modulus, const WeightSpec& weights) {
  LatticeRule rule;
  rule.b = modulus.base().value();
  rule.m = m;
  rule.n = modulus.degree();
  rule.alpha = alpha.value();
  rule.p = modulus.code();
  rule.generator = gf::find_generator(modulus);
  rule.weights = weights;
  return rule;
}

double omega_at(std::uint64_t v, int n, const gf::PrimeBase& base, walsh::Smoothness alpha) {
  return walsh::omega(walsh::DigitRational(v, n, base), alpha);
}

struct Choice {
  gf::PolyCode q = 0;
  double score = std::numeric_limits<double>::infinity();
};

// Smallest score; among scores within `tie` of it, the smallest code.
Choice select(std::span<const Choice> scored, double tie) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : scored) best = std::min(best, c.score);
  Choice pick;
  for (const auto& c : scored) {
    if (c.score <= best + tie && (pick.q == 0 || c.q < pick.q)) pick = c;
  }
  return pick;
}

}  // namespace

namespace {

int apply_prefix(LatticeRule& rule, std::vector<double>& P, std::span<const gf::PolyCode> prefix,
                 std::span<const double> gamma, const gf::Modulus& modulus, walsh::Smoothness alpha) {
  for (std::size_t d = 0; d < prefix.size(); ++d) {
    update_P(P, prefix[d], gamma[d], modulus, alpha);
    rule.q.push_back(prefix[d]);
    rule.errors.push_back(mean_excess(P));
  }
  return static_cast<int>(prefix.size());
}

}  // namespace

CbcLimits CbcLimits::from_environment() {
  CbcLimits limits;
  if (const char* env = std::getenv("HOPLR_BUDGET")) {
    const std::string text(env);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || !(v >= 1.0)) throw std::invalid_argument("HOPLR_BUDGET must be a positive number");
    const auto budget = v >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(v);
    limits.naive_work = budget;
    limits.fast_size = budget;
  }
  return limits;
}

double tie_tolerance(std::span<const double> P, double omega_zero) {
  double scale = 0.0;
  for (std::size_t h = 1; h < P.size(); ++h) scale += std::abs(P[h]);
  return kTieWindow * (omega_zero + 1.0) * std::max(scale, 1.0);
}

std::vector<double> embed_Q(std::span<const double> P, const gf::ExpTable& exp, int m, const gf::PrimeBase& base) {
  const std::uint64_t count = base.power(m);
  if (P.size() != count) throw std::invalid_argument("P must have b^m entries");
  std::vector<double> Q(exp.order(), 0.0);
  for (std::uint64_t h = 1; h < count; ++h) Q[exp.log(h)] = P[h];
  return Q;
}

void update_P(std::vector<double>& P, gf::PolyCode q, double gamma, const gf::Modulus& modulus,
              walsh::Smoothness alpha) {
  const gf::PrimeBase& base = modulus.base();
  const int n = modulus.degree();
  int m = 0;
  while (base.power(m) < P.size()) ++m;
  if (base.power(m) != P.size()) throw std::invalid_argument("P must have b^m entries");
  const auto w = lattice_multiples(q, modulus, m);
  parallel_for(P.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t h = begin; h < end; ++h) {
      P[h] *= 1.0 + gamma * omega_at(gf::vn_map(w[h], modulus, n), n, base, alpha);
    }
  });
}

LatticeRule cbc_naive(int s, int m, walsh::Smoothness alpha, const gf::Modulus& modulus, const WeightSpec& weights,
                      const CbcLimits& limits, std::span<const gf::PolyCode> prefix) {
  check_shape(s, m, alpha, modulus, prefix);
  const gf::PrimeBase& base = modulus.base();
  const int n = modulus.degree();
  const std::uint64_t size = modulus.field_size();
  const std::uint64_t points = base.power(m);
  const double work = static_cast<double>(size) * static_cast<double>(points);
  if (work > static_cast<double>(limits.naive_work)) {
    throw BudgetExceeded("naive CBC needs about " + std::to_string(work) + " operations per dimension (b^n * b^m); " +
                         "limit " + std::to_string(limits.naive_work));
  }
  const std::vector<double> gamma = weights.materialize(s);
  LatticeRule rule = empty_rule(m, alpha, modulus, weights);

  // omega by residue code; entry 0 is omega(0).
  std::vector<double> omega_by_code(size);
  parallel_for(size, [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) omega_by_code[w] = omega_at(gf::vn_map(w, modulus, n), n, base, alpha);
  });

  std::vector<double> P(points, 1.0);
  const int fixed = apply_prefix(rule, P, prefix, gamma, modulus, alpha);
  std::vector<Choice> scored(size - 1);
  for (int d = fixed; d < s; ++d) {
    parallel_for(size - 1, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const gf::PolyCode q = i + 1;
        const auto w = lattice_multiples(q, modulus, m);
        scored[i] = {q, cbc_score(P, w, [&](gf::PolyCode r) { return omega_by_code[r]; })};
      }
    }, 64);
    const Choice pick = select(scored, tie_tolerance(P, omega_by_code[0]));
    update_P(P, pick.q, gamma[d], modulus, alpha);
    rule.q.push_back(pick.q);
    rule.errors.push_back(mean_excess(P));
  }
  return rule;
}

LatticeRule cbc_fast(int s, int m, walsh::Smoothness alpha, const gf::Modulus& modulus, const WeightSpec& weights,
                     const CbcLimits& limits, std::vector<CbcStep>* trace, conv::Strategy strategy,
                     std::span<const gf::PolyCode> prefix) {
  check_shape(s, m, alpha, modulus, prefix);
  const gf::PrimeBase& base = modulus.base();
  const std::uint64_t size = modulus.field_size();
  if (size > limits.fast_size) {
    throw BudgetExceeded("fast CBC needs tables of b^n = " + std::to_string(size) + " entries; limit " +
                         std::to_string(limits.fast_size));
  }
  const std::vector<double> gamma = weights.materialize(s);
  LatticeRule rule = empty_rule(m, alpha, modulus, weights);
  const gf::ExpTable exp(modulus, rule.generator);
  const walsh::KernelTable kernel(modulus, exp, alpha);
  const conv::ConvPlan plan(kernel.values(), strategy);
  const std::uint64_t order = exp.order();
  const auto omega_of_residue = [&](gf::PolyCode r) { return kernel.at(exp.log(r)); };

  std::vector<double> P(base.power(m), 1.0);
  if (trace) trace->clear();
  const int fixed = apply_prefix(rule, P, prefix, gamma, modulus, alpha);
  for (int d = fixed; d < s; ++d) {
    const std::vector<double> S = plan.apply(embed_Q(P, exp, m, base));
    const double tie = tie_tolerance(P, kernel.at_zero());
    const double window = tie / kTieWindow * kCandidateWindow;
    const double lowest = *std::min_element(S.begin(), S.end());

    std::vector<std::uint64_t> deltas;
    for (std::uint64_t delta = 0; delta < order; ++delta) {
      if (S[delta] <= lowest + window) deltas.push_back(delta);
    }
    std::vector<Choice> scored(deltas.size());
    parallel_for(deltas.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const gf::PolyCode q = exp.exp((order - deltas[i]) % order);
        const auto w = lattice_multiples(q, modulus, m);
        scored[i] = {q, cbc_score(P, w, omega_of_residue)};
      }
    }, 16);
    const Choice pick = select(scored, tie);
    const std::uint64_t delta = (order - exp.log(pick.q)) % order;
    if (trace) trace->push_back({delta, S[delta], pick.score, P[0], deltas.size()});

    update_P(P, pick.q, gamma[d], modulus, alpha);
    rule.q.push_back(pick.q);
    rule.errors.push_back(mean_excess(P));
  }
  return rule;
}

}  // namespace hoplr
