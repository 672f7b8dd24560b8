#include <cmath>

#include "doctest.h"
#include "hoplr/wce.hpp"

using namespace hoplr;
using gf::PolyCode;
using gf::PrimeBase;
using walsh::Smoothness;

TEST_CASE("product formula example") {
  const gf::Modulus p7(7, PrimeBase(2));
  const std::vector<double> one{1.0};
  const std::vector<PolyCode> q{1};
  const auto ps = lattice_points(p7, q, 1);
  CHECK(wce_product(ps, Smoothness(2), one) == doctest::Approx(0.9375).epsilon(1e-14));
  PointSet empty = ps;
  empty.s = 0;
  empty.numerators.clear();
  CHECK(wce_product(empty, Smoothness(2), one) == 0.0);
}

TEST_CASE("published five-dimensional rule") {
  const gf::Modulus p(1179649, PrimeBase(2));
  const std::vector<PolyCode> q{453270, 920860, 324514, 394664, 106142};
  const auto gamma = WeightSpec::geometric(0.9).materialize(5);
  const auto e = wce_prefix_errors(lattice_points(p, q, 10), Smoothness(2), gamma);
  CHECK(e[4] >= 1.30e-2);
  CHECK(e[4] < 1.31e-2);
  for (int d = 1; d < 5; ++d) CHECK(e[d] >= e[d - 1]);
}

TEST_CASE("product formula agrees with the dual lattice sum") {
  const PrimeBase two(2);
  const std::vector<double> gamma{0.9, 0.6};
  for (PolyCode p : {7u, 11u, 19u, 37u, 67u}) {
    const gf::Modulus mod(p, two);
    const int n = mod.degree();
    for (int m = 1; m <= std::min(3, n); ++m) {
      for (std::size_t s = 1; s <= 2; ++s) {
        std::vector<PolyCode> q{1, mod.group_order() / 3 + 1};
        q.resize(s);
        const double e = wce_product(lattice_points(mod, q, m), Smoothness(2), gamma);
        const auto dual = wce_dual_bruteforce(mod, q, m, Smoothness(2), gamma, n + 8);
        INFO("p=" << p << " m=" << m << " s=" << s);
        CHECK(dual.value <= e + 1e-12);
        CHECK(e <= dual.value + dual.tail_bound + 1e-12);
        CHECK(e >= -1e-12);
      }
    }
  }
}

TEST_CASE("dual sum grows with the truncation") {
  const gf::Modulus mod(11, PrimeBase(2));
  const std::vector<PolyCode> q{3};
  const std::vector<double> gamma{1.0};
  double previous = -1.0;
  for (int K = 3; K <= 15; K += 3) {
    const auto d = wce_dual_bruteforce(mod, q, 2, Smoothness(2), gamma, K);
    CHECK(d.value >= previous);
    previous = d.value;
  }
  CHECK_THROWS_AS(wce_dual_bruteforce(mod, q, 2, Smoothness(2), gamma, 40), BudgetExceeded);
}

TEST_CASE("bound") {
  const PrimeBase two(2);
  CHECK(bound_constant(two, Smoothness(2), 1.0) == doctest::Approx(1.5));
  CHECK(wce_bound(two, Smoothness(2), 1.0, 10, 20, {}) == doctest::Approx(std::pow(2.0, -10)));
  CHECK(wce_bound(two, Smoothness(3), 2.5, 10, 20, {}) == doctest::Approx(std::pow(2.0, -20)));
  CHECK_THROWS_AS(bound_constant(two, Smoothness(2), 2.0), std::domain_error);
  CHECK_THROWS_AS(bound_constant(two, Smoothness(2), 0.5), std::domain_error);
  // The tau > 1 branch approaches the tau = 1 value continuously.
  CHECK(bound_constant(two, Smoothness(3), 1.0 + 1e-7) == doctest::Approx(bound_constant(two, Smoothness(3), 1.0)).epsilon(1e-4));
}
