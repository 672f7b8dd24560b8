#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "hoplr/pointgen.hpp"

using namespace hoplr;
using gf::PolyCode;
using gf::PrimeBase;

TEST_CASE("lattice points example") {
  const gf::Modulus p7(7, PrimeBase(2));
  const std::vector<PolyCode> q{1};
  const auto ps = lattice_points(p7, q, 2);
  CHECK(ps.count() == 4);
  CHECK(ps.numerators == std::vector<std::uint64_t>{0, 1, 3, 2});
  CHECK(ps.coordinate(2, 0) == 0.75);
}

TEST_CASE("lattice matrices example") {
  const gf::Modulus p7(7, PrimeBase(2));
  const std::vector<PolyCode> q{1};
  const auto c = lattice_matrices(p7, q, 2);
  REQUIRE(c.size() == 1);
  CHECK(c[0].at(0, 0) == 0);
  CHECK(c[0].at(0, 1) == 1);
  CHECK(c[0].at(1, 0) == 1);
  CHECK(c[0].at(1, 1) == 1);
  const std::vector<PolyCode> zero{0};
  CHECK_THROWS(lattice_matrices(p7, zero, 2));
}

TEST_CASE("identity matrix net") {
  GenMatrix id(3, 3);
  for (int i = 0; i < 3; ++i) id.set(i, i, 1);
  const std::vector<GenMatrix> c{id};
  const auto ps = digitalnet_points(c, PrimeBase(2));
  CHECK(ps.coordinate(1, 0) == 0.5);
  CHECK(ps.coordinate(2, 0) == 0.25);
  CHECK(ps.coordinate(4, 0) == 0.125);
  GenMatrix a(2, 2), b(3, 2);
  const std::vector<GenMatrix> bad{a, b};
  CHECK_THROWS(digitalnet_points(bad, PrimeBase(2)));
}

TEST_CASE("lattice points agree with the matrix route") {
  std::mt19937_64 rng(17);
  for (std::uint32_t b : {2u, 3u, 5u}) {
    const PrimeBase base(b);
    for (int trial = 0; trial < 20; ++trial) {
      const int m = 1 + static_cast<int>(rng() % (b == 2 ? 4 : 3));
      const int n = m + static_cast<int>(rng() % (b == 2 ? 8 : 3));
      const gf::Modulus mod = gf::find_irreducible(n, base);
      std::vector<PolyCode> q(1 + rng() % 3);
      for (auto& x : q) x = 1 + rng() % mod.group_order();
      const auto direct = lattice_points(mod, q, m);
      const auto via = digitalnet_points(lattice_matrices(mod, q, m), base);
      CHECK(direct.numerators == via.numerators);
      CHECK(direct.n == via.n);
      for (int j = 0; j < direct.s; ++j) CHECK(direct.numerator(0, j) == 0);
    }
  }
}

TEST_CASE("lattice point sets are closed under digitwise addition") {
  for (std::uint32_t b : {2u, 3u}) {
    const PrimeBase base(b);
    for (int m = 1; m <= (b == 2 ? 4 : 2); ++m) {
      const gf::Modulus mod = gf::find_irreducible(2 * m, base);
      const std::vector<PolyCode> q{1, mod.group_order() / 2 + 1};
      const auto ps = lattice_points(mod, q, m);
      std::set<std::vector<std::uint64_t>> pts;
      for (std::uint64_t h = 0; h < ps.count(); ++h) pts.insert({ps.numerator(h, 0), ps.numerator(h, 1)});
      auto digit_add = [&](std::uint64_t x, std::uint64_t y) {
        std::uint64_t r = 0, unit = 1;
        for (int i = 0; i < ps.n; ++i, x /= b, y /= b, unit *= b) r += ((x % b + y % b) % b) * unit;
        return r;
      };
      for (const auto& x : pts)
        for (const auto& y : pts) CHECK(pts.count({digit_add(x[0], y[0]), digit_add(x[1], y[1])}) == 1);
    }
  }
}

TEST_CASE("interlacing") {
  GenMatrix a(2, 2), b(2, 2);
  // a rows (1,0),(0,1); b rows (1,1),(0,0)
  a.set(0, 0, 1);
  a.set(1, 1, 1);
  b.set(0, 0, 1);
  b.set(0, 1, 1);
  const std::vector<GenMatrix> in{a, b};
  const auto out = interlace(in, 2);
  REQUIRE(out.size() == 1);
  REQUIRE(out[0].rows() == 4);
  const std::vector<std::vector<std::uint32_t>> rows{{1, 0}, {1, 1}, {0, 1}, {0, 0}};
  for (int r = 0; r < 4; ++r)
    for (int l = 0; l < 2; ++l) CHECK(out[0].at(r, l) == rows[r][l]);
  CHECK(interlace(in, 1) == in);
  CHECK(interlace(in, 2, 3)[0].rows() == 3);
  const std::vector<GenMatrix> three{a, b, a};
  CHECK_THROWS(interlace(three, 2));
  const std::vector<GenMatrix> rect{GenMatrix(3, 2), GenMatrix(3, 2)};
  CHECK_THROWS(interlace(rect, 2));
}

TEST_CASE("matrix file round trip") {
  const gf::Modulus mod = gf::find_irreducible(6, PrimeBase(2));
  const std::vector<PolyCode> q{3, 5, 9};
  MatrixFile f{2, lattice_matrices(mod, q, 3)};
  std::stringstream io;
  write_matrix_file(io, f);
  const auto g = read_matrix_file(io);
  CHECK(g.b == 2);
  CHECK(g.matrices == f.matrices);

  std::istringstream commented("# header\n2 1 2 1 # b n m count\n1 0\n");
  CHECK(read_matrix_file(commented).matrices.size() == 1);
  std::istringstream bad("2 1 2 1\n1 2\n");
  CHECK_THROWS(read_matrix_file(bad));
  std::istringstream truncated("2 2 2 1\n1 0 1\n");
  CHECK_THROWS(read_matrix_file(truncated));
}

TEST_CASE("point output formats") {
  const gf::Modulus p7(7, PrimeBase(2));
  const std::vector<PolyCode> q{1, 2};
  const auto ps = lattice_points(p7, q, 2);
  std::ostringstream csv;
  write_points_csv(csv, ps);
  CHECK(csv.str() == "h,v_1,v_2\n0,0,0\n1,1,3\n2,3,2\n3,2,1\n");
  std::stringstream bin;
  write_points_bin(bin, ps);
  CHECK(bin.str().size() == 8 * (4 + 8));
  CHECK(static_cast<unsigned char>(bin.str()[0]) == 2);
  const auto back = read_points_bin(bin);
  CHECK(back.numerators == ps.numerators);
  CHECK(back.s == 2);
  CHECK(back.n == 2);
}
