#pragma once

// Point sets of digital nets: polynomial lattice points through the v_n map,
// generating matrices from Laurent coefficients, generic matrix-vector point
// generation, and interlacing of generating matrices.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hoplr/gfpoly.hpp"
#include "hoplr/rule.hpp"

namespace hoplr {

/// b^m points in dimension s, coordinate (h, j) = numerators[h s + j] / b^n.
struct PointSet {
  std::uint32_t b = 2;
  int m = 0;
  int n = 0;
  int s = 0;
  std::vector<std::uint64_t> numerators;

  std::uint64_t count() const { return gf::PrimeBase(b).power(m); }
  std::uint64_t numerator(std::uint64_t h, int j) const { return numerators[h * s + j]; }
  double coordinate(std::uint64_t h, int j) const;
};

/// rows x cols matrix over F_b; row k is output digit k + 1.
class GenMatrix {
 public:
  GenMatrix() = default;
  GenMatrix(int rows, int cols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::uint32_t at(int r, int c) const { return entries_[index(r, c)]; }
  void set(int r, int c, std::uint32_t v) { entries_[index(r, c)] = v; }

  friend bool operator==(const GenMatrix&, const GenMatrix&) = default;

 private:
  std::size_t index(int r, int c) const;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint32_t> entries_;
};

/// w[h] = h(X) q(X) mod p for 0 <= h < b^m, built from the products X^l q.
std::vector<gf::PolyCode> lattice_multiples(gf::PolyCode q, const gf::Modulus& modulus, int m);

/// x_{h,j} = v_n(h(X) q_j(X) / p(X)) for 0 <= h < b^m.
PointSet lattice_points(const gf::Modulus& modulus, std::span<const gf::PolyCode> q, int m);
PointSet lattice_points(const LatticeRule& rule);

/// C_j with entries c_{k,l} = u_{k+l} from the Laurent expansion of q_j / p.
std::vector<GenMatrix> lattice_matrices(const gf::Modulus& modulus, std::span<const gf::PolyCode> q, int m);
std::vector<GenMatrix> lattice_matrices(const LatticeRule& rule);

/// Points y = C_j digits(h) over F_b, x = sum_i y_i b^{-i}.
PointSet digitalnet_points(std::span<const GenMatrix> matrices, const gf::PrimeBase& base);

/// Interlaces s d square m x m matrices into s matrices of d m rows,
/// row order c_{(j-1)d+1,1}, ..., c_{jd,1}, c_{(j-1)d+1,2}, ...
/// keep_rows > 0 truncates each output to its first keep_rows rows.
std::vector<GenMatrix> interlace(std::span<const GenMatrix> matrices, int d, int keep_rows = 0);

struct MatrixFile {
  std::uint32_t b = 2;
  std::vector<GenMatrix> matrices;
};

/// Header "b n m count" followed by each matrix in row-major order. Tokens are
/// whitespace separated; '#' starts a comment that runs to the end of line.
MatrixFile read_matrix_file(std::istream& in);
void write_matrix_file(std::ostream& out, const MatrixFile& file);

/// CSV with header "h,v_1,...,v_s" and one row of numerators per point.
void write_points_csv(std::ostream& out, const PointSet& points);
/// Little-endian uint64 header (b, m, n, s) followed by the numerators.
void write_points_bin(std::ostream& out, const PointSet& points);
PointSet read_points_bin(std::istream& in);

}  // namespace hoplr
