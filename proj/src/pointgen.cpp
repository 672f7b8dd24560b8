#include "hoplr/pointgen.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hoplr/parallel.hpp"

namespace hoplr {

double PointSet::coordinate(std::uint64_t h, int j) const {
  return static_cast<double>(numerator(h, j)) * std::pow(static_cast<double>(b), -n);
}

GenMatrix::GenMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols, 0) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
}

std::size_t GenMatrix::index(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index out of range");
  return static_cast<std::size_t>(r) * cols_ + c;
}

std::vector<gf::PolyCode> lattice_multiples(gf::PolyCode q, const gf::Modulus& modulus, int m) {
  if (m < 0 || m > modulus.degree()) throw std::invalid_argument("m must lie in [0, deg p]");
  const gf::PrimeBase& base = modulus.base();
  const std::uint32_t b = base.value();
  const std::uint64_t count = base.power(m);
  std::vector<gf::PolyCode> basis(m);
  gf::PolyCode t = q;
  for (int l = 0; l < m; ++l) {
    basis[l] = t;
    if (l + 1 < m) t = gf::poly_mulmod(t, b, modulus);  // times X
  }
  std::vector<gf::PolyCode> w(count, 0);
  if (base.is_binary()) {
    for (std::uint64_t h = 1; h < count; ++h) w[h] = w[h & (h - 1)] ^ basis[std::countr_zero(h)];
    return w;
  }
  for (std::uint64_t h = 1; h < count; ++h) {
    int l = 0;
    std::uint64_t unit = 1;
    while ((h / unit) % b == 0) {
      unit *= b;
      ++l;
    }
    w[h] = gf::poly_add(w[h - unit], basis[l], base);
  }
  return w;
}

PointSet lattice_points(const gf::Modulus& modulus, std::span<const gf::PolyCode> q, int m) {
  PointSet ps;
  ps.b = modulus.base().value();
  ps.m = m;
  ps.n = modulus.degree();
  ps.s = static_cast<int>(q.size());
  const std::uint64_t count = modulus.base().power(m);
  ps.numerators.assign(count * q.size(), 0);
  for (int j = 0; j < ps.s; ++j) {
    if (q[j] == 0 || q[j] >= modulus.field_size()) throw std::invalid_argument("generating polynomial out of range");
    const auto w = lattice_multiples(q[j], modulus, m);
    parallel_for(count, [&](std::size_t begin, std::size_t end) {
      for (std::size_t h = begin; h < end; ++h) ps.numerators[h * ps.s + j] = gf::vn_map(w[h], modulus, ps.n);
    });
  }
  return ps;
}

PointSet lattice_points(const LatticeRule& rule) { return lattice_points(rule.modulus(), rule.q, rule.m); }

std::vector<GenMatrix> lattice_matrices(const gf::Modulus& modulus, std::span<const gf::PolyCode> q, int m) {
  const int n = modulus.degree();
  std::vector<GenMatrix> out;
  for (gf::PolyCode qj : q) {
    if (qj == 0 || qj >= modulus.field_size()) throw std::invalid_argument("generating polynomial out of range");
    const auto u = gf::laurent_digits(qj, modulus, n + m - 1);  // u[i] holds u_{i+1}
    GenMatrix c(n, m);
    for (int r = 0; r < n; ++r)
      for (int l = 0; l < m; ++l) c.set(r, l, u[r + l]);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<GenMatrix> lattice_matrices(const LatticeRule& rule) {
  return lattice_matrices(rule.modulus(), rule.q, rule.m);
}

PointSet digitalnet_points(std::span<const GenMatrix> matrices, const gf::PrimeBase& base) {
  PointSet ps;
  ps.b = base.value();
  ps.s = static_cast<int>(matrices.size());
  if (matrices.empty()) throw std::invalid_argument("need at least one generating matrix");
  ps.n = matrices.front().rows();
  ps.m = matrices.front().cols();
  for (const auto& c : matrices) {
    if (c.rows() != ps.n || c.cols() != ps.m) throw std::invalid_argument("generating matrices differ in shape");
    for (int r = 0; r < c.rows(); ++r)
      for (int l = 0; l < c.cols(); ++l)
        if (c.at(r, l) >= ps.b) throw std::invalid_argument("matrix entry is not a digit");
  }
  const std::uint32_t b = ps.b;
  const std::uint64_t count = base.power(ps.m);
  ps.numerators.assign(count * ps.s, 0);
  for (int j = 0; j < ps.s; ++j) {
    const GenMatrix& c = matrices[j];
    // Column l of C_j read as the numerator sum_k c_{k,l} b^{n-1-k}.
    std::vector<std::vector<std::uint32_t>> cols(ps.m, std::vector<std::uint32_t>(ps.n));
    for (int l = 0; l < ps.m; ++l)
      for (int r = 0; r < ps.n; ++r) cols[l][r] = c.at(r, l);
    if (base.is_binary()) {
      std::vector<std::uint64_t> mask(ps.m, 0);
      for (int l = 0; l < ps.m; ++l)
        for (int r = 0; r < ps.n; ++r) mask[l] |= std::uint64_t{cols[l][r]} << (ps.n - 1 - r);
      for (std::uint64_t h = 1; h < count; ++h) {
        ps.numerators[h * ps.s + j] = ps.numerators[(h & (h - 1)) * ps.s + j] ^ mask[std::countr_zero(h)];
      }
      continue;
    }
    std::vector<std::uint32_t> y(ps.n);
    for (std::uint64_t h = 1; h < count; ++h) {
      std::fill(y.begin(), y.end(), 0);
      std::uint64_t rest = h;
      for (int l = 0; l < ps.m && rest > 0; ++l, rest /= b) {
        const std::uint32_t digit = rest % b;
        if (digit == 0) continue;
        for (int r = 0; r < ps.n; ++r) y[r] = (y[r] + digit * cols[l][r]) % b;
      }
      std::uint64_t v = 0;
      for (int r = 0; r < ps.n; ++r) v = v * b + y[r];
      ps.numerators[h * ps.s + j] = v;
    }
  }
  return ps;
}

std::vector<GenMatrix> interlace(std::span<const GenMatrix> matrices, int d, int keep_rows) {
  if (d < 1) throw std::invalid_argument("interlacing factor must be >= 1");
  if (matrices.size() % d != 0) throw std::invalid_argument("matrix count is not divisible by the interlacing factor");
  if (matrices.empty()) return {};
  const int m = matrices.front().cols();
  for (const auto& c : matrices) {
    if (c.rows() != m || c.cols() != m) throw std::invalid_argument("interlacing needs square m x m matrices");
  }
  const int rows = keep_rows > 0 ? keep_rows : d * m;
  if (rows > d * m) throw std::invalid_argument("cannot keep more rows than d m");
  std::vector<GenMatrix> out;
  for (std::size_t j = 0; j < matrices.size() / d; ++j) {
    GenMatrix c(rows, m);
    for (int r = 0; r < rows; ++r) {
      const GenMatrix& src = matrices[j * d + r % d];
      for (int l = 0; l < m; ++l) c.set(r, l, src.at(r / d, l));
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// Next whitespace-delimited token, skipping '#' comments.
bool next_token(std::istream& in, std::string& token) {
  while (in >> token) {
    if (token.front() != '#') return true;
    std::string rest;
    std::getline(in, rest);
  }
  return false;
}

std::uint64_t next_integer(std::istream& in, const char* what) {
  std::string token;
  if (!next_token(in, token)) throw std::invalid_argument(std::string("matrix file truncated at ") + what);
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size()) {
    throw std::invalid_argument(std::string("matrix file: bad ") + what + " '" + token + "'");
  }
  return v;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw std::invalid_argument("point file truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

MatrixFile read_matrix_file(std::istream& in) {
  MatrixFile f;
  f.b = static_cast<std::uint32_t>(next_integer(in, "base"));
  const gf::PrimeBase base(f.b);
  const auto n = next_integer(in, "row count");
  const auto m = next_integer(in, "column count");
  const auto count = next_integer(in, "matrix count");
  if (n == 0 || m == 0 || n > 64 || m > 64) throw std::invalid_argument("matrix file: unsupported matrix shape");
  for (std::uint64_t i = 0; i < count; ++i) {
    GenMatrix c(static_cast<int>(n), static_cast<int>(m));
    for (int r = 0; r < static_cast<int>(n); ++r) {
      for (int l = 0; l < static_cast<int>(m); ++l) {
        const auto v = next_integer(in, "entry");
        if (v >= base.value()) throw std::invalid_argument("matrix file: entry is not a digit");
        c.set(r, l, static_cast<std::uint32_t>(v));
      }
    }
    f.matrices.push_back(std::move(c));
  }
  std::string extra;
  if (next_token(in, extra)) throw std::invalid_argument("matrix file: trailing data '" + extra + "'");
  return f;
}

void write_matrix_file(std::ostream& out, const MatrixFile& file) {
  const int n = file.matrices.empty() ? 0 : file.matrices.front().rows();
  const int m = file.matrices.empty() ? 0 : file.matrices.front().cols();
  out << file.b << ' ' << n << ' ' << m << ' ' << file.matrices.size() << '\n';
  for (const auto& c : file.matrices) {
    if (c.rows() != n || c.cols() != m) throw std::invalid_argument("matrices differ in shape");
    for (int r = 0; r < n; ++r) {
      for (int l = 0; l < m; ++l) out << (l ? " " : "") << c.at(r, l);
      out << '\n';
    }
  }
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  out << "h";
  for (int j = 1; j <= points.s; ++j) out << ",v_" << j;
  out << '\n';
  for (std::uint64_t h = 0; h < points.count(); ++h) {
    out << h;
    for (int j = 0; j < points.s; ++j) out << ',' << points.numerator(h, j);
    out << '\n';
  }
}

void write_points_bin(std::ostream& out, const PointSet& points) {
  put_u64(out, points.b);
  put_u64(out, static_cast<std::uint64_t>(points.m));
  put_u64(out, static_cast<std::uint64_t>(points.n));
  put_u64(out, static_cast<std::uint64_t>(points.s));
  for (std::uint64_t v : points.numerators) put_u64(out, v);
}

PointSet read_points_bin(std::istream& in) {
  PointSet ps;
  ps.b = static_cast<std::uint32_t>(get_u64(in));
  ps.m = static_cast<int>(get_u64(in));
  ps.n = static_cast<int>(get_u64(in));
  ps.s = static_cast<int>(get_u64(in));
  const std::uint64_t total = ps.count() * ps.s;
  ps.numerators.resize(total);
  for (auto& v : ps.numerators) v = get_u64(in);
  return ps;
}

}  // namespace hoplr
