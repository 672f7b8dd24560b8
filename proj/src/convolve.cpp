#include "hoplr/convolve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace hoplr::conv {

namespace detail {

namespace {
// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;
}  // namespace

struct ComplexPlans {
  explicit ComplexPlans(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    auto* buf = fftw_alloc_complex(n);
    forward = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, kFlags);
    inverse = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, kFlags);
    fftw_free(buf);
    if (!forward || !inverse) throw std::runtime_error("FFT planning failed");
  }
  ~ComplexPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  ComplexPlans(const ComplexPlans&) = delete;
  ComplexPlans& operator=(const ComplexPlans&) = delete;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// In-place real transforms of length n on a buffer of n/2 + 1 complex values.
struct RealPlans {
  explicit RealPlans(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    auto* buf = fftw_alloc_complex(n / 2 + 1);
    auto* re = reinterpret_cast<double*>(buf);
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), re, buf, kFlags);
    inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), buf, re, kFlags);
    fftw_free(buf);
    if (!forward || !inverse) throw std::runtime_error("FFT planning failed");
  }
  ~RealPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  RealPlans(const RealPlans&) = delete;
  RealPlans& operator=(const RealPlans&) = delete;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

}  // namespace detail

namespace {

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

// Real-to-complex transform of buf, whose first 2(size-1) doubles hold the input.
void real_forward(const detail::RealPlans& plans, std::vector<cplx>& buf) {
  fftw_execute_dft_r2c(plans.forward, reinterpret_cast<double*>(buf.data()), as_fftw(buf.data()));
}

void real_inverse(const detail::RealPlans& plans, std::vector<cplx>& buf) {
  fftw_execute_dft_c2r(plans.inverse, as_fftw(buf.data()), reinterpret_cast<double*>(buf.data()));
}

}  // namespace

Pow2Fft::Pow2Fft(std::size_t n) : n_(n) {
  if (n == 0 || !std::has_single_bit(n)) throw std::invalid_argument("FFT size must be a power of two");
  plans_ = std::make_shared<const detail::ComplexPlans>(n);
}

void Pow2Fft::forward(std::span<cplx> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT input has the wrong length");
  fftw_execute_dft(plans_->forward, as_fftw(data.data()), as_fftw(data.data()));
}

void Pow2Fft::inverse(std::span<cplx> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT input has the wrong length");
  fftw_execute_dft(plans_->inverse, as_fftw(data.data()), as_fftw(data.data()));
}

std::vector<cplx> fft_arbitrary_length(std::span<const cplx> x) {
  const std::size_t l = x.size();
  if (l == 0) return {};
  if (std::has_single_bit(l)) {
    std::vector<cplx> out(x.begin(), x.end());
    Pow2Fft(l).forward(out);
    return out;
  }
  // Bluestein: jk = (j^2 + k^2 - (k-j)^2) / 2 turns the DFT into a convolution
  // with the chirp exp(i pi j^2 / L).
  std::vector<cplx> chirp(l);
  for (std::size_t j = 0; j < l; ++j) {
    const std::uint64_t sq = (static_cast<std::uint64_t>(j) * j) % (2 * l);
    chirp[j] = std::polar(1.0, -std::numbers::pi * static_cast<double>(sq) / static_cast<double>(l));
  }
  const std::size_t m = std::bit_ceil(2 * l - 1);
  const Pow2Fft fft(m);
  std::vector<cplx> a(m), b(m);
  for (std::size_t j = 0; j < l; ++j) a[j] = x[j] * chirp[j];
  b[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < l; ++j) b[j] = b[m - j] = std::conj(chirp[j]);
  fft.forward(a);
  fft.forward(b);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft.inverse(a);
  std::vector<cplx> out(l);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < l; ++k) out[k] = a[k] * chirp[k] * scale;
  return out;
}

std::vector<cplx> ifft_arbitrary_length(std::span<const cplx> x) {
  std::vector<cplx> conj(x.size());
  std::transform(x.begin(), x.end(), conj.begin(), [](cplx v) { return std::conj(v); });
  std::vector<cplx> out = fft_arbitrary_length(conj);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v = std::conj(v) * scale;
  return out;
}

ConvPlan::ConvPlan(std::span<const double> kernel, Strategy strategy)
    : strategy_(strategy), kernel_(kernel.begin(), kernel.end()) {
  const std::size_t l = kernel_.size();
  if (l == 0) throw std::invalid_argument("convolution length must be at least 1");
  if (strategy_ == Strategy::automatic) strategy_ = l < kDirectThreshold ? Strategy::direct : Strategy::fft;

  if (strategy_ == Strategy::fft) {
    padded_ = std::max<std::size_t>(4, std::bit_ceil(2 * l - 1));
    real_ = std::make_shared<const detail::RealPlans>(padded_);
    std::vector<cplx> z(padded_ / 2 + 1, cplx{});
    std::copy(kernel_.begin(), kernel_.end(), reinterpret_cast<double*>(z.data()));
    real_forward(*real_, z);
    for (auto& v : z) v = std::conj(v);
    spectrum_ = std::move(z);
  } else if (strategy_ == Strategy::bluestein) {
    std::vector<cplx> k(kernel_.begin(), kernel_.end());
    spectrum_ = fft_arbitrary_length(k);
    for (auto& v : spectrum_) v = std::conj(v);
  }
}

std::vector<double> ConvPlan::apply(std::span<const double> q, double* imag_residue) const {
  if (q.size() != kernel_.size()) throw std::invalid_argument("convolution inputs differ in length");
  if (imag_residue) *imag_residue = 0.0;
  switch (strategy_) {
    case Strategy::direct:
      return apply_direct(q);
    case Strategy::fft:
      return apply_padded(q);
    case Strategy::bluestein:
      return apply_bluestein(q, imag_residue);
    case Strategy::automatic:
      break;
  }
  throw std::logic_error("unresolved convolution strategy");
}

std::vector<double> ConvPlan::apply_direct(std::span<const double> q) const {
  const std::size_t l = kernel_.size();
  std::vector<double> out(l, 0.0);
  for (std::size_t d = 0; d < l; ++d) {
    double s = 0.0;
    for (std::size_t b = 0; b < l; ++b) s += kernel_[(b + l - d) % l] * q[b];
    out[d] = s;
  }
  return out;
}

std::vector<double> ConvPlan::apply_padded(std::span<const double> q) const {
  // out[δ] = sum_j kernel[j] qe[j + δ] with qe the periodic extension of q to
  // length 2L - 1; no wrap-around occurs since 2L - 1 <= padded size.
  const std::size_t l = kernel_.size();
  std::vector<cplx> z(padded_ / 2 + 1, cplx{});
  double* re = reinterpret_cast<double*>(z.data());
  std::copy(q.begin(), q.end(), re);
  std::copy(q.begin(), q.end() - 1, re + l);
  real_forward(*real_, z);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] *= spectrum_[k];
  real_inverse(*real_, z);
  std::vector<double> out(re, re + l);
  const double scale = 1.0 / static_cast<double>(padded_);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<double> ConvPlan::apply_bluestein(std::span<const double> q, double* imag_residue) const {
  std::vector<cplx> y(q.begin(), q.end());
  y = fft_arbitrary_length(y);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] *= spectrum_[k];
  y = ifft_arbitrary_length(y);
  std::vector<double> out(y.size());
  double residue = 0.0;
  for (std::size_t d = 0; d < y.size(); ++d) {
    out[d] = y[d].real();
    residue = std::max(residue, std::abs(y[d].imag()));
  }
  if (imag_residue) *imag_residue = residue;
  return out;
}

std::vector<double> circ_convolve(std::span<const double> kernel, std::span<const double> q, Strategy strategy) {
  if (kernel.size() != q.size()) throw std::invalid_argument("convolution inputs differ in length");
  return ConvPlan(kernel, strategy).apply(q);
}

}  // namespace hoplr::conv
