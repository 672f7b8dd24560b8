#pragma once

// Circular cross-correlation of real vectors,
//
//   out[δ] = sum_β kernel[(β - δ) mod L] * q[β],
//
// with a direct O(L^2) route, a Bluestein route built on fft_arbitrary_length,
// and a padded route that evaluates the same sum as a linear correlation
// against the periodic extension of q, using a real-input power-of-two FFT.
// Power-of-two transforms are delegated to FFTW.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace hoplr::conv {

using cplx = std::complex<double>;

namespace detail {
struct ComplexPlans;
struct RealPlans;
}  // namespace detail

/// In-place complex FFT of a fixed power-of-two size.
class Pow2Fft {
 public:
  explicit Pow2Fft(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  /// Unnormalized forward (sign -1) transform.
  void forward(std::span<cplx> data) const;
  /// Unnormalized inverse (sign +1) transform.
  void inverse(std::span<cplx> data) const;

 private:
  std::size_t n_;
  std::shared_ptr<const detail::ComplexPlans> plans_;
};

/// DFT of any length L >= 1: X_k = sum_j x_j exp(-2 pi i jk / L).
std::vector<cplx> fft_arbitrary_length(std::span<const cplx> x);
/// Inverse DFT including the 1/L factor.
std::vector<cplx> ifft_arbitrary_length(std::span<const cplx> x);

enum class Strategy { automatic, direct, fft, bluestein };

/// Lengths below this use the direct route under Strategy::automatic.
inline constexpr std::size_t kDirectThreshold = 512;

/// A fixed kernel of length L with its transform computed once.
class ConvPlan {
 public:
  explicit ConvPlan(std::span<const double> kernel, Strategy strategy = Strategy::automatic);

  std::size_t length() const noexcept { return kernel_.size(); }
  Strategy strategy() const noexcept { return strategy_; }

  /// out[δ] = sum_β kernel[(β - δ) mod L] q[β]. For the Bluestein route,
  /// `imag_residue` (if given) receives the largest discarded imaginary part.
  std::vector<double> apply(std::span<const double> q, double* imag_residue = nullptr) const;

 private:
  std::vector<double> apply_direct(std::span<const double> q) const;
  std::vector<double> apply_padded(std::span<const double> q) const;
  std::vector<double> apply_bluestein(std::span<const double> q, double* imag_residue) const;

  Strategy strategy_;
  std::vector<double> kernel_;
  std::size_t padded_ = 0;
  std::vector<cplx> spectrum_;  // conjugated kernel transform
  std::shared_ptr<const detail::RealPlans> real_;
};

/// One-shot convenience wrapper around ConvPlan.
std::vector<double> circ_convolve(std::span<const double> kernel, std::span<const double> q,
                                  Strategy strategy = Strategy::automatic);

}  // namespace hoplr::conv
