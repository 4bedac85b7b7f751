#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <fftw3.h>

namespace soliton::detail {

using cplx = std::complex<double>;

// In-place complex FFT of one fixed length (unnormalized forward, 1/n inverse).
class FFT {
 public:
  explicit FFT(std::size_t n) : n_(n) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FFT() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(buf_);
  }
  FFT(const FFT&) = delete;
  FFT& operator=(const FFT&) = delete;

  std::size_t size() const { return n_; }

  std::vector<cplx> forward(const cplx* f) {
    for (std::size_t i = 0; i < n_; ++i) {
      buf_[i][0] = f[i].real();
      buf_[i][1] = f[i].imag();
    }
    fftw_execute(fwd_);
    return store(1.0);
  }
  std::vector<cplx> forward(const std::vector<cplx>& f) { return forward(f.data()); }

  std::vector<cplx> inverse(const std::vector<cplx>& F) {
    for (std::size_t i = 0; i < n_; ++i) {
      buf_[i][0] = F[i].real();
      buf_[i][1] = F[i].imag();
    }
    fftw_execute(inv_);
    return store(1.0 / static_cast<double>(n_));
  }

  // Signed mode index of bin j.
  long mode(std::size_t j) const {
    const auto jj = static_cast<long>(j), nn = static_cast<long>(n_);
    return jj <= nn / 2 ? jj : jj - nn;
  }
  bool nyquist(std::size_t j) const { return n_ % 2 == 0 && j == n_ / 2; }

 private:
  std::vector<cplx> store(double scale) const {
    std::vector<cplx> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = cplx(buf_[i][0], buf_[i][1]) * scale;
    return out;
  }
  std::size_t n_;
  fftw_complex* buf_;
  fftw_plan fwd_, inv_;
};

// d/dy of samples f(y_j), y_j = j·2π/n, periodic in 2π.
inline std::vector<cplx> periodic_derivative(FFT& fft, const cplx* f) {
  auto F = fft.forward(f);
  for (std::size_t j = 0; j < F.size(); ++j) {
    F[j] = fft.nyquist(j) ? cplx(0.0) : cplx(0.0, static_cast<double>(fft.mode(j))) * F[j];
  }
  return fft.inverse(F);
}

}  // namespace soliton::detail
