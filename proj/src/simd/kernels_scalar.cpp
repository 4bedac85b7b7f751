#include "soliton/simd/kernels.hpp"

namespace soliton::simd::scalar {

void wronskian(const cplx* f1, const cplx* f2, const cplx* g1, const cplx* g2, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = f1[i] * g2[i] - f2[i] * g1[i];
}

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void caxpy_conj(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * std::conj(x[i]);
}

double weighted_dot(const double* w, const double* f, const double* g, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * f[i] * g[i];
  return s;
}

void weierstrass_frame(const cplx* psi1, const cplx* psi2, double* xx, double* xy, double* density,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double p = psi1[i].real(), q = psi1[i].imag();
    const double r = psi2[i].real(), s = psi2[i].imag();
    xx[i] = 2.0 * (r * s - p * q);
    xy[i] = -(p * p - q * q + r * r - s * s);
    xx[n + i] = r * r - s * s - p * p + q * q;
    xy[n + i] = 2.0 * (r * s + p * q);
    xx[2 * n + i] = 2.0 * (p * r + q * s);
    xy[2 * n + i] = 2.0 * (p * s - q * r);
    density[i] = p * p + q * q + r * r + s * s;
  }
}

}  // namespace soliton::simd::scalar
