#pragma once

#include <complex>
#include <cstddef>

// Pointwise grid kernels with a scalar reference and an AVX2 variant.
// The active implementation is chosen once at startup from CPU features;
// set_backend() overrides it (tests use this for equivalence checks).
namespace soliton::simd {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
void set_backend(Backend b);  // throws parameter error if unavailable
const char* backend_name(Backend b);

// out[i] = f1[i]*g2[i] - f2[i]*g1[i]
void wronskian(const cplx* f1, const cplx* f2, const cplx* g1, const cplx* g2, cplx* out, std::size_t n);

// y[i] += a * x[i]
void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n);

// y[i] += a * conj(x[i])
void caxpy_conj(cplx a, const cplx* x, cplx* y, std::size_t n);

// Sum of w[i]*f[i]*g[i].
double weighted_dot(const double* w, const double* f, const double* g, std::size_t n);

// Weierstrass 1-form coefficients per node. For ψ = (psi1, psi2):
//   dX = Xx dx + Xy dy, D = |psi1|² + |psi2|².
// Output arrays are planar: xx[c*n + i], xy[c*n + i] for coordinate c = 0,1,2.
void weierstrass_frame(const cplx* psi1, const cplx* psi2, double* xx, double* xy, double* density,
                       std::size_t n);

namespace scalar {
void wronskian(const cplx*, const cplx*, const cplx*, const cplx*, cplx*, std::size_t);
void caxpy(cplx, const cplx*, cplx*, std::size_t);
void caxpy_conj(cplx, const cplx*, cplx*, std::size_t);
double weighted_dot(const double*, const double*, const double*, std::size_t);
void weierstrass_frame(const cplx*, const cplx*, double*, double*, double*, std::size_t);
}  // namespace scalar

namespace avx2 {
void wronskian(const cplx*, const cplx*, const cplx*, const cplx*, cplx*, std::size_t);
void caxpy(cplx, const cplx*, cplx*, std::size_t);
void caxpy_conj(cplx, const cplx*, cplx*, std::size_t);
double weighted_dot(const double*, const double*, const double*, std::size_t);
void weierstrass_frame(const cplx*, const cplx*, double*, double*, double*, std::size_t);
}  // namespace avx2

}  // namespace soliton::simd
