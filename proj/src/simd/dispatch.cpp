#include <cstdlib>
#include <cstring>

#include "soliton/errors.hpp"
#include "soliton/simd/kernels.hpp"

namespace soliton::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  const char* env = std::getenv("SOLITON_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Backend::scalar;
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend& current() {
  static Backend b = detect();
  return b;
}

}  // namespace

Backend active_backend() { return current(); }

bool backend_available(Backend b) { return b == Backend::scalar || cpu_has_avx2(); }

void set_backend(Backend b) {
  if (!backend_available(b)) fail(ErrorKind::parameter, "simd_unavailable", "AVX2 not supported on this CPU");
  current() = b;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void wronskian(const cplx* f1, const cplx* f2, const cplx* g1, const cplx* g2, cplx* out, std::size_t n) {
  if (current() == Backend::avx2) return avx2::wronskian(f1, f2, g1, g2, out, n);
  scalar::wronskian(f1, f2, g1, g2, out, n);
}

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  if (current() == Backend::avx2) return avx2::caxpy(a, x, y, n);
  scalar::caxpy(a, x, y, n);
}

void caxpy_conj(cplx a, const cplx* x, cplx* y, std::size_t n) {
  if (current() == Backend::avx2) return avx2::caxpy_conj(a, x, y, n);
  scalar::caxpy_conj(a, x, y, n);
}

double weighted_dot(const double* w, const double* f, const double* g, std::size_t n) {
  if (current() == Backend::avx2) return avx2::weighted_dot(w, f, g, n);
  return scalar::weighted_dot(w, f, g, n);
}

void weierstrass_frame(const cplx* psi1, const cplx* psi2, double* xx, double* xy, double* density,
                       std::size_t n) {
  if (current() == Backend::avx2) return avx2::weierstrass_frame(psi1, psi2, xx, xy, density, n);
  scalar::weierstrass_frame(psi1, psi2, xx, xy, density, n);
}

}  // namespace soliton::simd
