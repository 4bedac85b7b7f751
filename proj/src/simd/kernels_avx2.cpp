#include <immintrin.h>

#include "soliton/simd/kernels.hpp"

namespace soliton::simd::avx2 {

namespace {

// Two interleaved complex numbers per register: (re0, im0, re1, im1).
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d br = _mm256_movedup_pd(b);
  const __m256d bi = _mm256_permute_pd(b, 0xF);
  const __m256d as = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(as, bi));
}

inline __m256d cscale(__m256d x, __m256d ar, __m256d ai) {
  return _mm256_fmaddsub_pd(x, ar, _mm256_mul_pd(_mm256_permute_pd(x, 0x5), ai));
}

// Splits 4 complex values into real and imaginary lanes, lane order (0,2,1,3).
inline void split4(const cplx* p, __m256d& re, __m256d& im) {
  const __m256d a = load2(p);
  const __m256d b = load2(p + 2);
  re = _mm256_unpacklo_pd(a, b);
  im = _mm256_unpackhi_pd(a, b);
}

// Restores natural lane order after split4.
inline __m256d unshuffle(__m256d v) { return _mm256_permute4x64_pd(v, 0xD8); }

}  // namespace

void wronskian(const cplx* f1, const cplx* f2, const cplx* g1, const cplx* g2, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = cmul(load2(f1 + i), load2(g2 + i));
    const __m256d b = cmul(load2(f2 + i), load2(g1 + i));
    store2(out + i, _mm256_sub_pd(a, b));
  }
  scalar::wronskian(f1 + i, f2 + i, g1 + i, g2 + i, out + i, n - i);
}

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    store2(y + i, _mm256_add_pd(load2(y + i), cscale(load2(x + i), ar, ai)));
  }
  scalar::caxpy(a, x + i, y + i, n - i);
}

void caxpy_conj(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const __m256d flip = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xc = _mm256_xor_pd(load2(x + i), flip);
    store2(y + i, _mm256_add_pd(load2(y + i), cscale(xc, ar, ai)));
  }
  scalar::caxpy_conj(a, x + i, y + i, n - i);
}

double weighted_dot(const double* w, const double* f, const double* g, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wf = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(f + i));
    acc = _mm256_fmadd_pd(wf, _mm256_loadu_pd(g + i), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  return s + scalar::weighted_dot(w + i, f + i, g + i, n - i);
}

void weierstrass_frame(const cplx* psi1, const cplx* psi2, double* xx, double* xy, double* density,
                       std::size_t n) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p, q, r, s;
    split4(psi1 + i, p, q);
    split4(psi2 + i, r, s);
    const __m256d pp = _mm256_mul_pd(p, p), qq = _mm256_mul_pd(q, q);
    const __m256d rr = _mm256_mul_pd(r, r), ss = _mm256_mul_pd(s, s);
    const __m256d pq = _mm256_mul_pd(p, q), rs = _mm256_mul_pd(r, s);
    const __m256d pmq = _mm256_sub_pd(pp, qq), rms = _mm256_sub_pd(rr, ss);

    const __m256d x1x = _mm256_mul_pd(two, _mm256_sub_pd(rs, pq));
    const __m256d x1y = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_add_pd(pmq, rms));
    const __m256d x2x = _mm256_sub_pd(rms, pmq);
    const __m256d x2y = _mm256_mul_pd(two, _mm256_add_pd(rs, pq));
    const __m256d x3x = _mm256_mul_pd(two, _mm256_fmadd_pd(p, r, _mm256_mul_pd(q, s)));
    const __m256d x3y = _mm256_mul_pd(two, _mm256_fmsub_pd(p, s, _mm256_mul_pd(q, r)));
    const __m256d d = _mm256_add_pd(_mm256_add_pd(pp, qq), _mm256_add_pd(rr, ss));

    _mm256_storeu_pd(xx + i, unshuffle(x1x));
    _mm256_storeu_pd(xy + i, unshuffle(x1y));
    _mm256_storeu_pd(xx + n + i, unshuffle(x2x));
    _mm256_storeu_pd(xy + n + i, unshuffle(x2y));
    _mm256_storeu_pd(xx + 2 * n + i, unshuffle(x3x));
    _mm256_storeu_pd(xy + 2 * n + i, unshuffle(x3y));
    _mm256_storeu_pd(density + i, unshuffle(d));
  }
  // Tail: the scalar kernel writes planar output with stride n, so run it on
  // the remaining nodes one coordinate block at a time.
  for (; i < n; ++i) {
    double tx[3], ty[3], td;
    scalar::weierstrass_frame(psi1 + i, psi2 + i, tx, ty, &td, 1);
    for (int c = 0; c < 3; ++c) {
      xx[c * n + i] = tx[c];
      xy[c * n + i] = ty[c];
    }
    density[i] = td;
  }
}

}  // namespace soliton::simd::avx2
