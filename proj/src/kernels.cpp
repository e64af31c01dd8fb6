#include "hif/kernels.hpp"

#include <cstdlib>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define HIF_X86 1
#endif

namespace hif::kernels {

namespace {

bool cpu_has_avx2() {
#ifdef HIF_X86
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("HIF_FORCE_SCALAR");
  if (env && env[0] == '1') return Isa::Scalar;
  return detected_isa();
}

Isa& current() {
  static Isa isa = initial_isa();
  return isa;
}

}  // namespace

Isa detected_isa() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return current(); }

void set_isa(Isa isa) { current() = (isa == Isa::Avx2 && !cpu_has_avx2()) ? Isa::Scalar : isa; }

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

cplx cauchy_sum_scalar(const cplx* w, const cplx* q, std::size_t n, cplx c) {
  double sr = 0, si = 0;
  for (std::size_t j = 0; j < n; ++j) {
    double zr = c.real() + q[j].real(), zi = c.imag() + q[j].imag();
    double wr = w[j].real(), wi = w[j].imag();
    double inv = 1.0 / (zr * zr + zi * zi);
    sr += (wr * zr + wi * zi) * inv;
    si += (wi * zr - wr * zi) * inv;
  }
  return {sr, si};
}

cplx cdot_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double sr = 0, si = 0;
  for (std::size_t j = 0; j < n; ++j) {
    sr += a[j].real() * b[j].real() - a[j].imag() * b[j].imag();
    si += a[j].real() * b[j].imag() + a[j].imag() * b[j].real();
  }
  return {sr, si};
}

#ifdef HIF_X86

__attribute__((target("avx2,fma"))) cplx cauchy_sum_avx2(const cplx* w, const cplx* q, std::size_t n, cplx c) {
  const double* wp = reinterpret_cast<const double*>(w);
  const double* qp = reinterpret_cast<const double*>(q);
  const __m256d cv = _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag());
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  // two complex numbers per register, two registers per iteration
  for (; j + 4 <= n; j += 4) {
    __m256d z0 = _mm256_add_pd(cv, _mm256_loadu_pd(qp + 2 * j));
    __m256d z1 = _mm256_add_pd(cv, _mm256_loadu_pd(qp + 2 * j + 4));
    __m256d w0 = _mm256_loadu_pd(wp + 2 * j);
    __m256d w1 = _mm256_loadu_pd(wp + 2 * j + 4);
    __m256d zr0 = _mm256_movedup_pd(z0), zi0 = _mm256_permute_pd(z0, 0xF);
    __m256d zr1 = _mm256_movedup_pd(z1), zi1 = _mm256_permute_pd(z1, 0xF);
    __m256d num0 = _mm256_fmsubadd_pd(w0, zr0, _mm256_mul_pd(_mm256_permute_pd(w0, 0x5), zi0));
    __m256d num1 = _mm256_fmsubadd_pd(w1, zr1, _mm256_mul_pd(_mm256_permute_pd(w1, 0x5), zi1));
    __m256d den0 = _mm256_fmadd_pd(zr0, zr0, _mm256_mul_pd(zi0, zi0));
    __m256d den1 = _mm256_fmadd_pd(zr1, zr1, _mm256_mul_pd(zi1, zi1));
    acc0 = _mm256_add_pd(acc0, _mm256_div_pd(num0, den0));
    acc1 = _mm256_add_pd(acc1, _mm256_div_pd(num1, den1));
  }
  for (; j + 2 <= n; j += 2) {
    __m256d z0 = _mm256_add_pd(cv, _mm256_loadu_pd(qp + 2 * j));
    __m256d w0 = _mm256_loadu_pd(wp + 2 * j);
    __m256d zr0 = _mm256_movedup_pd(z0), zi0 = _mm256_permute_pd(z0, 0xF);
    __m256d num0 = _mm256_fmsubadd_pd(w0, zr0, _mm256_mul_pd(_mm256_permute_pd(w0, 0x5), zi0));
    __m256d den0 = _mm256_fmadd_pd(zr0, zr0, _mm256_mul_pd(zi0, zi0));
    acc0 = _mm256_add_pd(acc0, _mm256_div_pd(num0, den0));
  }
  alignas(32) double out[4];
  _mm256_store_pd(out, _mm256_add_pd(acc0, acc1));
  cplx s(out[0] + out[2], out[1] + out[3]);
  if (j < n) s += cauchy_sum_scalar(w + j, q + j, n - j, c);
  return s;
}

__attribute__((target("avx2,fma"))) cplx cdot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    __m256d x = _mm256_loadu_pd(ap + 2 * j);
    __m256d y = _mm256_loadu_pd(bp + 2 * j);
    __m256d yr = _mm256_movedup_pd(y), yi = _mm256_permute_pd(y, 0xF);
    // (xr yr - xi yi, xi yr + xr yi)
    acc = _mm256_add_pd(acc, _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(_mm256_permute_pd(x, 0x5), yi)));
  }
  alignas(32) double out[4];
  _mm256_store_pd(out, acc);
  cplx s(out[0] + out[2], out[1] + out[3]);
  if (j < n) s += cdot_scalar(a + j, b + j, n - j);
  return s;
}

#else

cplx cauchy_sum_avx2(const cplx* w, const cplx* q, std::size_t n, cplx c) { return cauchy_sum_scalar(w, q, n, c); }
cplx cdot_avx2(const cplx* a, const cplx* b, std::size_t n) { return cdot_scalar(a, b, n); }

#endif

cplx cauchy_sum(const cplx* w, const cplx* q, std::size_t n, cplx c) {
  return active_isa() == Isa::Avx2 ? cauchy_sum_avx2(w, q, n, c) : cauchy_sum_scalar(w, q, n, c);
}

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
  return active_isa() == Isa::Avx2 ? cdot_avx2(a, b, n) : cdot_scalar(a, b, n);
}

}  // namespace hif::kernels
