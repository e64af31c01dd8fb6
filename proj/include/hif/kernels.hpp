#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace hif::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

// Best instruction set supported by the running CPU.
Isa detected_isa();
// Instruction set used by the dispatching entry points; HIF_FORCE_SCALAR=1 forces Scalar.
Isa active_isa();
// Override the dispatch choice (falls back to Scalar if the CPU lacks the request).
void set_isa(Isa isa);
std::string isa_name(Isa isa);

// sum_j w[j] / (c + q[j])
cplx cauchy_sum_scalar(const cplx* w, const cplx* q, std::size_t n, cplx c);
cplx cauchy_sum_avx2(const cplx* w, const cplx* q, std::size_t n, cplx c);
cplx cauchy_sum(const cplx* w, const cplx* q, std::size_t n, cplx c);

// sum_j a[j] * b[j]
cplx cdot_scalar(const cplx* a, const cplx* b, std::size_t n);
cplx cdot_avx2(const cplx* a, const cplx* b, std::size_t n);
cplx cdot(const cplx* a, const cplx* b, std::size_t n);

}  // namespace hif::kernels
