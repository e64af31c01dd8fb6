#include <random>
#include <vector>

#include "doctest.h"
#include "hif/contour_quad.hpp"
#include "hif/kernels.hpp"

using namespace hif;
using namespace hif::kernels;

namespace {

struct IsaGuard {
  Isa saved = active_isa();
  ~IsaGuard() { set_isa(saved); }
};

std::vector<cplx> random_vec(std::size_t n, std::mt19937_64& rng, double shift = 0) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(u(rng) + shift, u(rng));
  return v;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar and AVX2 kernels agree") {
  if (detected_isa() != Isa::Avx2) {
    MESSAGE("AVX2 not available; vector kernels not exercised");
    return;
  }
  std::mt19937_64 rng(7);
  std::vector<std::size_t> sizes;
  for (std::size_t n = 0; n <= 17; ++n) sizes.push_back(n);
  sizes.insert(sizes.end(), {63, 64, 65, 1000, 4097});
  for (std::size_t n : sizes) {
    auto w = random_vec(n, rng), q = random_vec(n, rng, 3.0), a = random_vec(n, rng), b = random_vec(n, rng);
    cplx c(0.5, -0.25);
    CHECK_MESSAGE(rel(cauchy_sum_avx2(w.data(), q.data(), n, c), cauchy_sum_scalar(w.data(), q.data(), n, c)) < 1e-13,
                  "n=" << n);
    CHECK_MESSAGE(rel(cdot_avx2(a.data(), b.data(), n), cdot_scalar(a.data(), b.data(), n)) < 1e-13, "n=" << n);
  }
}

TEST_CASE("scalar kernels against direct loops") {
  std::vector<cplx> w = {1, cplx(0, 2), -3}, q = {cplx(1, 1), 2, cplx(0, -1)};
  cplx c(1, 0);
  cplx expect = 1.0 / cplx(2, 1) + cplx(0, 2) / 3.0 - 3.0 / cplx(1, -1);
  CHECK(std::abs(cauchy_sum_scalar(w.data(), q.data(), 3, c) - expect) < 1e-15);
  CHECK(std::abs(cdot_scalar(w.data(), q.data(), 3) - (cplx(1, 1) + cplx(0, 4) + cplx(0, 3))) < 1e-15);
  CHECK(cdot_scalar(w.data(), q.data(), 0) == cplx(0));
}

TEST_CASE("dispatch selection") {
  IsaGuard guard;
  set_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  set_isa(Isa::Avx2);
  CHECK(active_isa() == detected_isa());
  CHECK(isa_name(Isa::Scalar) == "scalar");
  CHECK(isa_name(Isa::Avx2) == "avx2");
}

TEST_CASE("k = 3 quadrature is the same under both instruction sets") {
  IsaGuard guard;
  HifQuadOptions opt;
  opt.nodes = 61;
  set_isa(Isa::Scalar);
  cplx s = numeric_Z_hif(3, cplx(0.05), opt).value;
  set_isa(Isa::Avx2);
  cplx v = numeric_Z_hif(3, cplx(0.05), opt).value;
  CHECK(std::abs(s - v) < 1e-13);
}
