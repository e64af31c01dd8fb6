#include <chrono>

#include "doctest.h"
#include "hif/wick_engine.hpp"
#include "test_util.hpp"

using namespace hif;

namespace {

mpz_class fact(long n) {
  mpz_class r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

// a_q at N = 1 for any bubble with k white vertices: the bubble reduces to |t|^(2k).
GaussRat single_mode(int k, int q) {
  mpq_class v(fact(static_cast<long>(k) * q), fact(q));
  v.canonicalize();
  return GaussRat(q % 2 ? mpq_class(-v) : v);
}

}  // namespace

TEST_CASE("mixed Wick moments") {
  MixedCovariance cov;
  int x = cov.add_real("x", GaussRat::I());
  auto [z, zb] = cov.add_complex("z");
  auto xp = cov.add_xpair("alpha", "beta");
  CHECK(mixed_wick_moment({x, x, x, x}, cov) == GaussRat(-3));
  CHECK(mixed_wick_moment({x, x}, cov) == GaussRat::I());
  CHECK(mixed_wick_moment({x, x, x}, cov) == GaussRat(0));
  CHECK(mixed_wick_moment({z, zb}, cov) == GaussRat(1));
  CHECK(mixed_wick_moment({z, z}, cov) == GaussRat(0));
  CHECK(mixed_wick_moment({z, z, zb, zb}, cov) == GaussRat(2));
  CHECK(mixed_wick_moment({xp[0], xp[3]}, cov) == GaussRat(0, -1));
  CHECK(mixed_wick_moment({xp[1], xp[2]}, cov) == GaussRat(0, -1));
  CHECK(mixed_wick_moment({xp[0], xp[2]}, cov) == GaussRat(0));
  CHECK(mixed_wick_moment({xp[0], xp[1]}, cov) == GaussRat(0));
  CHECK(mixed_wick_moment({}, cov) == GaussRat(1));
  CHECK(cov.find("alpha") == xp[0]);
  CHECK(cov.find("nope") == -1);
}

TEST_CASE("matrix k = 2, N = 2, s = 1: a1 = -8") {
  PowerSeries d = direct_series(load("matrix2"), 2, 1, 1);
  REQUIRE(d.a.size() == 2);
  CHECK(d.a[0] == GaussRat(1));
  CHECK(d.a[1] == GaussRat(-8));
}

TEST_CASE("N = 1 coefficients equal (-1)^q (kq)!/q!") {
  for (const char* name : {"dipole3", "matrix2", "matrix3", "matrix4", "b1"}) {
    Bubble b = load(name);
    int k = b.k();
    int order = 8 / k;
    PowerSeries d = direct_series(b, 1, 0, order);
    for (int q = 0; q <= order; ++q) CHECK_MESSAGE(d.a[q] == single_mode(k, q), name << " q=" << q);
  }
}

TEST_CASE("HIF expansion equals the direct expansion") {
  struct Case {
    const char* name;
    int order;
  };
  for (Case c : {Case{"matrix2", 3}, Case{"matrix3", 2}, Case{"matrix4", 2}, Case{"b1", 2}, Case{"b2", 2},
                 Case{"k5", 1}}) {
    Bubble b = load(c.name);
    BlockMatrixSpec spec = build_block_spec(b, optimize_plan(b));
    auto direct = direct_coefficients(b, c.order);
    auto hif = hif_coefficients(spec, c.order);
    REQUIRE(direct.size() == hif.size());
    for (size_t q = 0; q < direct.size(); ++q)
      CHECK_MESSAGE(direct[q] == hif[q], c.name << " q=" << q << " direct " << direct[q].str() << " hif " << hif[q].str());
    for (int N : {1, 2, 3}) {
      auto a = direct_series(b, N, 1, c.order);
      auto h = hif_series(spec, N, 1, c.order);
      CHECK(a.a == h.a);
    }
  }
}

TEST_CASE("HIF coefficients do not depend on the plan") {
  Bubble b = load("b1");
  auto cuts = find_symmetric_cuts(b);
  auto direct = direct_coefficients(b, 2);
  int tried = 0;
  for (const auto& cut : cuts) {
    for (const auto& order : admissible_peel_orders(b, cut)) {
      DecompositionPlan plan = decompose(b, cut, order);
      if (plan.theta == 0) continue;
      CHECK(hif_coefficients(build_block_spec(b, plan), 2) == direct);
      ++tried;
    }
  }
  CHECK(tried >= 2);
}

TEST_CASE("odd-q coefficients of the g^2 expansion vanish below order k") {
  Bubble b = load("matrix3");
  BlockMatrixSpec spec = build_block_spec(b, optimize_plan(b));
  for (int n = 1; n < 3; ++n) CHECK(hif_g2_coefficient(spec, n).terms.empty());
  CHECK_FALSE(hif_g2_coefficient(spec, 3).terms.empty());
}

TEST_CASE("pairing cap") {
  Bubble b = load("matrix3");
  CHECK_THROWS_AS(direct_coefficients(b, 3), CapExceeded);
  WickOptions opt;
  opt.cap = 9;
  auto c = direct_coefficients(b, 3, opt);
  CHECK(c[3].at(1) == single_mode(3, 3));
}

TEST_CASE("normalized tensor covariance rescales by N^-(D-1) per pair") {
  Bubble b = load("b1");
  WickOptions opt;
  opt.normalize_T = true;
  auto plain = direct_coefficients(b, 2);
  auto norm = direct_coefficients(b, 2, opt);
  for (int N : {2, 3})
    for (int q = 0; q <= 2; ++q)
      CHECK(norm[q].at(N) == plain[q].at(N) * rational_power(N, mpq_class(-2 * 3 * q)));
  BlockMatrixSpec spec = build_block_spec(b, optimize_plan(b));
  CHECK(hif_coefficients(spec, 2, opt) == norm);
}

TEST_CASE("rational powers of N") {
  CHECK(rational_power(4, mpq_class(1, 2)) == GaussRat(2));
  CHECK(rational_power(8, mpq_class(-2, 3)) == GaussRat(mpq_class(1, 4)));
  CHECK_THROWS(rational_power(2, mpq_class(1, 2)));
}
