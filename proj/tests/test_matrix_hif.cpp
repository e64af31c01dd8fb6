#include <cmath>
#include <random>

#include "doctest.h"
#include "hif/matrix_hif.hpp"
#include "test_util.hpp"

using namespace hif;

namespace {

const double kPi = 3.14159265358979323846;
const cplx kI(0, 1);

FieldMatrices random_fields(const MatrixHIFSpec& s, int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  FieldMatrices f;
  for (const auto& name : s.fields) {
    Eigen::MatrixXcd m(N, N);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) m(r, c) = cplx(g(rng), g(rng));
    f[name] = m;
  }
  return f;
}

cplx char_lhs(const Eigen::MatrixXcd& M, cplx g, cplx x) {
  Eigen::MatrixXcd A = (1.0 - x) * Eigen::MatrixXcd::Identity(M.rows(), M.cols()) - g * M;
  return A.determinant();
}

}  // namespace

TEST_CASE("k = 3 layout: first row i beta1, i alpha1, i 1") {
  MatrixHIFSpec s = build_matrix_spec(3);
  REQUIRE(s.slots.size() == 3);
  CHECK(s.eta == 1);
  CHECK(s.slots[0].row_field == "beta1");
  CHECK(s.slots[1].row_field == "alpha1");
  CHECK(s.slots[2].row_field.empty());
  CHECK(s.slots[0].col_has_i);
  CHECK(s.g_lambda_power == mpq_class(1, 6));
  CHECK(s.g_N_power == mpq_class(-1, 3));
}

TEST_CASE("k = 4 layout has sigma and five blocks") {
  MatrixHIFSpec s = build_matrix_spec(4);
  CHECK(s.slots.size() + 1 == 5);
  CHECK(s.eta == 0);
  CHECK(std::find(s.fields.begin(), s.fields.end(), "sigma") != s.fields.end());
  CHECK(s.g_lambda_power == mpq_class(1, 8));
  CHECK(s.g_N_power == mpq_class(-3, 8));
  CHECK_THROWS_AS(build_matrix_spec(1), std::invalid_argument);
}

TEST_CASE("k = 2: H is sigma + sigma^dagger") {
  std::mt19937_64 rng(1);
  MatrixHIFSpec s = build_matrix_spec(2);
  CHECK(s.fields == std::vector<std::string>{"sigma"});
  auto f = random_fields(s, 3, rng);
  Eigen::MatrixXcd H = matrix_H(s, f, 3);
  CHECK((H - (f["sigma"] + f["sigma"].adjoint())).norm() < 1e-14);
}

TEST_CASE("k = 3, N = 1: hand-built arrowhead and Schur complement") {
  std::mt19937_64 rng(2);
  MatrixHIFSpec s = build_matrix_spec(3);
  auto f = random_fields(s, 1, rng);
  cplx a = f["alpha1"](0, 0), b = f["beta1"](0, 0);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(4, 4);
  M(0, 1) = kI * b;
  M(0, 2) = kI * a;
  M(0, 3) = kI;
  M(1, 0) = kI * std::conj(b);
  M(2, 0) = 1;
  M(3, 0) = std::conj(a);
  CHECK((matrix_M(s, f, 1) - M).norm() < 1e-15);
  cplx g(0.3, 0.1);
  for (cplx x : {cplx(0.2, 0.0), cplx(-0.5, 0.3), cplx(1.7, -0.4)}) {
    cplx rhs = std::pow(1.0 - x, 2) *
               (std::pow(1.0 - x, 2) - g * g * (kI * (a + std::conj(a)) - b * std::conj(b)));
    CHECK(std::abs(char_lhs(M, g, x) - rhs) < 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("k = 4, N = 2: characteristic polynomial identity at x = 0.3 + 0.2i") {
  std::mt19937_64 rng(4);
  MatrixHIFSpec s = build_matrix_spec(4);
  auto f = random_fields(s, 2, rng);
  // H_4 = beta2 sigma^dagger + alpha2^dagger + h.c.
  Eigen::MatrixXcd t = f["beta2"] * f["sigma"].adjoint() + f["alpha2"].adjoint();
  Eigen::MatrixXcd H = t + t.adjoint();
  CHECK((matrix_H(s, f, 2) - H).norm() < 1e-13);
  CHECK((matrix_U_inner(s, f, 2) - kI * H).norm() < 1e-13);
  cplx g(0.4, -0.2), x(0.3, 0.2);
  cplx rhs = std::pow(1.0 - x, 6) *
             ((1.0 - x) * (1.0 - x) * Eigen::MatrixXcd::Identity(2, 2) - g * g * kI * H).determinant();
  cplx lhs = char_lhs(matrix_M(s, f, 2), g, x);
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  auto rep = char_poly_identity_check(s, 2, f, g, {x, cplx(0.1), cplx(-0.7, 0.5), cplx(2.0, 1.0), cplx(0.5, -0.5),
                                                   cplx(0.0, 1.0), cplx(1.5), cplx(-1.0, -1.0)});
  CHECK(rep.pass);
  CHECK(rep.samples == 8);
}

TEST_CASE("odd k: U inner equals i H - beta1 beta1^dagger") {
  std::mt19937_64 rng(8);
  for (int k : {3, 5}) {
    MatrixHIFSpec s = build_matrix_spec(k);
    auto f = random_fields(s, 2, rng);
    Eigen::MatrixXcd expect = kI * matrix_H(s, f, 2) - f["beta1"] * f["beta1"].adjoint();
    CHECK((matrix_U_inner(s, f, 2) - expect).norm() < 1e-12);
  }
}

TEST_CASE("zero fields: both sides reduce to the identity-slot coupling") {
  MatrixHIFSpec s = build_matrix_spec(3);
  FieldMatrices zero;
  for (const auto& n : s.fields) zero[n] = Eigen::MatrixXcd::Zero(2, 2);
  std::vector<GaussRat> xs;
  for (int i = 0; i < 8; ++i) xs.push_back(GaussRat(mpq_class(i, 3), mpq_class(1, i + 2)));
  ExactFields ez;
  for (const auto& n : s.fields) ez[n] = ExactMatrix(2, std::vector<GaussRat>(2));
  auto rep = char_poly_identity_check(s, 2, ez, GaussRat(mpq_class(1, 2)), xs);
  CHECK(rep.pass);
  CHECK(rep.exact);
  // eigenvalues of 1 - gM: 1 - g sqrt(i), 1 + g sqrt(i), and 1 with multiplicity 2, per N
  double g = 0.2;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd::Identity(8, 8) - g * matrix_M(s, zero, 2));
  std::vector<cplx> want = {1.0 - g * std::sqrt(kI), 1.0 + g * std::sqrt(kI), 1.0, 1.0};
  for (int i = 0; i < 8; ++i) {
    double best = 1e9;
    for (cplx w : want) best = std::min(best, std::abs(es.eigenvalues()(i) - w));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("exact characteristic polynomial identity on random rational fields") {
  int checked = 0;
  for (int k : {2, 3, 4})
    for (int N : {1, 2}) {
      MatrixHIFSpec s = build_matrix_spec(k);
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::vector<GaussRat> xs;
        for (int i = 0; i < 8; ++i) xs.push_back(GaussRat(mpq_class(2 * i - 5, 7), mpq_class(i, 3)));
        auto rep = char_poly_identity_check(s, N, random_exact_fields(s, N, seed), GaussRat(mpq_class(2, 3), mpq_class(1, 5)), xs);
        CHECK_MESSAGE(rep.pass, "k=" << k << " N=" << N << " seed=" << seed);
        CHECK(rep.exact);
        ++checked;
      }
    }
  CHECK(checked == 120);
}

TEST_CASE("exact check detects a wrong matrix") {
  MatrixHIFSpec s = build_matrix_spec(3);
  s.slots[1].col_has_i = true;
  std::vector<GaussRat> xs;
  for (int i = 0; i < 8; ++i) xs.push_back(GaussRat(mpq_class(i, 5)));
  auto rep = char_poly_identity_check(s, 1, random_exact_fields(s, 1, 3), GaussRat(mpq_class(1, 2)), xs);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("matrix spec coincides with the block spec of the cycle bubble") {
  for (int k = 2; k <= 5; ++k) {
    Bubble b = load("matrix" + std::to_string(k));
    BlockMatrixSpec bs = build_block_spec(b, optimize_plan(b));
    CHECK_MESSAGE(compare_with_block_spec(build_matrix_spec(k), bs).empty(), "k=" << k);
  }
}

TEST_CASE("radius, regulator and bound values") {
  CHECK(shrinking_radius(2, 2, 1.0) == doctest::Approx(0.25));
  CHECK(lemma_eps(3, 1.0) == doctest::Approx(std::sin(kPi / 12) / (4 * std::sqrt(3.0))));
  MatrixHIFSpec s = build_matrix_spec(3);
  double rho = shrinking_radius(2, 2);
  auto rep = spectrum_and_resolvent_check(s, 2, std::polar(0.5 * rho * rho, 0.1), rho, -1, 1, 1);
  CHECK(rep.bound == doctest::Approx(3.8637033051562732));
  CHECK(rep.bound_eps == doctest::Approx(2 * 3.8637033051562732));
  CHECK(rep.n_bound == doctest::Approx(4 * std::sqrt(3.0)));
  CHECK_THROWS_AS(spectrum_and_resolvent_check(s, 2, cplx(rho * rho * 1.1), rho, -1, 1, 1), std::invalid_argument);
  double rho1 = shrinking_radius(1, 2);
  CHECK_THROWS_AS(spectrum_and_resolvent_check(build_matrix_spec(2), 2, std::polar(0.5 * rho1, 1.7), rho1, -1, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("spectrum exclusion and deformation norm at 0.9 of the boundary") {
  for (int k : {2, 3})
    for (int N : {1, 2}) {
      int m = k - 1;
      double rho = shrinking_radius(m, N);
      cplx lambda = std::polar(0.9 * std::pow(rho, m), 0.9 * m * kPi / 2);
      auto rep = spectrum_and_resolvent_check(build_matrix_spec(k), N, lambda, rho, -1, 1000, 42);
      CHECK(rep.samples == 1000);
      CHECK_MESSAGE(rep.spectral_violations == 0, "k=" << k << " N=" << N);
      CHECK(rep.min_eig >= std::sin(kPi / (4 * k)) - 1e-9);
      CHECK(rep.n_violations == 0);
      CHECK(rep.max_n_norm <= 2 * std::sqrt(k) * N);
    }
}
