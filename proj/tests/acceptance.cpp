#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "hif/borel_tools.hpp"
#include "hif/contour_quad.hpp"
#include "hif/corpus.hpp"
#include "hif/matrix_hif.hpp"
#include "hif/positivity.hpp"
#include "hif/wick_engine.hpp"

using namespace hif;

namespace {

const double kPi = 3.14159265358979323846;
const cplx kI(0, 1);

struct Line {
  bool ok = true;
  std::ostringstream why;
  void expect(bool cond, const std::string& msg) {
    if (!cond) {
      if (!ok) why << "; ";
      ok = false;
      why << msg;
    }
  }
};

int failures = 0;

void report(int n, Line& l, const std::string& summary) {
  if (!l.ok) ++failures;
  std::cout << "criterion " << n << ": " << (l.ok ? "PASS" : "FAIL") << " (" << (l.ok ? summary : l.why.str()) << ")"
            << std::endl;
}

Bubble bubble(const std::string& name) { return corpus::load_model(name).bubble; }

std::string q(const mpq_class& v) { return v.get_str(); }

void criterion1() {
  Line l;
  struct Row {
    const char* name;
    int s, k, m;
    mpq_class t, u;
    int gamma, theta, factored;  // gamma < 0: not stated
  };
  Row rows[] = {{"b1", 4, 3, 2, 1, 1, -1, -1, -1},
                {"b2", 4, 3, 2, 3, 7, -1, -1, -1},
                {"k5", 2, 5, 4, 3, 7, 24, 1, 18}};
  for (const Row& r : rows) {
    Bubble b = bubble(r.name);
    DecompositionPlan plan = optimize_plan(b);
    ScalingExponents e = scaling_exponents(plan, r.s);
    BlockMatrixSpec spec = build_block_spec(b, plan);
    std::string p = std::string(r.name) + " ";
    l.expect(e.k == r.k, p + "k=" + std::to_string(e.k));
    l.expect(e.m == r.m, p + "m=" + std::to_string(e.m));
    l.expect(e.t == r.t, p + "t=" + q(e.t) + " expected " + q(r.t));
    l.expect(e.u == r.u, p + "u=" + q(e.u) + " expected " + q(r.u));
    if (r.gamma >= 0) {
      l.expect(spec.gamma == r.gamma, p + "gamma=" + std::to_string(spec.gamma));
      l.expect(spec.theta == r.theta, p + "theta=" + std::to_string(spec.theta));
      l.expect(spec.factored_count == r.factored, p + "factored=" + std::to_string(spec.factored_count));
    }
  }
  report(1, l, "B1 (3,2,1,4,1), B2 (3,2,3,4,7), k5 (5,4,3,2,7) gamma 24 theta 1 factored 18");
}

void criterion2() {
  Line l;
  for (const char* name : {"dipole3", "dipole4", "b1", "b2"})
    l.expect(is_positive(bubble(name)).positive, std::string(name) + " not positive");
  l.expect(!is_positive(bubble("k33")).positive, "k33 positive");
  report(2, l, "dipoles, B1, B2 positive; K33 not positive");
}

void criterion3() {
  Line l;
  int checked = 0;
  for (const auto& name : corpus::names()) {
    Bubble b = bubble(name);
    if (b.rank() < 3) continue;
    DegreeReport d;
    try {
      d = gurau_degree_report(b);
    } catch (const std::exception& e) {
      l.expect(false, name + ": " + e.what());
      continue;
    }
    ++checked;
    l.expect(d.from_jackets == d.from_faces, name + " jackets " + q(d.from_jackets) + " faces " + q(d.from_faces));
  }
  l.expect(gurau_degree(bubble("k33")) == 1, "k33 omega != 1");
  for (const char* name : {"dipole3", "dipole4", "b1", "b2"})
    l.expect(gurau_degree(bubble(name)) == 0, std::string(name) + " omega != 0");
  report(3, l, std::to_string(checked) + " rank >= 3 corpus graphs agree; K33 omega 1; melonic examples omega 0");
}

void criterion4() {
  Line l;
  int compared = 0;
  auto compare = [&](const std::string& name, int N, const mpq_class& s) {
    Bubble b = bubble(name);
    BlockMatrixSpec spec = build_block_spec(b, optimize_plan(b));
    PowerSeries d = direct_series(b, N, s, 2), h = hif_series(spec, N, s, 2);
    l.expect(d.a == h.a, name + " N=" + std::to_string(N) + " mismatch");
    compared += static_cast<int>(d.a.size());
  };
  for (int k : {2, 3, 4})
    for (int N : {1, 2}) compare("matrix:" + std::to_string(k), N, k - 1);
  compare("b1", 1, 4);
  report(4, l, std::to_string(compared) + " exact coefficients equal");
}

void criterion5() {
  Line l;
  int runs = 0;
  for (int k : {2, 3, 4})
    for (int N : {1, 2}) {
      MatrixHIFSpec s = build_matrix_spec(k);
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::vector<GaussRat> xs;
        for (int i = 0; i < 8; ++i) xs.push_back(GaussRat(mpq_class(2 * i - 5, 7), mpq_class(i, 3)));
        auto rep = char_poly_identity_check(s, N, random_exact_fields(s, N, seed),
                                            GaussRat(mpq_class(2, 3), mpq_class(1, 5)), xs);
        l.expect(rep.pass && rep.exact,
                 "k=" + std::to_string(k) + " N=" + std::to_string(N) + " seed=" + std::to_string(seed));
        ++runs;
      }
    }
  report(5, l, std::to_string(runs) + " exact assignments over k in {2,3,4}, N in {1,2}");
}

void criterion6() {
  Line l;
  std::ostringstream sum;
  for (int k : {2, 3})
    for (int N : {1, 2}) {
      int m = k - 1;
      double rho = shrinking_radius(m, N);
      cplx lambda = std::polar(0.9 * std::pow(rho, m), 0.9 * m * kPi / 2);
      auto r = spectrum_and_resolvent_check(build_matrix_spec(k), N, lambda, rho, -1, 1000, 20240 + k * 10 + N);
      std::ostringstream tag;
      tag << "k=" << k << " N=" << N << ": ";
      l.expect(r.spectral_violations == 0, tag.str() + std::to_string(r.spectral_violations) + " spectral");
      l.expect(r.norm_violations == 0, tag.str() + std::to_string(r.norm_violations) + "/1000 norm at eps=0 (max " +
                                           std::to_string(r.max_norm) + " vs " + std::to_string(r.bound) + ")");
      l.expect(r.norm_eps_violations == 0, tag.str() + std::to_string(r.norm_eps_violations) +
                                               "/1000 norm at the small regulator (max " + std::to_string(r.max_norm_eps) +
                                               " vs " + std::to_string(r.bound_eps) + ")");
      l.expect(r.n_violations == 0, tag.str() + std::to_string(r.n_violations) + " deformation norm");
      sum << tag.str() << "min eig " << r.min_eig << "; ";
    }
  report(6, l, sum.str() + "all bounds hold");
}

void criterion7() {
  Line l;
  for (int sign : {+1, -1}) {
    ContourSpec s;
    s.sign = sign;
    s.C = 1.0;
    s.eps = 1.0;
    cplx var = static_cast<double>(sign) * kI;
    double dfact = 1;
    for (int n = 0; n <= 4; ++n) {
      if (n > 0) dfact *= 2 * n - 1;
      QuadResult r = integrate_contour([n](cplx z) { return std::pow(z, 2 * n); }, s);
      cplx expect = dfact * std::pow(var, n);
      l.expect(std::abs(r.value - expect) <= 1e-7, "moment 2n=" + std::to_string(2 * n));
    }
    cplx a(0.2, -0.1);
    s.eps = 0.8;
    QuadResult e = integrate_contour([a](cplx z) { return std::exp(a * z); }, s);
    l.expect(std::abs(e.value - std::exp(0.5 * a * a * var)) <= 1e-8, "exponential rule");
    auto f = [](cplx z) { return 1.0 / (1.0 - 0.3 * kI * z); };
    ContourSpec s1 = s, s2 = s;
    s1.eps = 0.2;
    s2.eps = 0.7;
    QuadResult r1 = integrate_contour(f, s1), r2 = integrate_contour(f, s2);
    l.expect(std::abs(r1.value - r2.value) <= 2 * (r1.error + r2.error) + 1e-14, "eps dependence");
  }
  report(7, l, "moments n <= 4, exponential rule, eps independence, both signs");
}

void criterion8() {
  Line l;
  std::ostringstream sum;
  for (cplx lambda : {cplx(0.05), cplx(0.1), std::polar(0.05, kPi / 4)}) {
    double d = std::abs(numeric_Z_hif(2, lambda).value - numeric_Z_direct(2, lambda).value);
    l.expect(d <= 1e-6, "k=2 diff " + std::to_string(d));
    sum << "k=2 " << d << "; ";
  }
  double d3 = std::abs(numeric_Z_hif(3, 0.05).value - numeric_Z_direct(3, 0.05).value);
  l.expect(d3 <= 1e-4, "k=3 diff " + std::to_string(d3));
  sum << "k=3 " << d3;
  report(8, l, sum.str());
}

void criterion9() {
  Line l;
  PowerSeries s = direct_series(bubble("matrix2"), 1, 0, 4);
  for (int m : {1, 2, 3}) l.expect(inverse_borel(borel_transform(s, m)) == s.a, "round trip m=" + std::to_string(m));
  std::vector<GaussRat> geo(40, GaussRat(mpq_class(1, 2)));
  for (size_t i = 0; i < geo.size(); ++i) geo[i] = pow(GaussRat(mpq_class(1, 2)), static_cast<int>(i));
  cplx g = resum(borel_transform(geo, 1), cplx(0.8), ResumMethod::Truncated).value;
  l.expect(std::abs(g - 1.0 / (1.0 - 0.4)) <= 1e-6, "geometric");
  double d = std::abs(resum(borel_transform(s, 1), cplx(0.1), ResumMethod::Pade).value -
                      numeric_Z_direct(2, cplx(0.1)).value);
  l.expect(d <= 1e-3, "k=2 resummation diff " + std::to_string(d));
  report(9, l, "round trip exact; geometric; k=2 Pade diff " + std::to_string(d));
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  void (*checks[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                        criterion6, criterion7, criterion8, criterion9};
  for (int i = 0; i < 9; ++i) {
    try {
      checks[i]();
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "criterion " << i + 1 << ": FAIL (exception: " << e.what() << ")" << std::endl;
    }
  }
  std::cout << "criterion 10: OUT OF SCOPE (uniform-in-N analyticity and the planar limit are not checked at desk scale)"
            << std::endl;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << failures << " of 9 checked criteria failed, " << secs << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
