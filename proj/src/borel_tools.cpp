#include "hif/borel_tools.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>

namespace hif {

namespace {

const double kPi = 3.14159265358979323846;

mpz_class factorial(long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

}  // namespace

BorelTransform borel_transform(const std::vector<GaussRat>& a, int m) {
  if (m < 1) throw std::invalid_argument("Borel order m must be at least 1");
  BorelTransform bt;
  bt.m = m;
  for (size_t n = 0; n < a.size(); ++n) bt.b.push_back(a[n] / GaussRat(mpq_class(factorial(m * static_cast<long>(n)))));
  return bt;
}

BorelTransform borel_transform(const PowerSeries& s, int m) { return borel_transform(s.a, m); }

std::vector<GaussRat> inverse_borel(const BorelTransform& bt) {
  std::vector<GaussRat> a;
  for (size_t n = 0; n < bt.b.size(); ++n)
    a.push_back(bt.b[n] * GaussRat(mpq_class(factorial(bt.m * static_cast<long>(n)))));
  return a;
}

bool in_domain(cplx lambda, int m, double rho) {
  if (lambda == cplx(0)) return true;
  cplx w = std::pow(lambda, -1.0 / m);
  return w.real() > 1.0 / rho;
}

bool in_half_disk(cplx lambda, int m, double rho) {
  if (lambda == cplx(0)) return true;
  return std::abs(lambda) < std::pow(rho, m) && std::abs(std::arg(lambda)) < m * kPi / 2;
}

void pade(const std::vector<cplx>& c, int L, int M, std::vector<cplx>& p, std::vector<cplx>& q) {
  if (L < 0 || M < 0 || static_cast<int>(c.size()) < L + M + 1) throw std::invalid_argument("not enough coefficients");
  auto coef = [&](int i) { return i < 0 ? cplx(0) : c[i]; };
  q.assign(M + 1, 0);
  q[0] = 1;
  if (M > 0) {
    // sum_{j=1..M} q_j c_{L+i-j} = -c_{L+i}, i = 1..M
    Eigen::MatrixXcd A(M, M);
    Eigen::VectorXcd rhs(M);
    for (int i = 1; i <= M; ++i) {
      for (int j = 1; j <= M; ++j) A(i - 1, j - 1) = coef(L + i - j);
      rhs(i - 1) = -coef(L + i);
    }
    Eigen::VectorXcd sol = A.fullPivLu().solve(rhs);
    for (int j = 1; j <= M; ++j) q[j] = sol(j - 1);
  }
  p.assign(L + 1, 0);
  for (int i = 0; i <= L; ++i)
    for (int j = 0; j <= std::min(i, M); ++j) p[i] += q[j] * coef(i - j);
}

namespace {

cplx horner(const std::vector<cplx>& c, cplx x) {
  cplx acc = 0;
  for (size_t j = c.size(); j-- > 0;) acc = acc * x + c[j];
  return acc;
}

std::vector<cplx> roots(std::vector<cplx> c) {
  while (!c.empty() && std::abs(c.back()) < 1e-300) c.pop_back();
  int d = static_cast<int>(c.size()) - 1;
  if (d < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> out;
  for (int i = 0; i < d; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

}  // namespace

ResumResult resum(const BorelTransform& bt, cplx lambda, ResumMethod method) {
  if (bt.b.size() < 3) throw std::invalid_argument("resummation needs at least 3 coefficients");
  ResumResult r;
  const int m = bt.m;
  std::vector<cplx> b;
  for (const auto& x : bt.b) b.push_back(x.to_complex());
  std::vector<cplx> p = b, q{1.0};
  if (method == ResumMethod::Pade) {
    int n = static_cast<int>(b.size());
    int M = (n - 1) / 2, L = n - 1 - M;
    pade(b, L, M, p, q);
    r.pade_L = L;
    r.pade_M = M;
    r.poles = roots(q);
    // a pole u* on the ray {lambda t^m : t > 0} makes the inversion integral ill-defined
    for (cplx u : r.poles) {
      if (lambda == cplx(0)) break;
      cplx t = u / lambda;
      if (t.real() > 0 && std::abs(t.imag()) <= 1e-8 * std::abs(t))
        throw PadePoleError("Pade pole at u = " + std::to_string(u.real()) + (u.imag() < 0 ? "" : "+") +
                            std::to_string(u.imag()) + "i lies on the integration ray");
    }
  }
  auto f = [&](double t) {
    double w = std::exp(-t);
    if (w == 0) return cplx(0);
    cplx u = lambda * std::pow(t, m);
    return w * horner(p, u) / horner(q, u);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double er = 0, ei = 0;
  double re = integrator.integrate([&](double t) { return f(t).real(); }, 1e-13, &er);
  double im = integrator.integrate([&](double t) { return f(t).imag(); }, 1e-13, &ei);
  r.value = cplx(re, im);
  r.error = std::hypot(er, ei);
  return r;
}

GrowthFit growth_fit(const std::vector<double>& abs_a) {
  std::vector<double> qs, ys;
  for (size_t q = 0; q < abs_a.size(); ++q)
    if (abs_a[q] > 0 && std::isfinite(abs_a[q])) {
      qs.push_back(static_cast<double>(q));
      ys.push_back(std::log(abs_a[q]));
    }
  if (qs.size() < 4) throw std::invalid_argument("growth fit needs at least 4 nonzero coefficients");
  Eigen::MatrixXd X(qs.size(), 3);
  Eigen::VectorXd y(qs.size());
  for (size_t i = 0; i < qs.size(); ++i) {
    double q = qs[i];
    X(i, 0) = 1;
    X(i, 1) = q;
    X(i, 2) = q > 0 ? q * std::log(q) : 0;
    y(i) = ys[i];
  }
  Eigen::VectorXd c = X.colPivHouseholderQr().solve(y);
  GrowthFit g;
  g.intercept = c(0);
  g.rate = std::exp(c(1));
  g.m_hat = c(2);
  g.points = static_cast<int>(qs.size());
  return g;
}

GrowthFit growth_fit(const PowerSeries& s) {
  std::vector<double> a;
  for (const auto& x : s.a) a.push_back(std::abs(x.to_complex()));
  return growth_fit(a);
}

}  // namespace hif
