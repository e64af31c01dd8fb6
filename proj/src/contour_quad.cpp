#include "hif/contour_quad.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "hif/kernels.hpp"

namespace hif {

namespace {

const double kPi = 3.14159265358979323846;
const cplx kI(0, 1);

// Adaptive trapezoid on [-L, L] by node doubling; g already includes every weight except h.
QuadResult trapezoid(const std::function<cplx(double)>& g, double L, int fixed_nodes, double rel_tol, int max_nodes) {
  QuadResult r;
  r.L = L;
  if (fixed_nodes > 0) {
    int n = std::max(fixed_nodes | 1, 3);
    double h = 2 * L / (n - 1);
    cplx fine = 0, coarse = 0;
    double mag = 0;
    for (int j = 0; j < n; ++j) {
      double wt = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      cplx v = g(-L + j * h);
      fine += wt * v;
      mag += std::abs(v);
      if (j % 2 == 0) coarse += ((j == 0 || j == n - 1) ? 0.5 : 1.0) * v;
    }
    r.value = fine * h;
    r.error = std::abs(fine * h - coarse * (2 * h)) + 8 * DBL_EPSILON * mag * h;
    r.nodes = n;
    return r;
  }
  int n = 257;
  double h = 2 * L / (n - 1);
  cplx sum = 0.5 * (g(-L) + g(L));
  double mag = std::abs(sum);
  for (int j = 1; j < n - 1; ++j) {
    cplx v = g(-L + j * h);
    sum += v;
    mag += std::abs(v);
  }
  cplx T = sum * h;
  while (true) {
    cplx mid = 0;
    for (int j = 0; j < n - 1; ++j) {
      cplx v = g(-L + (j + 0.5) * h);
      mid += v;
      mag += std::abs(v);
    }
    sum += mid;
    h /= 2;
    n = 2 * n - 1;
    cplx T2 = sum * h;
    double err = std::abs(T2 - T);
    T = T2;
    double floor = 8 * DBL_EPSILON * mag * h;
    if (err <= rel_tol * std::abs(T) + floor || 2 * n - 1 > max_nodes) {
      r.value = T;
      r.error = err + floor;
      r.nodes = n;
      return r;
    }
  }
}

cplx gaussian_density(cplx z, int sign, double C) {
  cplx var = static_cast<double>(sign) * kI * C;
  return std::exp(-z * z / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

}  // namespace

double truncation_width(double C, double eps, double tol) {
  if (eps <= 0) throw std::invalid_argument("contour regulator eps must be positive");
  // |density| ~ exp(-eps x tanh x / C)
  return C * std::log(1.0 / tol) / eps + 1.0;
}

AxisRule axis_rule(int sign, double C, double eps, double L, int n) {
  AxisRule r;
  r.L = L;
  n = std::max(n, 3);
  r.h = 2 * L / (n - 1);
  for (int j = 0; j < n; ++j) {
    double x = -L + j * r.h;
    double t = std::tanh(x);
    cplx z(x, sign * eps * t);
    cplx jac(1.0, sign * eps * (1 - t * t));
    double wt = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    r.x.push_back(x);
    r.z.push_back(z);
    r.w.push_back(gaussian_density(z, sign, C) * jac * (wt * r.h));
  }
  return r;
}

QuadResult integrate_contour(const std::function<cplx(cplx)>& f, const ContourSpec& spec) {
  if (spec.sign != 1 && spec.sign != -1) throw std::invalid_argument("contour sign must be +1 or -1");
  if (spec.C <= 0) throw std::invalid_argument("covariance scale must be positive");
  auto g = [&](double x) {
    double t = std::tanh(x);
    cplx z(x, spec.sign * spec.eps * t);
    cplx jac(1.0, spec.sign * spec.eps * (1 - t * t));
    return f(z) * gaussian_density(z, spec.sign, spec.C) * jac;
  };
  double inner = 0;
  const double L0 = truncation_width(spec.C, spec.eps, spec.trunc_tol);
  for (int j = -40; j <= 40; ++j) inner = std::max(inner, std::abs(g(j * L0 / 40)));
  if (!std::isfinite(inner)) throw QuadratureError("integrand overflows on the contour");
  // widen the cut until the tail mass beyond it is below trunc_tol relative to the bulk
  const double decay = spec.C / std::max(spec.eps, 1e-300);
  double L = spec.L > 0 ? spec.L : L0;
  auto tail = [&](double x) { return std::max(std::abs(g(-x)), std::abs(g(x))) * decay; };
  if (spec.L <= 0) {
    while (!(tail(L) <= spec.trunc_tol * inner)) {
      L += decay * std::log(10.0);
      if (L > 1e4 || !std::isfinite(tail(L)))
        throw QuadratureError("integrand does not decay on the contour: |f w| at x = " + std::to_string(L) + " is " +
                              std::to_string(tail(L) / decay) + " against " + std::to_string(inner) + " inside");
    }
  } else if (!(tail(L) <= 1e-6 * inner)) {
    throw QuadratureError("integrand does not decay on the contour: |f w| at the cut is " +
                          std::to_string(tail(L) / decay) + " against " + std::to_string(inner) + " inside");
  }
  return trapezoid(g, L, spec.nodes, spec.rel_tol, spec.max_nodes);
}

QuadResult numeric_Z_direct(int k, cplx lambda) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (lambda != cplx(0) && std::abs(std::arg(lambda)) > kPi - 1e-12)
    throw std::domain_error("direct integral diverges for lambda on the negative real axis");
  if (lambda == cplx(0)) {
    QuadResult r;
    r.value = 1;
    return r;
  }
  double theta = -std::arg(lambda) / (k + 1);
  cplx rot = std::polar(1.0, theta), rotk = std::polar(1.0, k * theta);
  auto f = [&](double t) {
    double tk = std::pow(t, k);
    if (!std::isfinite(tk)) return cplx(0);
    return std::exp(-t * rot - lambda * tk * rotk) * rot;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double err_re = 0, err_im = 0;
  double re = integrator.integrate([&](double t) { return f(t).real(); }, 1e-14, &err_re);
  double im = integrator.integrate([&](double t) { return f(t).imag(); }, 1e-14, &err_im);
  QuadResult r;
  r.value = cplx(re, im);
  r.error = std::hypot(err_re, err_im);
  r.L = INFINITY;
  return r;
}

double pole_free_eps(cplx g2) {
  double budget = 0.8 * (1.0 / g2).real();
  if (!(budget > 0)) throw std::domain_error("Re(1/g^2) must be positive for a pole-free contour");
  // 4 eps^2 + 2 sqrt2 eps - budget = 0
  double a = 4, b = 2 * std::sqrt(2.0);
  double eps = (-b + std::sqrt(b * b + 4 * a * budget)) / (2 * a);
  return std::min(eps, 0.5);
}

double small_eps(int k) { return 0.5 * std::sin(kPi / (4 * k)) / (4 * std::sqrt(static_cast<double>(k))); }

namespace {

QuadResult z_hif_k2(cplx g2, const HifQuadOptions& opt) {
  // sigma = x + i y with <sigma sigmabar> = 1; the determinant depends on x only.
  const double L = opt.L > 0 ? opt.L : 6.5;
  auto g = [&](double x) { return std::exp(-x * x) / std::sqrt(kPi) / (1.0 - 2.0 * kI * g2 * x); };
  return trapezoid(g, L, opt.nodes, 1e-14, 1 << 20);
}

// Sum over the four-dimensional grid, separable as c(ar, br) + q(ai, bi).
cplx k3_sum(const AxisRule& A, const AxisRule& B, cplx g2, int stride) {
  const double r2 = std::sqrt(2.0);
  std::vector<cplx> qw, qv;
  for (size_t i = 0; i < A.z.size(); i += stride)
    for (size_t j = 0; j < B.z.size(); j += stride) {
      cplx d = A.z[i] - B.z[j];
      qw.push_back(A.w[i] * B.w[j]);
      qv.push_back(0.5 * g2 * d * d);
    }
  double wmax = 0;
  for (auto& w : qw) wmax = std::max(wmax, std::abs(w));
  cplx total = 0;
  const double scale = stride;
  for (size_t i = 0; i < A.z.size(); i += stride)
    for (size_t j = 0; j < B.z.size(); j += stride) {
      cplx wo = A.w[i] * B.w[j];
      if (std::abs(wo) < 1e-18 * wmax) continue;
      cplx d = A.z[i] - B.z[j];
      cplx c = 1.0 - kI * r2 * g2 * (A.z[i] + B.z[j]) + 0.5 * g2 * d * d;
      total += wo * kernels::cauchy_sum(qw.data(), qv.data(), qw.size(), c);
    }
  return total * std::pow(scale, 4);
}

QuadResult z_hif_k3(cplx g2, const HifQuadOptions& opt) {
  const double eps = opt.eps >= 0 ? opt.eps : pole_free_eps(g2);
  if (eps <= 0) throw std::invalid_argument("k = 3 contour needs eps > 0");
  // real components of a (covariance -i/2 each) and of b (+i/2 each)
  const double L = opt.L > 0 ? opt.L : truncation_width(0.5, eps, opt.trunc_tol);
  int n = opt.nodes > 0 ? opt.nodes : 161;
  n |= 1;
  AxisRule A = axis_rule(-1, 0.5, eps, L, n);
  AxisRule B = axis_rule(+1, 0.5, eps, L, n);
  QuadResult r;
  r.value = k3_sum(A, B, g2, 1);
  // coarse grid on every other node (end weights differ by O(h) of a negligible tail)
  cplx coarse = k3_sum(A, B, g2, 2);
  r.error = std::abs(r.value - coarse);
  r.nodes = n;
  r.L = L;
  return r;
}

}  // namespace

QuadResult numeric_Z_hif(int k, cplx lambda, const HifQuadOptions& opt) {
  if (k != 2 && k != 3) throw std::invalid_argument("numeric HIF quadrature is implemented for k = 2 and k = 3");
  if (lambda == cplx(0)) {
    QuadResult r;
    r.value = 1;
    return r;
  }
  if (std::abs(std::arg(lambda)) >= (k - 1) * kPi / 2)
    throw std::domain_error("lambda outside the sector |arg lambda| < (k-1) pi/2");
  cplx g2 = std::pow(lambda, 1.0 / k);
  return k == 2 ? z_hif_k2(g2, opt) : z_hif_k3(g2, opt);
}

}  // namespace hif
