#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hif {

using cplx = std::complex<double>;

// Imaginary Gaussian measure of covariance sign * i * C, integrated on the contour
// x -> x + i sign eps tanh x with truncated trapezoid nodes on the real parameter.
struct ContourSpec {
  double eps = 0.5;
  int sign = +1;             // +1: covariance +iC, -1: covariance -iC
  double C = 1.0;
  double L = 0;              // truncation half-width, 0 = from trunc_tol
  int nodes = 0;             // 0 = adaptive node doubling
  double trunc_tol = 1e-16;  // Gaussian factor at the truncation point
  double rel_tol = 1e-13;    // adaptive target
  int max_nodes = 1 << 20;
};

struct QuadResult {
  cplx value;
  double error = 0;  // |I(h) - I(2h)| plus a rounding floor
  int nodes = 0;
  double L = 0;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Nodes z_j and weights (Gaussian factor, Jacobian and step) on one deformed axis.
struct AxisRule {
  std::vector<cplx> z, w;
  std::vector<double> x;
  double h = 0, L = 0;
};

AxisRule axis_rule(int sign, double C, double eps, double L, int n);
// Half-width where the Gaussian factor drops below tol.
double truncation_width(double C, double eps, double tol);

QuadResult integrate_contour(const std::function<cplx(cplx)>& f, const ContourSpec& spec);

// int_0^inf exp(-r - lambda r^k) dr, the N = 1 partition function of |z|^(2k).
QuadResult numeric_Z_direct(int k, cplx lambda);

struct HifQuadOptions {
  double eps = -1;         // < 0: largest pole-free value, capped at 0.5
  double L = 0;            // 0: from trunc_tol
  int nodes = 0;           // per axis, 0: default
  double trunc_tol = 1e-7; // Gaussian factor at the truncation point (k = 3)
};

// Pole-free regulator for k = 3: 2 sqrt2 eps + 4 eps^2 <= 0.8 Re(1/g^2), capped at 0.5.
double pole_free_eps(cplx g2);
// 0.5 sin(pi/4k) / (4 sqrt k).
double small_eps(int k);

// HIF representation at N = 1 for k in {2, 3}.
QuadResult numeric_Z_hif(int k, cplx lambda, const HifQuadOptions& opt = {});

}  // namespace hif
