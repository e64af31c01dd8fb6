#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "hif/gauss_rational.hpp"
#include "hif/wick_engine.hpp"

namespace hif {

using cplx = std::complex<double>;

struct BorelTransform {
  int m = 1;
  std::vector<GaussRat> b;  // a_n / (mn)!
};

BorelTransform borel_transform(const PowerSeries& s, int m);
BorelTransform borel_transform(const std::vector<GaussRat>& a, int m);
// Multiply back by (mn)!.
std::vector<GaussRat> inverse_borel(const BorelTransform& bt);

// D^m_rho: Re lambda^(-1/m) > 1/rho on the principal branch; lambda = 0 counts as a member.
bool in_domain(cplx lambda, int m, double rho);
// E^m_rho: |lambda| < rho^m and |arg lambda| < m pi / 2.
bool in_half_disk(cplx lambda, int m, double rho);

enum class ResumMethod { Truncated, Pade };

struct PadePoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResumResult {
  cplx value;
  double error = 0;      // quadrature estimate
  int pade_L = -1, pade_M = -1;
  std::vector<cplx> poles;  // Pade poles in the Borel plane
  std::string branch = "principal";
};

// f(lambda) = int_0^inf e^{-t} B(lambda t^m) dt, the order-m Laplace inversion after u = lambda t^m.
ResumResult resum(const BorelTransform& bt, cplx lambda, ResumMethod method);

// Pade [L/M] of a power series with L + M + 1 = c.size(); returns numerator and denominator (q_0 = 1).
void pade(const std::vector<cplx>& c, int L, int M, std::vector<cplx>& p, std::vector<cplx>& q);

struct GrowthFit {
  double m_hat = 0;     // coefficient of q log q
  double rate = 0;      // exp of the coefficient of q
  double intercept = 0;
  int points = 0;
};

// Least squares of log|a_q| on {1, q, q log q}; needs at least 4 nonzero coefficients.
GrowthFit growth_fit(const PowerSeries& s);
GrowthFit growth_fit(const std::vector<double>& abs_a);

}  // namespace hif
