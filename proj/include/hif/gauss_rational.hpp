#pragma once

#include <complex>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hif {

// Exact element of Q(i).
struct GaussRat {
  mpq_class re, im;

  GaussRat() : re(0), im(0) {}
  GaussRat(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussRat(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) { norm(); }
  static GaussRat I() { return GaussRat(0, 1); }

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRat conj() const { return GaussRat(re, -im); }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const;  // "a/b + c/d i"

  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRat& operator*=(const GaussRat& o);
  GaussRat& operator/=(const GaussRat& o);

  void norm() {
    re.canonicalize();
    im.canonicalize();
  }
};

inline GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
inline GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
inline GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
inline GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
inline GaussRat operator-(const GaussRat& a) { return GaussRat(-a.re, -a.im); }
inline bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

GaussRat pow(const GaussRat& a, int n);
// i^n for any integer n.
GaussRat i_pow(int n);

using ExactMatrix = std::vector<std::vector<GaussRat>>;

// Determinant by Gaussian elimination over Q(i); exact.
GaussRat determinant(ExactMatrix m);

// Univariate polynomial over Q(i), coefficient of x^j at index j.
struct ExactPoly {
  std::vector<GaussRat> c;
  GaussRat eval(const GaussRat& x) const;
};

// Parse "p/q" or "p/q+r/s i" style strings written by str().
GaussRat parse_gauss_rat(const std::string& s);

}  // namespace hif
