#include "hif/gauss_rational.hpp"

#include <stdexcept>

namespace hif {

GaussRat& GaussRat::operator*=(const GaussRat& o) {
  mpq_class r = re * o.re - im * o.im;
  mpq_class i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GaussRat& GaussRat::operator/=(const GaussRat& o) {
  mpq_class d = o.re * o.re + o.im * o.im;
  if (d == 0) throw std::domain_error("division by zero in Q(i)");
  mpq_class r = (re * o.re + im * o.im) / d;
  mpq_class i = (im * o.re - re * o.im) / d;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

std::string GaussRat::str() const {
  if (im == 0) return re.get_str();
  if (re == 0) return im.get_str() + "i";
  std::string s = re.get_str();
  if (im < 0)
    s += "-" + mpq_class(-im).get_str() + "i";
  else
    s += "+" + im.get_str() + "i";
  return s;
}

GaussRat pow(const GaussRat& a, int n) {
  if (n < 0) return GaussRat(1) / pow(a, -n);
  GaussRat r(1), base = a;
  while (n) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

GaussRat i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return GaussRat(1);
    case 1: return GaussRat(0, 1);
    case 2: return GaussRat(-1);
    default: return GaussRat(0, -1);
  }
}

GaussRat determinant(ExactMatrix m) {
  const size_t n = m.size();
  GaussRat det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return GaussRat(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    GaussRat inv = GaussRat(1) / m[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      GaussRat f = m[r][col] * inv;
      for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  det.norm();
  return det;
}

GaussRat ExactPoly::eval(const GaussRat& x) const {
  GaussRat acc(0);
  for (size_t j = c.size(); j-- > 0;) {
    acc *= x;
    acc += c[j];
  }
  return acc;
}

GaussRat parse_gauss_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (s.back() != 'i') return GaussRat(mpq_class(s));
  std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not the leading one
  size_t cut = std::string::npos;
  for (size_t p = body.size(); p-- > 1;)
    if (body[p] == '+' || body[p] == '-') {
      cut = p;
      break;
    }
  if (cut == std::string::npos) return GaussRat(0, mpq_class(body));
  std::string rs = body.substr(0, cut), is = body.substr(cut);
  if (is[0] == '+') is.erase(0, 1);
  return GaussRat(mpq_class(rs), mpq_class(is));
}

}  // namespace hif
