#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "hif/bubble_core.hpp"
#include "hif/gauss_rational.hpp"
#include "hif/hif_builder.hpp"

namespace hif {

// Registry of Gaussian variables with a symmetric pair-covariance table.
class MixedCovariance {
 public:
  int add_real(const std::string& name, const GaussRat& variance = 1);
  // <z zbar> = c, <z z> = <zbar zbar> = 0. Returns (z, zbar).
  std::pair<int, int> add_complex(const std::string& name, const GaussRat& c = 1);
  // <alpha betabar> = <alphabar beta> = -i, all other pairs zero. Returns (alpha, alphabar, beta, betabar).
  std::array<int, 4> add_xpair(const std::string& alpha, const std::string& beta);
  void set(int i, int j, const GaussRat& v);
  const GaussRat& get(int i, int j) const;
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  int find(const std::string& name) const;  // -1 if absent

 private:
  int add(const std::string& name);
  std::vector<std::string> names_;
  std::vector<std::vector<GaussRat>> table_;
};

// Sum over perfect pairings of the monomial (a multiset of variable ids) of covariance products.
GaussRat mixed_wick_moment(const std::vector<int>& monomial, const MixedCovariance& cov);

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WickOptions {
  int cap = 8;                // largest q * k enumerated
  bool normalize_T = false;   // T covariance N^-(D-1) instead of 1
};

// Laurent polynomial in N with exact coefficients.
struct NPoly {
  std::map<int, GaussRat> terms;  // exponent -> coefficient
  GaussRat at(int N) const;
  bool operator==(const NPoly& o) const;
  std::string str() const;
};

// N^e for rational e; throws if not rational.
GaussRat rational_power(int N, const mpq_class& e);

struct PowerSeries {
  std::vector<GaussRat> a;       // a_0 .. a_q
  std::string representation;    // "direct" or "hif"
  std::string model;
  int N = 1;
  mpq_class s;
};

// c_q = (-1)^q / q! E[B^q], so that a_q = c_q N^(-s q).
std::vector<NPoly> direct_coefficients(const Bubble& b, int order, const WickOptions& opt = {});
// Coefficient of g^(2n) in E[exp(g^2 Tbar K T)] over the tensor and the kept fields.
NPoly hif_g2_coefficient(const BlockMatrixSpec& spec, int n, const WickOptions& opt = {});
// c_q = coefficient of g^(2kq).
std::vector<NPoly> hif_coefficients(const BlockMatrixSpec& spec, int order, const WickOptions& opt = {});

PowerSeries series_at(const std::vector<NPoly>& c, int N, const mpq_class& s, const std::string& rep,
                      const std::string& model);
PowerSeries direct_series(const Bubble& b, int N, const mpq_class& s, int order, const WickOptions& opt = {});
PowerSeries hif_series(const BlockMatrixSpec& spec, int N, const mpq_class& s, int order, const WickOptions& opt = {});

}  // namespace hif
