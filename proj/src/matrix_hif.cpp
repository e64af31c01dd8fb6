#include "hif/matrix_hif.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hif {

namespace {

const double kPi = 3.14159265358979323846;

std::string alpha(int j) { return j == 0 ? "sigma" : "alpha" + std::to_string(j); }
std::string beta(int j) { return j == 0 ? "sigma" : "beta" + std::to_string(j); }

}  // namespace

MatrixHIFSpec build_matrix_spec(int k) {
  if (k < 2) throw std::invalid_argument("matrix representation needs k >= 2");
  MatrixHIFSpec s;
  s.k = k;
  s.eta = k % 2;
  s.g_lambda_power = mpq_class(1, 2 * k);
  s.g_N_power = mpq_class(-(k - 1), 2 * k);
  s.g_lambda_power.canonicalize();
  s.g_N_power.canonicalize();
  if (k % 2 == 0) s.fields.push_back("sigma");
  for (int j = 2 - s.eta; j <= k - 2; j += 2) {
    s.fields.push_back(alpha(j));
    s.fields.push_back(beta(j));
  }
  // Row entries: i alpha_j over beta_{j+2}^dagger, i beta_{j+2} over alpha_j^dagger (alpha_0 = sigma).
  if (s.eta) s.slots.push_back({"beta1", "beta1", "beta1", true});
  for (int j = s.eta; j <= k - 2; j += 2) {
    s.slots.push_back({alpha(j), alpha(j), j + 2 >= k ? "" : beta(j + 2), false});
    if (j + 2 <= k - 2) s.slots.push_back({beta(j + 2), beta(j + 2), alpha(j), false});
  }
  s.slots.push_back({"id", "", alpha(k - 2), false});
  // every slot except the identity has exactly one non-trivial row entry
  if (static_cast<int>(s.slots.size()) != k) throw std::logic_error("matrix layout has wrong slot count");
  return s;
}

namespace {

const Eigen::MatrixXcd& field(const FieldMatrices& f, const std::string& name, int N) {
  auto it = f.find(name);
  if (it == f.end()) throw std::invalid_argument("missing field " + name);
  if (it->second.rows() != N || it->second.cols() != N) throw std::invalid_argument("shape mismatch for field " + name);
  return it->second;
}

Eigen::MatrixXcd row_entry(const MatrixSlot& s, const FieldMatrices& f, int N) {
  const cplx I(0, 1);
  if (s.row_field.empty()) return I * Eigen::MatrixXcd::Identity(N, N);
  return I * field(f, s.row_field, N);
}

Eigen::MatrixXcd col_entry(const MatrixSlot& s, const FieldMatrices& f, int N) {
  const cplx I(0, 1);
  Eigen::MatrixXcd b =
      s.col_field.empty() ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(N, N)) : field(f, s.col_field, N).adjoint();
  return s.col_has_i ? Eigen::MatrixXcd(I * b) : b;
}

}  // namespace

Eigen::MatrixXcd matrix_M(const MatrixHIFSpec& spec, const FieldMatrices& f, int N) {
  const int k = spec.k;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero((k + 1) * N, (k + 1) * N);
  for (int j = 0; j < k; ++j) {
    M.block(0, (j + 1) * N, N, N) = row_entry(spec.slots[j], f, N);
    M.block((j + 1) * N, 0, N, N) = col_entry(spec.slots[j], f, N);
  }
  return M;
}

Eigen::MatrixXcd matrix_U_inner(const MatrixHIFSpec& spec, const FieldMatrices& f, int N) {
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(N, N);
  for (const auto& s : spec.slots) U += row_entry(s, f, N) * col_entry(s, f, N);
  return U;
}

Eigen::MatrixXcd matrix_H(const MatrixHIFSpec& spec, const FieldMatrices& f, int N) {
  const int k = spec.k;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N, N);
  for (int j = spec.eta; j <= k - 2; j += 2) {
    Eigen::MatrixXcd b = j + 2 == k ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(N, N)) : field(f, beta(j + 2), N);
    Eigen::MatrixXcd t = b * field(f, alpha(j), N).adjoint();
    H += t + t.adjoint();
  }
  return H;
}

std::string compare_with_block_spec(const MatrixHIFSpec& m, const BlockMatrixSpec& b) {
  if (b.k != m.k) return "k differs";
  if (b.theta != 1) return "theta is not 1";
  if (static_cast<int>(b.blocks.size()) != m.k + 1) return "block count differs";
  if (b.blocks[0].factored_exponent != 1) return "hub is not N x N";
  for (int j = 0; j < m.k; ++j) {
    const BlockSlot& bs = b.blocks[j + 1];
    const MatrixSlot& ms = m.slots[j];
    std::string where = "slot " + std::to_string(j + 1) + ": ";
    if (bs.factored_exponent != 1) return where + "block is not N x N";
    if (bs.name != ms.name) return where + "name " + bs.name + " vs " + ms.name;
    if (bs.row_field != ms.row_field) return where + "row entry differs";
    if (bs.col_field != ms.col_field) return where + "column entry differs";
    if (bs.col_has_i != ms.col_has_i) return where + "column i prefactor differs";
  }
  return {};
}

namespace {

ExactMatrix exact_zero(int n) { return ExactMatrix(n, std::vector<GaussRat>(n)); }

ExactMatrix exact_identity(int n, const GaussRat& d) {
  ExactMatrix m = exact_zero(n);
  for (int i = 0; i < n; ++i) m[i][i] = d;
  return m;
}

ExactMatrix adjoint(const ExactMatrix& a) {
  int n = static_cast<int>(a.size());
  ExactMatrix out = exact_zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[j][i] = a[i][j].conj();
  return out;
}

ExactMatrix mul(const ExactMatrix& a, const ExactMatrix& b) {
  int n = static_cast<int>(a.size());
  ExactMatrix out = exact_zero(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      if (a[i][l].is_zero()) continue;
      for (int j = 0; j < n; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

ExactMatrix scale(ExactMatrix a, const GaussRat& s) {
  for (auto& r : a)
    for (auto& x : r) x *= s;
  return a;
}

const ExactMatrix& exact_field(const ExactFields& f, const std::string& name, int N) {
  auto it = f.find(name);
  if (it == f.end()) throw std::invalid_argument("missing field " + name);
  if (static_cast<int>(it->second.size()) != N) throw std::invalid_argument("shape mismatch for field " + name);
  return it->second;
}

ExactMatrix add(ExactMatrix a, const ExactMatrix& b) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) a[i][j] += b[i][j];
  return a;
}

// i H_k - eta beta1 beta1^dagger from the Hermitian sum, independent of the slot layout.
ExactMatrix exact_inner(const MatrixHIFSpec& spec, const ExactFields& f, int N) {
  const int k = spec.k;
  ExactMatrix H = exact_zero(N);
  for (int j = spec.eta; j <= k - 2; j += 2) {
    ExactMatrix b = j + 2 == k ? exact_identity(N, 1) : exact_field(f, beta(j + 2), N);
    ExactMatrix t = mul(b, adjoint(exact_field(f, alpha(j), N)));
    H = add(H, add(t, adjoint(t)));
  }
  ExactMatrix out = scale(H, GaussRat::I());
  if (spec.eta) {
    const ExactMatrix& b1 = exact_field(f, "beta1", N);
    out = add(out, scale(mul(b1, adjoint(b1)), -1));
  }
  return out;
}

ExactMatrix exact_row(const MatrixSlot& s, const ExactFields& f, int N) {
  if (s.row_field.empty()) return exact_identity(N, GaussRat::I());
  return scale(exact_field(f, s.row_field, N), GaussRat::I());
}

ExactMatrix exact_col(const MatrixSlot& s, const ExactFields& f, int N) {
  ExactMatrix b = s.col_field.empty() ? exact_identity(N, 1) : adjoint(exact_field(f, s.col_field, N));
  return s.col_has_i ? scale(b, GaussRat::I()) : b;
}

}  // namespace

CharPolyReport char_poly_identity_check(const MatrixHIFSpec& spec, int N, const ExactFields& fields,
                                        const GaussRat& g, const std::vector<GaussRat>& xs) {
  const int k = spec.k, n = (k + 1) * N;
  CharPolyReport rep;
  rep.exact = true;
  ExactMatrix M = exact_zero(n);
  for (int j = 0; j < k; ++j) {
    ExactMatrix A = exact_row(spec.slots[j], fields, N), B = exact_col(spec.slots[j], fields, N);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) {
        M[r][(j + 1) * N + c] = A[r][c];
        M[(j + 1) * N + r][c] = B[r][c];
      }
  }
  ExactMatrix inner = exact_inner(spec, fields, N);
  GaussRat g2 = g * g;
  for (const auto& x : xs) {
    GaussRat y = GaussRat(1) - x;
    ExactMatrix lhs_m = scale(M, -g);
    for (int i = 0; i < n; ++i) lhs_m[i][i] += y;
    ExactMatrix rhs_m = scale(inner, -g2);
    for (int i = 0; i < N; ++i) rhs_m[i][i] += y * y;
    GaussRat lhs = determinant(lhs_m);
    GaussRat rhs = pow(y, (k - 1) * N) * determinant(rhs_m);
    ++rep.samples;
    if (lhs != rhs) {
      rep.pass = false;
      rep.failures.push_back("x = " + x.str() + ": " + lhs.str() + " != " + rhs.str());
    }
  }
  return rep;
}

CharPolyReport char_poly_identity_check(const MatrixHIFSpec& spec, int N, const FieldMatrices& fields, cplx g,
                                        const std::vector<cplx>& xs, double tol) {
  const int k = spec.k, n = (k + 1) * N;
  CharPolyReport rep;
  Eigen::MatrixXcd M = matrix_M(spec, fields, N);
  const cplx I(0, 1);
  Eigen::MatrixXcd inner = I * matrix_H(spec, fields, N);
  if (spec.eta) inner -= field(fields, "beta1", N) * field(fields, "beta1", N).adjoint();
  for (cplx x : xs) {
    cplx y = 1.0 - x;
    cplx lhs = (y * Eigen::MatrixXcd::Identity(n, n) - g * M).determinant();
    cplx rhs = std::pow(y, (k - 1) * N) * (y * y * Eigen::MatrixXcd::Identity(N, N) - g * g * inner).determinant();
    double err = std::abs(lhs - rhs) / std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
    rep.max_rel_err = std::max(rep.max_rel_err, err);
    ++rep.samples;
    if (!(err <= tol)) {
      rep.pass = false;
      rep.failures.push_back("relative error " + std::to_string(err));
    }
  }
  return rep;
}

ExactFields random_exact_fields(const MatrixHIFSpec& spec, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  ExactFields out;
  for (const auto& name : spec.fields) {
    ExactMatrix m = exact_zero(N);
    for (auto& r : m)
      for (auto& x : r) x = GaussRat(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
    out[name] = m;
  }
  return out;
}

double shrinking_radius(int m, int N, double r_m) { return std::pow(N, -1.0 - 2.0 / m) * r_m; }

double lemma_eps(int k, double r_m) {
  int m = k - 1;
  double Rk = std::pow(r_m, static_cast<double>(m) / (2 * k));
  return std::sin(kPi / (4 * k)) / (4 * std::sqrt(static_cast<double>(k)) * Rk);
}

namespace {

double spectral_norm(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

double resolvent_norm(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return smin > 0 ? 1.0 / smin : INFINITY;
}

FieldMatrices to_matrices(const FieldValues& fv, int N) {
  FieldMatrices out;
  for (const auto& [name, v] : fv.value) {
    Eigen::MatrixXcd m(N, N);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) m(r, c) = v[r * N + c];
    out[name] = m;
  }
  return out;
}

}  // namespace

ResolventReport spectrum_and_resolvent_check(const MatrixHIFSpec& spec, int N, cplx lambda, double rho, double eps,
                                             int n_samples, std::uint64_t seed, double r_m) {
  const int k = spec.k, m = k - 1;
  if (!in_half_disk(lambda, m, rho)) throw std::invalid_argument("lambda outside the half-disk E^m_rho");
  ResolventReport rep;
  rep.samples = n_samples;
  const double s = std::sin(kPi / (4 * k));
  rep.bound = 1.0 / s;
  rep.bound_eps = 2.0 / s;
  rep.n_bound = 2.0 * std::sqrt(static_cast<double>(k)) * N;
  rep.eps = eps < 0 ? lemma_eps(k, r_m) : eps;
  rep.lambda = lambda;
  rep.g = std::pow(lambda, 1.0 / (2 * k)) * std::pow(static_cast<double>(N), -static_cast<double>(m) / (2 * k));
  rep.min_eig = INFINITY;
  const int n = (k + 1) * N;
  const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(n, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double tiny = 1e-9;
  for (int t = 0; t < n_samples; ++t) {
    std::map<std::string, std::vector<cplx>> raw;
    for (const auto& name : spec.fields) {
      std::vector<cplx> v(N * N);
      for (auto& x : v) x = cplx(gauss(rng), gauss(rng));
      raw[name] = v;
    }
    FieldMatrices f0 = to_matrices(contour_fields(raw, 0.0), N);
    FieldMatrices fe = to_matrices(contour_fields(raw, rep.eps), N);
    Eigen::MatrixXcd M0 = matrix_M(spec, f0, N);
    Eigen::MatrixXcd Me = matrix_M(spec, fe, N);
    Eigen::MatrixXcd A = Id - rep.g * M0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    double me = es.eigenvalues().cwiseAbs().minCoeff();
    rep.min_eig = std::min(rep.min_eig, me);
    if (me < s - tiny) ++rep.spectral_violations;
    double r0 = resolvent_norm(A);
    rep.max_norm = std::max(rep.max_norm, r0);
    if (r0 > rep.bound + tiny) ++rep.norm_violations;
    double re = resolvent_norm(Id - rep.g * Me);
    rep.max_norm_eps = std::max(rep.max_norm_eps, re);
    if (re > rep.bound_eps + tiny) ++rep.norm_eps_violations;
    if (rep.eps > 0) {
      double nn = spectral_norm((Me - M0) / rep.eps);
      rep.max_n_norm = std::max(rep.max_n_norm, nn);
      if (nn > rep.n_bound + tiny) ++rep.n_violations;
    }
  }
  return rep;
}

}  // namespace hif
