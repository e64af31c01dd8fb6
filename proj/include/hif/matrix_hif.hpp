#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "hif/borel_tools.hpp"
#include "hif/gauss_rational.hpp"
#include "hif/hif_builder.hpp"

namespace hif {

// Field slot of the matrix representation: first-row entry A_j, first-column entry B_j.
struct MatrixSlot {
  std::string name;         // slot name, same convention as BlockSlot
  std::string row_field;    // "" for the identity
  std::string col_field;    // "" for the identity
  bool col_has_i = false;   // B_j carries an i (the beta1 slot at odd k)
};

struct MatrixHIFSpec {
  int k = 0;
  int eta = 0;
  std::vector<std::string> fields;  // kept fields: "sigma", "alpha_j", "beta_j"
  std::vector<MatrixSlot> slots;    // k slots after the hub
  mpq_class g_lambda_power;         // g_k = lambda^(1/2k) N^(-(k-1)/2k)
  mpq_class g_N_power;
};

MatrixHIFSpec build_matrix_spec(int k);

using FieldMatrices = std::map<std::string, Eigen::MatrixXcd>;

// Dense M_k, (k+1)N square, from N x N field matrices (the column entries use adjoints).
Eigen::MatrixXcd matrix_M(const MatrixHIFSpec& spec, const FieldMatrices& f, int N);
// H_k = sum over kept pairs of beta_{j+2} alpha_j^dagger + h.c. (beta_k = 1, alpha_0 = sigma).
Eigen::MatrixXcd matrix_H(const MatrixHIFSpec& spec, const FieldMatrices& f, int N);
// sum_j A_j B_j over the slots; equals i H_k - eta beta1 beta1^dagger.
Eigen::MatrixXcd matrix_U_inner(const MatrixHIFSpec& spec, const FieldMatrices& f, int N);

// Structural comparison with the block spec of the rank-2 cycle bubble; empty string on match.
std::string compare_with_block_spec(const MatrixHIFSpec& m, const BlockMatrixSpec& b);

using ExactFields = std::map<std::string, ExactMatrix>;

struct CharPolyReport {
  bool pass = true;
  int samples = 0;
  bool exact = false;
  double max_rel_err = 0;  // floating mode only
  std::vector<std::string> failures;
};

// Exact check over Q(i): both sides evaluated at every x in xs.
CharPolyReport char_poly_identity_check(const MatrixHIFSpec& spec, int N, const ExactFields& fields,
                                        const GaussRat& g, const std::vector<GaussRat>& xs);
// Floating check, relative tolerance tol.
CharPolyReport char_poly_identity_check(const MatrixHIFSpec& spec, int N, const FieldMatrices& fields, cplx g,
                                        const std::vector<cplx>& xs, double tol = 1e-10);

// Random rational fields with small numerators/denominators.
ExactFields random_exact_fields(const MatrixHIFSpec& spec, int N, std::uint64_t seed);

struct ResolventReport {
  int samples = 0;
  double bound = 0;           // 1/sin(pi/4k)
  double bound_eps = 0;       // 2/sin(pi/4k)
  double n_bound = 0;         // 2 sqrt(k) N
  double eps = 0;
  cplx lambda, g;
  int spectral_violations = 0;   // eigenvalue of 1 - gM with modulus < sin(pi/4k)
  int norm_violations = 0;       // resolvent norm above bound at eps = 0
  int norm_eps_violations = 0;   // resolvent norm above 2x bound at the regulated contour
  int n_violations = 0;          // ||N_k|| above 2 sqrt(k) N
  double min_eig = 0;
  double max_norm = 0, max_norm_eps = 0, max_n_norm = 0;
};

// Radius rho_m(N) = N^(-1-2/m) r_m.
double shrinking_radius(int m, int N, double r_m = 1.0);
// eps = R_k^{-1} sin(pi/4k) / (4 sqrt k), R_k = r_m^(m/2k).
double lemma_eps(int k, double r_m = 1.0);

// lambda must lie in E^m_rho; eps < 0 selects lemma_eps.
ResolventReport spectrum_and_resolvent_check(const MatrixHIFSpec& spec, int N, cplx lambda, double rho, double eps,
                                             int n_samples, std::uint64_t seed, double r_m = 1.0);

}  // namespace hif
