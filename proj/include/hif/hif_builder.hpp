#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "hif/bubble_core.hpp"
#include "hif/positivity.hpp"

namespace hif {

struct DecompositionPlan {
  int D = 0;
  int k = 0;
  SymmetricCut cut;
  std::vector<int> peel;  // p_1..p_k as global vertex ids, all in F
  // Sorted edge ids. I[i] for i = 0..k-1 (I[0] is the cut); J[i], Jt[i] for i = 1..k-1, index 0 unused.
  std::vector<std::vector<int>> I, J, Jt;
  int eta = 0;                     // 1 when k is odd
  std::vector<int> theta_colors;   // colors factored out of every interaction term
  int theta = 0;

  // Refined label "c_v" of edge e seen from the remaining side after step i.
  std::string label(const Bubble& b, int e, int step) const;
  std::vector<std::string> labels(const Bubble& b, const std::vector<int>& edges, int step) const;
  bool degenerate() const { return k < 2; }
};

struct PlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// peel_order: optional sequence of vertex ids. Default is the lexicographically
// smallest admissible order starting at a boundary vertex of F.
DecompositionPlan decompose(const Bubble& b, const SymmetricCut& cut,
                            const std::optional<std::vector<int>>& peel_order = std::nullopt);

// Every admissible peel order for a cut, lexicographic.
std::vector<std::vector<int>> admissible_peel_orders(const Bubble& b, const SymmetricCut& cut);

int theta(const DecompositionPlan& plan);

// Set relations and size invariants; empty string when all hold.
std::string check_plan(const DecompositionPlan& plan);

struct ScalingExponents {
  int k = 0;
  int m = 0;  // 0 marks the degenerate k = 1 case
  mpq_class s, t, u;
  mpq_class g_lambda_power;  // g = lambda^(1/2k) N^(-s/2k)
  mpq_class g_N_power;
};

ScalingExponents scaling_exponents(const DecompositionPlan& plan, const mpq_class& s);

// ---------------------------------------------------------------------------
// Interaction network of the determinant representation.

enum class FieldKind { Sigma, Alpha, Beta };

struct FieldRef {
  FieldKind kind;
  int index;  // j of alpha_j / beta_j; 0 for sigma
  bool conj;
  std::string name() const;  // "sigma", "alpha1", "beta3", ...
};

// One side of a bilinear piece: a tensor node at a vertex, possibly contracted with one field.
struct Half {
  int vertex = -1;
  bool bar = false;  // true: conjugate tensor
  std::optional<FieldRef> field;
};

// T-bar K T = sum over pieces coef * row(T-bar, field) . col(field, T), glued along `legs`.
struct Piece {
  bool coef_is_i = true;  // i or -1
  Half row, col;
  std::vector<int> legs;           // intermediate edge ids, sorted
  std::vector<int> through_colors; // colors carried straight from T-bar to T
  std::string slot;                // "sigma", "alpha1", "beta3", "id"
};

struct KeptField {
  FieldKind kind;  // Sigma, or Alpha for an (alpha_j, beta_j) pair
  int index;
  std::vector<int> legs;  // sorted edge ids
};

struct Interaction {
  std::vector<Piece> pieces;     // slot order of the block matrix
  std::vector<KeptField> fields; // fields remaining after integration
};

Interaction interaction(const Bubble& b, const DecompositionPlan& plan);

// Legs of a half: edges at the vertex xor field legs.
std::vector<int> half_legs(const Bubble& b, const DecompositionPlan& plan, const Half& h);

// ---------------------------------------------------------------------------
// Block matrix layout.

enum class BlockRole { Hub, FieldSlot, IdentitySlot };

struct BlockSlot {
  BlockRole role = BlockRole::FieldSlot;
  std::string name;          // slot name
  int exponent = 0;          // before factorization
  int factored_exponent = 0;
  // first-row entry
  std::string row_field;     // "" for a bare identity
  bool row_field_conj = false;
  int row_padding = 0;       // identity legs in the row entry
  bool row_has_i = true;
  // first-column entry
  std::string col_field;
  bool col_field_conj = false;
  int col_padding = 0;
  bool col_has_i = false;
  int partner = -1;          // index of the X-paired slot, -1 for an ordinary block
  int piece = -1;            // index into Interaction::pieces
};

struct BlockMatrixSpec {
  int D = 0, k = 0, theta = 0, eta = 0;
  std::vector<int> theta_colors;
  std::vector<BlockSlot> blocks;  // blocks[0] is the hub
  int gamma = 0;
  int gamma_closed_form = 0;
  int factored_count = 0;         // gamma - (k+1) theta
  Interaction inter;
  DecompositionPlan plan;
  Bubble bubble;
};

BlockMatrixSpec build_block_spec(const Bubble& b, const DecompositionPlan& plan);
int gamma_closed_form(const DecompositionPlan& plan);

// Max theta, then min gamma, then lexicographic (cut order, peel order).
DecompositionPlan optimize_plan(const Bubble& b, int vertex_cap = kDefaultVertexCap);

// ---------------------------------------------------------------------------
// Dense instantiation.

// Values of the formal variables: for each field name both the holomorphic and the barred tensor.
struct FieldValues {
  std::map<std::string, std::vector<cplx>> value, bar;
};

// Real-contour assignment (bar = entrywise conjugate), optionally deformed by
// a -> a - i eps tanh a, b -> b + i eps tanh b on every real component of each X pair.
FieldValues contour_fields(const std::map<std::string, std::vector<cplx>>& fields, double eps);

struct Instantiated {
  Eigen::MatrixXcd M;           // the arrowhead matrix at the given fields
  Eigen::MatrixXcd H;           // -i C^{-1} M
  Eigen::MatrixXcd one_minus_gM;
  std::vector<int> offsets;     // block offsets
};

// Field tensors are indexed by the sorted leg edges of their I-set, first leg slowest.
Instantiated instantiate_values(const BlockMatrixSpec& spec, int N, const FieldValues& fv, cplx g, bool factored);

struct InstantiatedEps {
  Instantiated at_eps;
  Eigen::MatrixXcd Nmat;  // (M(eps) - M(0)) / eps
};

InstantiatedEps instantiate(const BlockMatrixSpec& spec, int N, const std::map<std::string, std::vector<cplx>>& fields,
                            cplx g, double eps, bool factored = true);

// Dense K with T-bar K T the exponent after integrating the paired fields (full N^D space).
Eigen::MatrixXcd dense_K(const BlockMatrixSpec& spec, int N, const FieldValues& fv);

// Sizes of each field's tensor at dimension N.
std::map<std::string, int> field_leg_counts(const BlockMatrixSpec& spec);

}  // namespace hif
