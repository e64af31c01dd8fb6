#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "hif/hif_builder.hpp"
#include "test_util.hpp"

using namespace hif;

namespace {

using Labels = std::set<std::string>;

Labels labels(const Bubble& b, const DecompositionPlan& p, const std::vector<int>& edges, int step) {
  auto v = p.labels(b, edges, step);
  return {v.begin(), v.end()};
}

const SymmetricCut& cut_with(const Bubble& b, const std::vector<SymmetricCut>& cuts, const Labels& want) {
  for (const auto& c : cuts) {
    Labels l;
    for (int e : c.cut_edges) l.insert(c.refined_label(b, e));
    if (l == want) return c;
  }
  throw std::runtime_error("cut not found");
}

std::vector<int> vertices(const Bubble& b, std::initializer_list<const char*> names) {
  std::vector<int> v;
  for (const char* n : names) v.push_back(b.find_vertex(n));
  return v;
}

// t = max(sup_i |I_i| + |J_{i+1}| - Theta, D - Theta) / 2, recomputed from the plan's sets.
mpq_class t_oracle(const DecompositionPlan& p) {
  int best = p.D;
  for (int i = 0; i + 1 < p.k; ++i) best = std::max<int>(best, p.I[i].size() + p.J[i + 1].size());
  mpq_class t(best - p.theta, 2);
  t.canonicalize();
  return t;
}

int gamma_oracle(const DecompositionPlan& p) {
  int g = 3 * p.D;
  if (p.k % 2 == 1) {
    g += p.I[0].size();
    for (int j = 2; j <= p.k - 3; j += 2) g += 2 * p.I[j].size();
  } else {
    for (int j = 1; j <= p.k - 3; j += 2) g += 2 * p.I[j].size();
  }
  return g;
}

std::map<std::string, std::vector<cplx>> random_fields(const BlockMatrixSpec& spec, int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::map<std::string, std::vector<cplx>> f;
  for (const auto& [name, legs] : field_leg_counts(spec)) {
    std::vector<cplx> v(static_cast<size_t>(std::pow(N, legs)));
    for (auto& x : v) x = cplx(g(rng), g(rng));
    f[name] = v;
  }
  return f;
}

}  // namespace

TEST_CASE("B1 refined color sets") {
  Bubble b = load("b1");
  auto cuts = find_symmetric_cuts(b);
  const auto& cut = cut_with(b, cuts, {"2_a", "3_a", "1_c"});
  DecompositionPlan p = decompose(b, cut, vertices(b, {"a", "b", "c"}));
  CHECK(labels(b, p, p.I[1], 1) == Labels{"1_b", "1_c"});
  CHECK(labels(b, p, p.J[1], 1) == Labels{"1_b"});
  CHECK(labels(b, p, p.Jt[1], 0) == Labels{"2_a", "3_a"});
  CHECK(labels(b, p, p.J[2], 2) == Labels{"2_c", "3_c"});
  CHECK(p.theta == 2);
  CHECK(check_plan(p).empty());
}

TEST_CASE("B2 refined color sets") {
  Bubble b = load("b2");
  DecompositionPlan p = optimize_plan(b);
  CHECK(p.I[0].size() == 5);
  CHECK(labels(b, p, p.I[1], 1) == Labels{"1_b", "1_c", "3_b", "3_c"});
  CHECK(labels(b, p, p.J[1], 1) == Labels{"1_b"});
  CHECK(labels(b, p, p.Jt[1], 0) == Labels{"2_a", "3_a"});
  CHECK(labels(b, p, p.J[2], 2) == Labels{"2_c"});
  CHECK(p.theta == 1);
}

TEST_CASE("degenerate dipole plan") {
  Bubble d = load("dipole3");
  DecompositionPlan p = decompose(d, find_symmetric_cuts(d)[0]);
  CHECK(p.degenerate());
  CHECK(scaling_exponents(p, 2).m == 0);
  CHECK_THROWS_AS(build_block_spec(d, p), PlanError);
}

TEST_CASE("invalid peel order") {
  Bubble b = load("b1");
  auto cuts = find_symmetric_cuts(b);
  const auto& cut = cut_with(b, cuts, {"2_a", "3_a", "1_c"});
  CHECK_THROWS_WITH_AS(decompose(b, cut, vertices(b, {"a", "c", "b"})), doctest::Contains("invalid peel step"),
                       PlanError);
  CHECK_THROWS_AS(decompose(b, cut, vertices(b, {"a", "b"})), PlanError);
}

TEST_CASE("set relations and theta hold for every admissible plan") {
  for (const char* n : {"b1", "b2", "dipole4", "matrix2", "matrix3", "matrix4", "matrix5"}) {
    Bubble b = load(n);
    for (const auto& c : find_symmetric_cuts(b))
      for (const auto& order : admissible_peel_orders(b, c)) {
        DecompositionPlan p = decompose(b, c, order);
        if (p.degenerate()) continue;
        CHECK_MESSAGE(check_plan(p).empty(), std::string(n));
        CHECK(p.theta >= 1);
        CHECK(p.theta == theta(p));
        CHECK(static_cast<int>(p.I[p.k - 1].size()) == p.D);
        for (int i = 1; i < p.k; ++i) {
          CHECK_FALSE(p.J[i].empty());
          std::vector<int> a, bb;
          // I_{i-1} = (I_i \ J_i) + Jt_i
          std::set_difference(p.I[i].begin(), p.I[i].end(), p.J[i].begin(), p.J[i].end(), std::back_inserter(a));
          a.insert(a.end(), p.Jt[i].begin(), p.Jt[i].end());
          std::sort(a.begin(), a.end());
          CHECK(a == p.I[i - 1]);
          // I_i = J_i + (I_{i-1} \ Jt_i)
          std::set_difference(p.I[i - 1].begin(), p.I[i - 1].end(), p.Jt[i].begin(), p.Jt[i].end(),
                              std::back_inserter(bb));
          bb.insert(bb.end(), p.J[i].begin(), p.J[i].end());
          std::sort(bb.begin(), bb.end());
          CHECK(bb == p.I[i]);
        }
        for (int i = 1; i + 1 < p.k; ++i) {
          std::vector<int> x;
          std::set_intersection(p.Jt[i + 1].begin(), p.Jt[i + 1].end(), p.J[i].begin(), p.J[i].end(),
                                std::back_inserter(x));
          CHECK_FALSE(x.empty());
        }
        CHECK(scaling_exponents(p, 2).t == t_oracle(p));
        BlockMatrixSpec s = build_block_spec(b, p);
        int sum = 0;
        for (const auto& blk : s.blocks) sum += blk.exponent;
        CHECK(s.gamma == sum);
        CHECK(s.gamma == gamma_oracle(p));
        CHECK(s.gamma_closed_form == gamma_oracle(p));
      }
  }
}

TEST_CASE("theta is the per-color all-terms intersection") {
  for (const char* n : {"b1", "b2", "k5", "matrix4"}) {
    Bubble b = load(n);
    for (const auto& c : find_symmetric_cuts(b))
      for (const auto& order : admissible_peel_orders(b, c)) {
        DecompositionPlan p = decompose(b, c, order);
        Interaction inter = interaction(b, p);
        std::set<int> common = {1, 2, 3};
        for (const auto& pc : inter.pieces) {
          std::set<int> here(pc.through_colors.begin(), pc.through_colors.end()), keep;
          std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                                std::inserter(keep, keep.begin()));
          common = keep;
        }
        if (b.rank() == 2) common.erase(3);
        CHECK(p.theta == static_cast<int>(common.size()));
      }
  }
}

TEST_CASE("k5 plans with no common through color are flagged") {
  Bubble b = load("k5");
  int flagged = 0, total = 0;
  for (const auto& c : find_symmetric_cuts(b))
    for (const auto& order : admissible_peel_orders(b, c)) {
      DecompositionPlan p = decompose(b, c, order);
      ++total;
      std::string err = check_plan(p);
      CHECK((p.theta == 0) == !err.empty());
      if (p.theta == 0) {
        ++flagged;
        CHECK_THROWS_AS(build_block_spec(b, p), PlanError);
      }
    }
  CHECK(total == 4);
  CHECK(flagged == 2);
}

TEST_CASE("scaling exponents of the worked examples") {
  auto se1 = scaling_exponents(optimize_plan(load("b1")), 4);
  CHECK(se1.k == 3);
  CHECK(se1.m == 2);
  CHECK(se1.t == 1);
  CHECK(se1.u == 1);
  auto se5 = scaling_exponents(optimize_plan(load("k5")), 2);
  CHECK(se5.k == 5);
  CHECK(se5.m == 4);
  CHECK(se5.t == 3);
  CHECK(se5.u == 7);
  CHECK(se5.g_lambda_power == mpq_class(1, 10));
  CHECK(se5.g_N_power == mpq_class(-1, 5));
  // u = (2tk - s)/(k - 1) on the B2 plan
  DecompositionPlan p2 = optimize_plan(load("b2"));
  auto se2 = scaling_exponents(p2, 4);
  mpq_class u = (2 * t_oracle(p2) * 3 - 4) / 2;
  CHECK(se2.t == t_oracle(p2));
  CHECK(se2.u == u);
}

TEST_CASE("theta of the worked examples") {
  CHECK(optimize_plan(load("b1")).theta == 2);
  CHECK(optimize_plan(load("b2")).theta == 1);
  DecompositionPlan p5 = optimize_plan(load("k5"));
  CHECK(p5.theta == 1);
  CHECK(p5.theta_colors == std::vector<int>{1});
}

TEST_CASE("block specs of the worked examples") {
  BlockMatrixSpec s1 = build_block_spec(load("b1"), optimize_plan(load("b1")));
  CHECK(s1.blocks.size() == 4);
  CHECK(s1.gamma == 12);
  CHECK(s1.factored_count == 12 - 4 * 2);
  for (const auto& blk : s1.blocks) CHECK(blk.factored_exponent == 1);
  BlockMatrixSpec s5 = build_block_spec(load("k5"), optimize_plan(load("k5")));
  CHECK(s5.gamma == 24);
  CHECK(s5.factored_count == 18);
  auto legs = field_leg_counts(s5);
  CHECK(legs.count("alpha1"));
  CHECK(legs.count("alpha3"));
  CHECK_FALSE(legs.count("alpha2"));
  BlockMatrixSpec m3 = build_block_spec(load("matrix3"), optimize_plan(load("matrix3")));
  CHECK(m3.blocks.size() == 4);
  for (const auto& blk : m3.blocks) CHECK(blk.factored_exponent == 1);
}

TEST_CASE("optimize_plan prefers larger theta then smaller gamma") {
  for (const char* n : {"b1", "b2"}) {
    Bubble b = load(n);
    DecompositionPlan best = optimize_plan(b);
    int g = build_block_spec(b, best).gamma;
    for (const auto& c : find_symmetric_cuts(b))
      for (const auto& order : admissible_peel_orders(b, c)) {
        DecompositionPlan p = decompose(b, c, order);
        CHECK(p.theta <= best.theta);
        if (p.theta == best.theta) CHECK(build_block_spec(b, p).gamma >= g);
      }
  }
}

TEST_CASE("instantiation: zero fields leave only the identity coupling") {
  for (const char* n : {"b1", "b2", "matrix3", "matrix4"}) {
    Bubble b = load(n);
    BlockMatrixSpec s = build_block_spec(b, optimize_plan(b));
    std::map<std::string, std::vector<cplx>> zero;
    for (const auto& [name, legs] : field_leg_counts(s))
      zero[name] = std::vector<cplx>(static_cast<size_t>(std::pow(2, legs)), 0);
    auto inst = instantiate(s, 2, zero, 0.3, 0.0);
    const auto& M = inst.at_eps.M;
    const auto& off = inst.at_eps.offsets;
    int hub = off[1];
    int bare = 0;
    for (size_t j = 1; j < s.blocks.size(); ++j) {
      int len = (j + 1 < off.size() ? off[j + 1] : static_cast<int>(M.cols())) - off[j];
      double row = M.block(0, off[j], hub, len).cwiseAbs().maxCoeff();
      double col = M.block(off[j], 0, len, hub).cwiseAbs().maxCoeff();
      CHECK(row == (s.blocks[j].row_field.empty() ? 1.0 : 0.0));
      CHECK(col == (s.blocks[j].col_field.empty() ? 1.0 : 0.0));
      bare += s.blocks[j].row_field.empty() + s.blocks[j].col_field.empty();
    }
    CHECK(bare >= 1);
    CHECK((inst.at_eps.one_minus_gM - (Eigen::MatrixXcd::Identity(M.rows(), M.cols()) - 0.3 * M)).norm() == 0.0);
  }
}

TEST_CASE("instantiation: arrowhead shape and Hermitian H on the real contour") {
  std::mt19937_64 rng(5);
  for (const char* n : {"b1", "b2", "matrix3", "matrix4", "k5"}) {
    Bubble b = load(n);
    BlockMatrixSpec s = build_block_spec(b, optimize_plan(b));
    auto inst = instantiate(s, 2, random_fields(s, 2, rng), cplx(0.2, 0.1), 0.0);
    const auto& H = inst.at_eps.H;
    CHECK_MESSAGE((H - H.adjoint()).cwiseAbs().maxCoeff() <= 1e-14, std::string(n));
    int hub = inst.at_eps.offsets[1];
    const auto& M = inst.at_eps.M;
    CHECK(M.block(hub, hub, M.rows() - hub, M.cols() - hub).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("instantiation: deformation norm bound 2 sqrt(k) N^t") {
  std::mt19937_64 rng(9);
  for (const char* n : {"b1", "b2", "k5", "matrix3"}) {
    Bubble b = load(n);
    DecompositionPlan p = optimize_plan(b);
    BlockMatrixSpec s = build_block_spec(b, p);
    double t = scaling_exponents(p, b.rank() - 1).t.get_d();
    for (int sample = 0; sample < 5; ++sample) {
      auto inst = instantiate(s, 2, random_fields(s, 2, rng), 0.1, 0.1);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(inst.Nmat);
      CHECK_MESSAGE(svd.singularValues()(0) <= 2 * std::sqrt(p.k) * std::pow(2.0, t), std::string(n));
      // confined to the first block row and column
      int hub = inst.at_eps.offsets[1];
      const auto& Nm = inst.Nmat;
      CHECK(Nm.block(hub, hub, Nm.rows() - hub, Nm.cols() - hub).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("instantiation rejects bad shapes") {
  BlockMatrixSpec s = build_block_spec(load("b1"), optimize_plan(load("b1")));
  std::mt19937_64 rng(1);
  auto f = random_fields(s, 2, rng);
  CHECK_THROWS(instantiate(s, 3, f, 0.1, 0.0));
  CHECK_THROWS_AS(instantiate(s, 2, f, 0.1, -1.0), std::invalid_argument);
}
