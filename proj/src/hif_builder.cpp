#include "hif/hif_builder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace hif {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains(const std::vector<int>& sorted, int x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> set_intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> edges_at(const Bubble& b, int v) {
  std::vector<int> out;
  for (int c = 1; c <= b.rank(); ++c) out.push_back(b.edge_at(v, c));
  return sorted_unique(out);
}

// Edges with exactly one endpoint in `region`.
std::vector<int> boundary(const Bubble& b, const std::vector<char>& region) {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(b.edges().size()); ++e)
    if (region[b.white_end(e)] != region[b.black_end(e)]) out.push_back(e);
  return out;
}

bool adjacent(const Bubble& b, int u, int v) {
  for (int c = 1; c <= b.rank(); ++c)
    if (b.neighbor(u, c) == v) return true;
  return false;
}

bool on_boundary(const Bubble& b, const SymmetricCut& cut, int v) {
  for (int c = 1; c <= b.rank(); ++c)
    if (!cut.in_F(b.neighbor(v, c))) return true;
  return false;
}

}  // namespace

std::string DecompositionPlan::label(const Bubble& b, int e, int step) const {
  std::set<int> remaining;
  for (int i = step; i < static_cast<int>(peel.size()); ++i) remaining.insert(peel[i]);
  int w = b.white_end(e), bl = b.black_end(e);
  int v;
  if (remaining.count(w) && !remaining.count(bl))
    v = w;
  else if (remaining.count(bl) && !remaining.count(w))
    v = bl;
  else
    v = cut.in_F(w) ? w : bl;
  return std::to_string(b.edges()[e].color) + "_" + b.name(v);
}

std::vector<std::string> DecompositionPlan::labels(const Bubble& b, const std::vector<int>& edges, int step) const {
  std::vector<std::string> out;
  for (int e : edges) out.push_back(label(b, e, step));
  return out;
}

std::vector<std::vector<int>> admissible_peel_orders(const Bubble& b, const SymmetricCut& cut) {
  std::vector<std::vector<int>> out;
  const std::vector<int>& F = cut.side_F;
  const size_t k = F.size();
  std::vector<int> path;
  std::vector<char> used(b.num_vertices(), 0);
  std::function<void()> rec = [&]() {
    if (path.size() == k) {
      out.push_back(path);
      return;
    }
    for (int v : F) {
      if (used[v]) continue;
      if (path.empty() ? !on_boundary(b, cut, v) : !adjacent(b, path.back(), v)) continue;
      used[v] = 1;
      path.push_back(v);
      rec();
      path.pop_back();
      used[v] = 0;
    }
  };
  rec();
  return out;
}

namespace {

std::vector<int> first_peel_order(const Bubble& b, const SymmetricCut& cut) {
  const std::vector<int>& F = cut.side_F;
  const size_t k = F.size();
  std::vector<int> path;
  std::vector<char> used(b.num_vertices(), 0);
  std::function<bool()> rec = [&]() -> bool {
    if (path.size() == k) return true;
    for (int v : F) {
      if (used[v]) continue;
      if (path.empty() ? !on_boundary(b, cut, v) : !adjacent(b, path.back(), v)) continue;
      used[v] = 1;
      path.push_back(v);
      if (rec()) return true;
      path.pop_back();
      used[v] = 0;
    }
    return false;
  };
  if (!rec()) throw PlanError("no admissible peel order for this cut");
  return path;
}

}  // namespace

DecompositionPlan decompose(const Bubble& b, const SymmetricCut& cut, const std::optional<std::vector<int>>& peel_order) {
  if (auto err = check_cut(b, cut); !err.empty()) throw PlanError("cut not symmetric: " + err);
  DecompositionPlan plan;
  plan.D = b.rank();
  plan.k = static_cast<int>(cut.side_F.size());
  plan.cut = cut;
  plan.eta = plan.k % 2;
  const int k = plan.k;

  if (peel_order) {
    const auto& p = *peel_order;
    if (static_cast<int>(p.size()) != k) throw PlanError("peel order must list every vertex of F exactly once");
    std::set<int> seen;
    for (size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0 || p[i] >= b.num_vertices() || !cut.in_F(p[i]))
        throw PlanError("peel order contains a vertex outside F");
      if (!seen.insert(p[i]).second) throw PlanError("peel order repeats a vertex");
    }
    if (!on_boundary(b, cut, p[0])) throw PlanError("first peeled vertex must carry a cut edge");
    for (size_t i = 1; i < p.size(); ++i)
      if (!adjacent(b, p[i - 1], p[i]))
        throw PlanError("invalid peel step " + std::to_string(i + 1) + ": '" + b.name(p[i]) +
                        "' is not joined to the previous vertex through J_" + std::to_string(i));
    plan.peel = p;
  } else {
    plan.peel = first_peel_order(b, cut);
  }

  std::vector<char> region(b.num_vertices(), 0);
  for (int v : cut.side_F) region[v] = 1;
  plan.I.assign(k, {});
  plan.J.assign(k, {});
  plan.Jt.assign(k, {});
  plan.I[0] = boundary(b, region);
  for (int i = 1; i < k; ++i) {
    int p = plan.peel[i - 1];
    region[p] = 0;
    plan.I[i] = boundary(b, region);
    std::vector<int> at = edges_at(b, p);
    plan.Jt[i] = set_intersect(plan.I[i - 1], at);
    for (int e : at)
      if (region[b.other_end(e, p)]) plan.J[i].push_back(e);
    plan.J[i] = sorted_unique(plan.J[i]);
  }
  if (k >= 2) {
    Interaction inter = interaction(b, plan);
    std::vector<int> common;
    for (int c = 1; c <= plan.D; ++c) common.push_back(c);
    for (const auto& pc : inter.pieces) common = set_intersect(common, pc.through_colors);
    plan.theta_colors = common;
    plan.theta = static_cast<int>(common.size());
  }
  return plan;
}

int theta(const DecompositionPlan& plan) { return plan.theta; }

std::string check_plan(const DecompositionPlan& plan) {
  const int k = plan.k;
  if (k < 2) return {};
  for (int i = 1; i < k; ++i) {
    if (plan.J[i].empty()) return "J_" + std::to_string(i) + " is empty";
    if (i + 1 < k && set_intersect(plan.Jt[i + 1], plan.J[i]).empty())
      return "J~_" + std::to_string(i + 1) + " and J_" + std::to_string(i) + " do not meet";
    // I_i = J_i + (I_{i-1} \ J~_i), disjoint
    auto rest = set_minus(plan.I[i - 1], plan.Jt[i]);
    if (!set_intersect(plan.J[i], rest).empty()) return "J_" + std::to_string(i) + " overlaps I_{i-1} \\ J~_i";
    auto rhs = sorted_unique([&] {
      auto v = plan.J[i];
      v.insert(v.end(), rest.begin(), rest.end());
      return v;
    }());
    if (rhs != plan.I[i]) return "I_" + std::to_string(i) + " != J_i + (I_{i-1} \\ J~_i)";
    // I_{i-1} = (I_i \ J_i) + J~_i, disjoint
    auto rest2 = set_minus(plan.I[i], plan.J[i]);
    if (!set_intersect(rest2, plan.Jt[i]).empty()) return "J~_" + std::to_string(i) + " overlaps I_i \\ J_i";
    auto lhs = sorted_unique([&] {
      auto v = rest2;
      v.insert(v.end(), plan.Jt[i].begin(), plan.Jt[i].end());
      return v;
    }());
    if (lhs != plan.I[i - 1]) return "I_" + std::to_string(i - 1) + " != (I_i \\ J_i) + J~_i";
  }
  if (static_cast<int>(plan.I[k - 1].size()) != plan.D) return "I_{k-1} does not have D edges";
  if (plan.theta < 1) return "theta is zero";
  return {};
}

ScalingExponents scaling_exponents(const DecompositionPlan& plan, const mpq_class& s) {
  ScalingExponents se;
  se.k = plan.k;
  se.s = s;
  if (plan.k < 2) {
    se.m = 0;
    return se;
  }
  const int k = plan.k;
  se.m = k - 1;
  int best = plan.D - plan.theta;
  for (int i = 0; i <= k - 2; ++i)
    best = std::max(best, static_cast<int>(plan.I[i].size() + plan.J[i + 1].size()) - plan.theta);
  se.t = mpq_class(best, 2);
  se.t.canonicalize();
  se.u = (2 * se.t * k - s) / (k - 1);
  se.u.canonicalize();
  se.g_lambda_power = mpq_class(1, 2 * k);
  se.g_N_power = -s / (2 * k);
  se.g_N_power.canonicalize();
  return se;
}

std::string FieldRef::name() const {
  switch (kind) {
    case FieldKind::Sigma: return "sigma";
    case FieldKind::Alpha: return "alpha" + std::to_string(index);
    default: return "beta" + std::to_string(index);
  }
}

std::vector<int> half_legs(const Bubble& b, const DecompositionPlan& plan, const Half& h) {
  std::vector<int> at = edges_at(b, h.vertex);
  if (!h.field) return at;
  const std::vector<int>& fl = plan.I[h.field->index];
  std::vector<int> out;
  std::set_symmetric_difference(at.begin(), at.end(), fl.begin(), fl.end(), std::back_inserter(out));
  return out;
}

namespace {

Half conj_half(Half h) {
  h.bar = !h.bar;
  if (h.field) h.field->conj = !h.field->conj;
  return h;
}

Piece conj_piece(const Piece& p) {
  Piece q;
  q.coef_is_i = p.coef_is_i;
  q.row = conj_half(p.col);
  q.col = conj_half(p.row);
  return q;
}

FieldRef phi(int j, bool conj) {
  return j == 0 ? FieldRef{FieldKind::Sigma, 0, conj} : FieldRef{FieldKind::Alpha, j, conj};
}

void finish_piece(const Bubble& b, const DecompositionPlan& plan, Piece& p) {
  if (!p.row.bar || p.col.bar) throw std::logic_error("piece row must hold the conjugate tensor");
  auto rl = half_legs(b, plan, p.row), cl = half_legs(b, plan, p.col);
  if (rl != cl) throw std::logic_error("piece halves do not share their intermediate legs");
  p.legs = rl;
  auto direct = [&](const Half& h, int e) {
    if (!contains(p.legs, e)) return false;
    return !h.field || !contains(plan.I[h.field->index], e);
  };
  p.through_colors.clear();
  for (int c = 1; c <= b.rank(); ++c) {
    int e = b.edge_at(p.row.vertex, c);
    if (direct(p.row, e) && b.edge_at(p.col.vertex, c) == e && direct(p.col, e)) p.through_colors.push_back(c);
  }
}

std::string slot_name(const Half& row) {
  if (!row.field) return "id";
  return FieldRef{row.field->kind, row.field->index, false}.name();
}

}  // namespace

Interaction interaction(const Bubble& b, const DecompositionPlan& plan) {
  const int k = plan.k;
  if (k < 2) return {};
  Interaction out;
  auto black = [&](int v) { return !b.is_white(v); };
  auto P = [&](int i) { return plan.peel[i - 1]; };

  if (k % 2 == 0) out.fields.push_back({FieldKind::Sigma, 0, plan.I[0]});
  for (int j = (k % 2 == 0 ? 2 : 1); j <= k - 2; j += 2) out.fields.push_back({FieldKind::Alpha, j, plan.I[j]});

  if (k % 2 == 1) {
    Half X{P(1), black(P(1)), FieldRef{FieldKind::Beta, 1, false}};
    Half Xb = conj_half(X);
    Piece p;
    p.coef_is_i = false;
    p.row = X.bar ? X : Xb;
    p.col = X.bar ? Xb : X;
    p.slot = "beta1";
    finish_piece(b, plan, p);
    out.pieces.push_back(p);
  }
  for (int j = (k % 2 == 1 ? 2 : 1); j <= k - 3; j += 2) {
    Half A{P(j), black(P(j)), phi(j - 1, true)};
    Half B{P(j + 1), black(P(j + 1)), FieldRef{FieldKind::Beta, j + 1, false}};
    Piece p;
    p.row = A.bar ? A : B;
    p.col = A.bar ? B : A;
    Piece q = conj_piece(p);
    p.slot = slot_name(p.row);
    q.slot = slot_name(q.row);
    finish_piece(b, plan, p);
    finish_piece(b, plan, q);
    bool p_first = p.row.field->kind != FieldKind::Beta;
    out.pieces.push_back(p_first ? p : q);
    out.pieces.push_back(p_first ? q : p);
  }
  {
    int a = P(k - 1), c = P(k);
    int q = black(a) ? a : c;
    int w = black(a) ? c : a;
    Piece p;
    p.row = Half{q, true, phi(k - 2, true)};
    p.col = Half{w, false, std::nullopt};
    Piece r = conj_piece(p);
    p.slot = slot_name(p.row);
    r.slot = "id";
    finish_piece(b, plan, p);
    finish_piece(b, plan, r);
    out.pieces.push_back(p);
    out.pieces.push_back(r);
  }
  return out;
}

int gamma_closed_form(const DecompositionPlan& plan) {
  const int k = plan.k, D = plan.D;
  if (k < 2) return 0;
  int g = 3 * D;
  if (k % 2 == 1) {
    g += static_cast<int>(plan.I[0].size());
    for (int j = 2; j <= k - 3; j += 2) g += 2 * static_cast<int>(plan.I[j].size());
  } else {
    for (int j = 1; j <= k - 3; j += 2) g += 2 * static_cast<int>(plan.I[j].size());
  }
  return g;
}

BlockMatrixSpec build_block_spec(const Bubble& b, const DecompositionPlan& plan) {
  if (plan.k < 2) throw PlanError("block matrix needs k >= 2");
  if (auto err = check_plan(plan); !err.empty()) throw PlanError("plan invariant violated: " + err);
  BlockMatrixSpec spec;
  spec.D = plan.D;
  spec.k = plan.k;
  spec.theta = plan.theta;
  spec.theta_colors = plan.theta_colors;
  spec.eta = plan.eta;
  spec.plan = plan;
  spec.bubble = b;
  spec.inter = interaction(b, plan);

  BlockSlot hub;
  hub.role = BlockRole::Hub;
  hub.name = "hub";
  hub.exponent = plan.D;
  hub.factored_exponent = plan.D - plan.theta;
  spec.blocks.push_back(hub);
  const auto& pieces = spec.inter.pieces;
  for (size_t s = 0; s < pieces.size(); ++s) {
    const Piece& p = pieces[s];
    BlockSlot bs;
    bs.role = p.slot == "id" ? BlockRole::IdentitySlot : BlockRole::FieldSlot;
    bs.name = p.slot;
    bs.exponent = static_cast<int>(p.legs.size());
    bs.factored_exponent = bs.exponent - plan.theta;
    auto padding = [&](const Half& h) {
      int n = 0;
      for (int e : edges_at(b, h.vertex))
        if (contains(p.legs, e)) ++n;
      return n;
    };
    if (p.row.field) {
      bs.row_field = p.row.field->name();
      bs.row_field_conj = p.row.field->conj;
    }
    bs.row_padding = padding(p.row);
    bs.row_has_i = true;
    if (p.col.field) {
      bs.col_field = p.col.field->name();
      bs.col_field_conj = p.col.field->conj;
    }
    bs.col_padding = padding(p.col);
    bs.col_has_i = !p.coef_is_i;
    bs.piece = static_cast<int>(s);
    spec.blocks.push_back(bs);
  }
  // X pairs are consecutive i-pieces; the eta piece stands alone.
  for (size_t s = 1; s < spec.blocks.size();) {
    if (!pieces[spec.blocks[s].piece].coef_is_i) {
      ++s;
      continue;
    }
    spec.blocks[s].partner = static_cast<int>(s + 1);
    spec.blocks[s + 1].partner = static_cast<int>(s);
    if (spec.blocks[s].exponent != spec.blocks[s + 1].exponent)
      throw std::logic_error("paired slots of different size");
    s += 2;
  }
  spec.gamma = 0;
  for (const auto& bl : spec.blocks) spec.gamma += bl.exponent;
  spec.gamma_closed_form = gamma_closed_form(plan);
  spec.factored_count = spec.gamma - (plan.k + 1) * plan.theta;
  return spec;
}

DecompositionPlan optimize_plan(const Bubble& b, int vertex_cap) {
  auto cuts = find_symmetric_cuts(b, vertex_cap);
  if (cuts.empty()) throw PlanError("bubble is not positive");
  if (b.k() < 2) return decompose(b, cuts.front());
  std::optional<DecompositionPlan> best;
  int best_gamma = 0;
  for (const auto& cut : cuts) {
    for (const auto& order : admissible_peel_orders(b, cut)) {
      DecompositionPlan p = decompose(b, cut, order);
      int g = gamma_closed_form(p);
      if (!best || p.theta > best->theta || (p.theta == best->theta && g < best_gamma)) {
        best = p;
        best_gamma = g;
      }
    }
  }
  if (!best) throw PlanError("no admissible peel order for any cut");
  return *best;
}

FieldValues contour_fields(const std::map<std::string, std::vector<cplx>>& fields, double eps) {
  FieldValues fv;
  const double r2 = std::sqrt(0.5);
  const cplx I(0, 1);
  for (const auto& [name, val] : fields) {
    if (name == "sigma") {
      fv.value[name] = val;
      std::vector<cplx> bar(val.size());
      for (size_t i = 0; i < val.size(); ++i) bar[i] = std::conj(val[i]);
      fv.bar[name] = bar;
      continue;
    }
    if (name.rfind("alpha", 0) != 0) continue;
    std::string partner = "beta" + name.substr(5);
    auto it = fields.find(partner);
    if (it == fields.end()) throw std::invalid_argument("field " + name + " given without " + partner);
    const auto& beta = it->second;
    if (beta.size() != val.size()) throw std::invalid_argument("shape mismatch between " + name + " and " + partner);
    std::vector<cplx> al(val.size()), alb(val.size()), be(val.size()), beb(val.size());
    for (size_t i = 0; i < val.size(); ++i) {
      cplx a = (val[i] + beta[i]) * r2, bb = (val[i] - beta[i]) * r2;
      cplx ar = a.real() - I * eps * std::tanh(a.real());
      cplx ai = a.imag() - I * eps * std::tanh(a.imag());
      cplx br = bb.real() + I * eps * std::tanh(bb.real());
      cplx bi = bb.imag() + I * eps * std::tanh(bb.imag());
      cplx ap = ar + I * ai, apb = ar - I * ai, bp = br + I * bi, bpb = br - I * bi;
      al[i] = (ap + bp) * r2;
      alb[i] = (apb + bpb) * r2;
      be[i] = (ap - bp) * r2;
      beb[i] = (apb - bpb) * r2;
    }
    fv.value[name] = al;
    fv.bar[name] = alb;
    fv.value[partner] = be;
    fv.bar[partner] = beb;
  }
  return fv;
}

namespace {

size_t ipow(int N, int e) {
  size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<size_t>(N);
  return r;
}

// Matrix of one half: rows index the tensor node (colors in order, minus removed colors),
// columns index the intermediate legs (sorted, minus removed legs).
Eigen::MatrixXcd half_matrix(const Bubble& b, const DecompositionPlan& plan, const Half& h, const std::vector<int>& legs,
                             int N, const FieldValues& fv, const std::vector<int>& removed_colors) {
  const int D = b.rank();
  std::vector<int> tcolors, removed_edges;
  for (int c = 1; c <= D; ++c) {
    if (contains(removed_colors, c))
      removed_edges.push_back(b.edge_at(h.vertex, c));
    else
      tcolors.push_back(c);
  }
  removed_edges = sorted_unique(removed_edges);
  std::vector<int> mlegs;
  for (int e : legs)
    if (!contains(removed_edges, e)) mlegs.push_back(e);
  const size_t rows = ipow(N, static_cast<int>(tcolors.size()));
  const size_t cols = ipow(N, static_cast<int>(mlegs.size()));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));

  const std::vector<cplx>* ftensor = nullptr;
  std::vector<int> flegs;
  if (h.field) {
    const auto& src = h.field->conj ? fv.bar : fv.value;
    auto it = src.find(h.field->name());
    if (it == src.end()) throw std::invalid_argument("missing value for field " + h.field->name());
    ftensor = &it->second;
    flegs = plan.I[h.field->index];
    if (ftensor->size() != ipow(N, static_cast<int>(flegs.size())))
      throw std::invalid_argument("shape mismatch for field " + h.field->name());
  }
  // index of every edge: either from the tensor node, or from the intermediate legs
  std::vector<int> eidx(b.edges().size(), 0);
  std::vector<int> tidx(tcolors.size()), midx(mlegs.size());
  for (size_t r = 0; r < rows; ++r) {
    size_t rr = r;
    for (size_t p = tcolors.size(); p-- > 0;) {
      tidx[p] = static_cast<int>(rr % N);
      rr /= N;
    }
    for (size_t c = 0; c < cols; ++c) {
      size_t cc = c;
      for (size_t p = mlegs.size(); p-- > 0;) {
        midx[p] = static_cast<int>(cc % N);
        cc /= N;
      }
      for (int e : removed_edges) eidx[e] = 0;
      for (size_t p = 0; p < mlegs.size(); ++p) eidx[mlegs[p]] = midx[p];
      bool ok = true;
      for (size_t p = 0; p < tcolors.size() && ok; ++p) {
        int e = b.edge_at(h.vertex, tcolors[p]);
        if (contains(legs, e)) {
          if (eidx[e] != tidx[p]) ok = false;
        } else {
          eidx[e] = tidx[p];  // contracted into the field
        }
      }
      if (!ok) continue;
      cplx v = 1;
      if (ftensor) {
        size_t f = 0;
        for (int e : flegs) f = f * N + eidx[e];
        v = (*ftensor)[f];
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return out;
}

}  // namespace

Instantiated instantiate_values(const BlockMatrixSpec& spec, int N, const FieldValues& fv, cplx g, bool factored) {
  const Bubble& b = spec.bubble;
  const auto& plan = spec.plan;
  std::vector<int> removed = factored ? spec.theta_colors : std::vector<int>{};
  const cplx I(0, 1);
  std::vector<Eigen::MatrixXcd> rows, cols;
  for (size_t s = 1; s < spec.blocks.size(); ++s) {
    const Piece& p = spec.inter.pieces[spec.blocks[s].piece];
    // removed intermediate legs are the through edges of the removed colors
    Eigen::MatrixXcd R = half_matrix(b, plan, p.row, p.legs, N, fv, removed);
    Eigen::MatrixXcd C = half_matrix(b, plan, p.col, p.legs, N, fv, removed).transpose();
    rows.push_back(I * R);
    cols.push_back(spec.blocks[s].col_has_i ? Eigen::MatrixXcd(I * C) : C);
  }
  Instantiated out;
  int hub = static_cast<int>(ipow(N, factored ? spec.blocks[0].factored_exponent : spec.blocks[0].exponent));
  int total = hub;
  out.offsets.push_back(0);
  for (auto& r : rows) {
    out.offsets.push_back(total);
    total += static_cast<int>(r.cols());
  }
  out.M = Eigen::MatrixXcd::Zero(total, total);
  for (size_t s = 0; s < rows.size(); ++s) {
    int off = out.offsets[s + 1];
    if (rows[s].rows() != hub || cols[s].cols() != hub) throw std::logic_error("block shape mismatch");
    out.M.block(0, off, hub, rows[s].cols()) = rows[s];
    out.M.block(off, 0, cols[s].rows(), hub) = cols[s];
  }
  // H = -i C^{-1} M; C is 1 on the hub and eta blocks and [[0,-i],[-i,0]] on X pairs.
  out.H = -I * out.M;
  for (size_t s = 1; s < spec.blocks.size(); ++s) {
    int partner = spec.blocks[s].partner;
    if (partner < 0) continue;
    int off = out.offsets[s], poff = out.offsets[partner];
    int len = static_cast<int>(rows[s - 1].cols());
    out.H.block(off, 0, len, total) = out.M.block(poff, 0, len, total);
  }
  out.one_minus_gM = Eigen::MatrixXcd::Identity(total, total) - g * out.M;
  return out;
}

InstantiatedEps instantiate(const BlockMatrixSpec& spec, int N, const std::map<std::string, std::vector<cplx>>& fields,
                            cplx g, double eps, bool factored) {
  if (eps < 0) throw std::invalid_argument("eps must be non-negative");
  InstantiatedEps out;
  out.at_eps = instantiate_values(spec, N, contour_fields(fields, eps), g, factored);
  if (eps > 0) {
    Instantiated base = instantiate_values(spec, N, contour_fields(fields, 0.0), g, factored);
    out.Nmat = (out.at_eps.M - base.M) / eps;
  } else {
    out.Nmat = Eigen::MatrixXcd::Zero(out.at_eps.M.rows(), out.at_eps.M.cols());
  }
  return out;
}

Eigen::MatrixXcd dense_K(const BlockMatrixSpec& spec, int N, const FieldValues& fv) {
  const Bubble& b = spec.bubble;
  Eigen::MatrixXcd K;
  const cplx I(0, 1);
  for (const auto& p : spec.inter.pieces) {
    Eigen::MatrixXcd R = half_matrix(b, spec.plan, p.row, p.legs, N, fv, {});
    Eigen::MatrixXcd C = half_matrix(b, spec.plan, p.col, p.legs, N, fv, {}).transpose();
    Eigen::MatrixXcd term = (p.coef_is_i ? I : cplx(-1)) * (R * C);
    if (K.size() == 0)
      K = term;
    else
      K += term;
  }
  return K;
}

std::map<std::string, int> field_leg_counts(const BlockMatrixSpec& spec) {
  std::map<std::string, int> out;
  for (const auto& f : spec.inter.fields) {
    int n = static_cast<int>(f.legs.size());
    if (f.kind == FieldKind::Sigma) {
      out["sigma"] = n;
    } else {
      out["alpha" + std::to_string(f.index)] = n;
      out["beta" + std::to_string(f.index)] = n;
    }
  }
  return out;
}

}  // namespace hif
