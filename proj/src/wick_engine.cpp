#include "hif/wick_engine.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>

namespace hif {

int MixedCovariance::add(const std::string& name) {
  if (find(name) >= 0) throw std::invalid_argument("variable '" + name + "' registered twice");
  names_.push_back(name);
  for (auto& row : table_) row.emplace_back();
  table_.emplace_back(names_.size());
  return static_cast<int>(names_.size()) - 1;
}

int MixedCovariance::add_real(const std::string& name, const GaussRat& variance) {
  int i = add(name);
  set(i, i, variance);
  return i;
}

std::pair<int, int> MixedCovariance::add_complex(const std::string& name, const GaussRat& c) {
  int z = add(name), zb = add(name + "bar");
  set(z, zb, c);
  return {z, zb};
}

std::array<int, 4> MixedCovariance::add_xpair(const std::string& alpha, const std::string& beta) {
  int a = add(alpha), ab = add(alpha + "bar"), b = add(beta), bb = add(beta + "bar");
  set(a, bb, GaussRat(0, -1));
  set(ab, b, GaussRat(0, -1));
  return {a, ab, b, bb};
}

void MixedCovariance::set(int i, int j, const GaussRat& v) {
  table_.at(i).at(j) = v;
  table_.at(j).at(i) = v;
}

const GaussRat& MixedCovariance::get(int i, int j) const { return table_.at(i).at(j); }

int MixedCovariance::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

GaussRat mixed_wick_moment(const std::vector<int>& monomial, const MixedCovariance& cov) {
  if (monomial.size() % 2) return GaussRat(0);
  for (int v : monomial)
    if (v < 0 || v >= cov.size()) throw std::out_of_range("unknown variable in monomial");
  std::vector<char> used(monomial.size(), 0);
  std::function<GaussRat()> rec = [&]() -> GaussRat {
    size_t i = 0;
    while (i < used.size() && used[i]) ++i;
    if (i == used.size()) return GaussRat(1);
    used[i] = 1;
    GaussRat total(0);
    for (size_t j = i + 1; j < used.size(); ++j) {
      if (used[j]) continue;
      const GaussRat& c = cov.get(monomial[i], monomial[j]);
      if (c.is_zero()) continue;
      used[j] = 1;
      total += c * rec();
      used[j] = 0;
    }
    used[i] = 0;
    return total;
  };
  return rec();
}

GaussRat NPoly::at(int N) const {
  GaussRat out(0);
  for (const auto& [e, c] : terms) out += c * pow(GaussRat(N), e);
  return out;
}

bool NPoly::operator==(const NPoly& o) const {
  auto clean = [](const std::map<int, GaussRat>& m) {
    std::map<int, GaussRat> out;
    for (const auto& [e, c] : m)
      if (!c.is_zero()) out[e] = c;
    return out;
  };
  auto a = clean(terms), b = clean(o.terms);
  if (a.size() != b.size()) return false;
  for (const auto& [e, c] : a) {
    auto it = b.find(e);
    if (it == b.end() || it->second != c) return false;
  }
  return true;
}

std::string NPoly::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (it->second.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << it->second.str() << ")N^" << it->first;
  }
  if (first) os << "0";
  return os.str();
}

GaussRat rational_power(int N, const mpq_class& e) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (N == 1) return GaussRat(1);
  mpq_class c = e;
  c.canonicalize();
  mpz_class base = N;
  if (c.get_den() != 1) {
    mpz_class root;
    if (!mpz_root(root.get_mpz_t(), base.get_mpz_t(), c.get_den().get_ui()))
      throw std::invalid_argument("N^" + c.get_str() + " is not rational; use N = 1 or an integer s");
    base = root;
  }
  return pow(GaussRat(mpq_class(base)), static_cast<int>(c.get_num().get_si()));
}

namespace {

class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(int n) : parent_(n), size_(n, 1) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
  }
  int merges() const { return static_cast<int>(history_.size()); }
  size_t mark() const { return history_.size(); }
  void rollback(size_t m) {
    while (history_.size() > m) {
      int b = history_.back();
      history_.pop_back();
      int a = parent_[b];
      size_[a] -= size_[b];
      parent_[b] = b;
    }
  }

 private:
  std::vector<int> parent_, size_;
  std::vector<int> history_;
};

struct Occurrence {
  std::vector<int> legs;  // slot ids in canonical leg order
};

struct PairClass {
  std::vector<Occurrence> holo, bar;
};

struct Network {
  int slots = 0;
  std::vector<std::pair<int, int>> links;
  std::map<std::string, PairClass> classes;

  int new_slots(int n) {
    int base = slots;
    slots += n;
    return base;
  }
};

using Histogram = std::map<int, std::int64_t>;  // component count -> number of pairings

// Enumerate all pairings class by class. first_choices optionally restricts the partner of the
// first holomorphic occurrence of the first class to (bar index, multiplicity) pairs.
Histogram enumerate_pairings(const Network& net, const std::vector<std::pair<int, std::int64_t>>& first_choices = {}) {
  Histogram hist;
  std::vector<const PairClass*> cls;
  for (const auto& [name, c] : net.classes) {
    if (c.holo.size() != c.bar.size()) return hist;
    if (!c.holo.empty()) cls.push_back(&c);
  }
  RollbackUnionFind uf(net.slots);
  for (const auto& [a, b] : net.links) uf.unite(a, b);
  std::vector<std::vector<char>> used(cls.size());
  for (size_t i = 0; i < cls.size(); ++i) used[i].assign(cls[i]->bar.size(), 0);

  std::function<void(size_t, size_t, std::int64_t)> rec = [&](size_t ci, size_t hi, std::int64_t w) {
    if (ci == cls.size()) {
      hist[net.slots - uf.merges()] += w;
      return;
    }
    const PairClass& c = *cls[ci];
    if (hi == c.holo.size()) {
      rec(ci + 1, 0, w);
      return;
    }
    auto try_bar = [&](size_t bi, std::int64_t mult) {
      used[ci][bi] = 1;
      size_t m = uf.mark();
      const auto& hl = c.holo[hi].legs;
      const auto& bl = c.bar[bi].legs;
      for (size_t l = 0; l < hl.size(); ++l) uf.unite(hl[l], bl[l]);
      rec(ci, hi + 1, w * mult);
      uf.rollback(m);
      used[ci][bi] = 0;
    };
    if (ci == 0 && hi == 0 && !first_choices.empty()) {
      for (const auto& [bi, mult] : first_choices) try_bar(bi, mult);
      return;
    }
    for (size_t bi = 0; bi < c.bar.size(); ++bi)
      if (!used[ci][bi]) try_bar(bi, 1);
  };
  rec(0, 0, 1);
  return hist;
}

mpz_class factorial(int n) {
  mpz_class r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void check_cap(int qk, const WickOptions& opt) {
  if (qk > opt.cap)
    throw CapExceeded("pairing enumeration needs q*k = " + std::to_string(qk) + " > cap " + std::to_string(opt.cap));
}

}  // namespace

std::vector<NPoly> direct_coefficients(const Bubble& b, int order, const WickOptions& opt) {
  const int k = b.k(), D = b.rank();
  check_cap(order * k, opt);
  std::vector<NPoly> out(order + 1);
  out[0].terms[0] = GaussRat(1);
  for (int q = 1; q <= order; ++q) {
    Network net;
    PairClass& T = net.classes["T"];
    for (int copy = 0; copy < q; ++copy) {
      std::vector<int> base(b.num_vertices());
      for (int v = 0; v < b.num_vertices(); ++v) {
        base[v] = net.new_slots(D);
        Occurrence o;
        for (int c = 0; c < D; ++c) o.legs.push_back(base[v] + c);
        (b.is_white(v) ? T.holo : T.bar).push_back(o);
      }
      for (const auto& e : b.edges())
        net.links.emplace_back(base[e.white] + e.color - 1, base[k + e.black] + e.color - 1);
    }
    // Copies 1..q-1 are interchangeable once the first T of copy 0 is paired outside copy 0.
    std::vector<std::pair<int, std::int64_t>> first;
    for (int j = 0; j < k; ++j) first.emplace_back(j, 1);
    if (q > 1)
      for (int j = 0; j < k; ++j) first.emplace_back(k + j, q - 1);
    Histogram h = enumerate_pairings(net, first);
    GaussRat pref = GaussRat(mpq_class(q % 2 ? -1 : 1, 1) / mpq_class(factorial(q)));
    int shift = opt.normalize_T ? -(D - 1) * q * k : 0;
    for (const auto& [comp, count] : h) out[q].terms[comp + shift] += pref * GaussRat(mpq_class(mpz_class(count)));
  }
  return out;
}

namespace {

std::string class_of(const FieldRef& f, bool& holo) {
  switch (f.kind) {
    case FieldKind::Sigma:
      holo = !f.conj;
      return "sigma";
    case FieldKind::Alpha:
      holo = !f.conj;  // alpha pairs with betabar, alphabar with beta
      return f.conj ? "X" + std::to_string(f.index) + "b" : "X" + std::to_string(f.index) + "a";
    default:
      holo = !f.conj;
      return f.conj ? "X" + std::to_string(f.index) + "a" : "X" + std::to_string(f.index) + "b";
  }
}

// Adds one half of a piece; returns the exposed slot of every edge in the half's legs.
std::map<int, int> add_half(Network& net, const BlockMatrixSpec& spec, const Half& h) {
  const Bubble& b = spec.bubble;
  const int D = b.rank();
  int node = net.new_slots(D);
  Occurrence t;
  for (int c = 0; c < D; ++c) t.legs.push_back(node + c);
  (h.bar ? net.classes["T"].bar : net.classes["T"].holo).push_back(t);
  std::map<int, int> exposed;
  std::map<int, int> field_slot;
  if (h.field) {
    const auto& fl = spec.plan.I[h.field->index];
    int base = net.new_slots(static_cast<int>(fl.size()));
    Occurrence o;
    for (size_t i = 0; i < fl.size(); ++i) {
      field_slot[fl[i]] = base + static_cast<int>(i);
      o.legs.push_back(base + static_cast<int>(i));
    }
    bool holo = true;
    std::string cls = class_of(*h.field, holo);
    (holo ? net.classes[cls].holo : net.classes[cls].bar).push_back(o);
  }
  for (int c = 1; c <= D; ++c) {
    int e = b.edge_at(h.vertex, c);
    auto it = field_slot.find(e);
    if (it != field_slot.end()) {
      net.links.emplace_back(node + c - 1, it->second);
      field_slot.erase(it);
    } else {
      exposed[e] = node + c - 1;
    }
  }
  for (const auto& [e, s] : field_slot) exposed[e] = s;
  return exposed;
}

void add_piece(Network& net, const BlockMatrixSpec& spec, const Piece& p) {
  auto r = add_half(net, spec, p.row);
  auto c = add_half(net, spec, p.col);
  for (int e : p.legs) net.links.emplace_back(r.at(e), c.at(e));
}

}  // namespace

NPoly hif_g2_coefficient(const BlockMatrixSpec& spec, int n, const WickOptions& opt) {
  const auto& pieces = spec.inter.pieces;
  const int P = static_cast<int>(pieces.size());
  const int D = spec.D;
  NPoly out;
  if (n == 0) {
    out.terms[0] = GaussRat(1);
    return out;
  }
  std::vector<int> m(P, 0);
  std::function<void(int, int)> rec = [&](int r, int left) {
    if (r == P - 1) {
      m[r] = left;
      Network net;
      net.classes["T"];
      GaussRat w(1);
      for (int i = 0; i < P; ++i) {
        for (int c = 0; c < m[i]; ++c) add_piece(net, spec, pieces[i]);
        GaussRat coef = pieces[i].coef_is_i ? GaussRat(0, 1) : GaussRat(-1);
        w *= pow(coef, m[i]) / GaussRat(mpq_class(factorial(m[i])));
      }
      int xpairs = 0;
      for (const auto& [name, c] : net.classes) {
        if (c.holo.size() != c.bar.size()) return;
        if (name[0] == 'X') xpairs += static_cast<int>(c.holo.size());
      }
      w *= pow(GaussRat(0, -1), xpairs);
      Histogram h = enumerate_pairings(net);
      int shift = opt.normalize_T ? -(D - 1) * n : 0;
      for (const auto& [comp, count] : h) out.terms[comp + shift] += w * GaussRat(mpq_class(mpz_class(count)));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      m[r] = c;
      rec(r + 1, left - c);
    }
    m[r] = 0;
  };
  rec(0, n);
  return out;
}

std::vector<NPoly> hif_coefficients(const BlockMatrixSpec& spec, int order, const WickOptions& opt) {
  check_cap(order * spec.k, opt);
  std::vector<NPoly> out(order + 1);
  for (int q = 0; q <= order; ++q) out[q] = hif_g2_coefficient(spec, spec.k * q, opt);
  return out;
}

PowerSeries series_at(const std::vector<NPoly>& c, int N, const mpq_class& s, const std::string& rep,
                      const std::string& model) {
  PowerSeries ps;
  ps.representation = rep;
  ps.model = model;
  ps.N = N;
  ps.s = s;
  for (size_t q = 0; q < c.size(); ++q) ps.a.push_back(c[q].at(N) * rational_power(N, -s * static_cast<long>(q)));
  return ps;
}

PowerSeries direct_series(const Bubble& b, int N, const mpq_class& s, int order, const WickOptions& opt) {
  return series_at(direct_coefficients(b, order, opt), N, s, "direct", "");
}

PowerSeries hif_series(const BlockMatrixSpec& spec, int N, const mpq_class& s, int order, const WickOptions& opt) {
  return series_at(hif_coefficients(spec, order, opt), N, s, "hif", "");
}

}  // namespace hif
