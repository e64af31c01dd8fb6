#include "hif/bubble_core.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace hif {

Bubble Bubble::make(int D, std::vector<std::string> whites, std::vector<std::string> blacks,
                    std::vector<Edge> edges) {
  if (D < 1) throw ValidationError("rank must be positive");
  if (whites.empty()) throw ValidationError("bubble needs at least one white vertex");
  if (whites.size() != blacks.size())
    throw ValidationError("white and black vertex counts differ (" + std::to_string(whites.size()) +
                          " vs " + std::to_string(blacks.size()) + ")");
  Bubble b;
  b.D_ = D;
  b.white_names_ = std::move(whites);
  b.black_names_ = std::move(blacks);
  b.edges_ = std::move(edges);
  const int k = b.k();
  {
    std::vector<std::string> all = b.white_names_;
    all.insert(all.end(), b.black_names_.begin(), b.black_names_.end());
    std::sort(all.begin(), all.end());
    auto dup = std::adjacent_find(all.begin(), all.end());
    if (dup != all.end()) throw ValidationError("duplicate vertex name '" + *dup + "'");
  }
  b.inc_.assign(2 * k, std::vector<int>(D, -1));
  for (int e = 0; e < static_cast<int>(b.edges_.size()); ++e) {
    const Edge& ed = b.edges_[e];
    if (ed.color < 1 || ed.color > D)
      throw ValidationError("edge " + std::to_string(e) + ": color " + std::to_string(ed.color) +
                            " outside 1.." + std::to_string(D));
    if (ed.white < 0 || ed.white >= k || ed.black < 0 || ed.black >= k)
      throw ValidationError("edge " + std::to_string(e) + ": endpoint out of range");
    int& w = b.inc_[ed.white][ed.color - 1];
    int& bl = b.inc_[k + ed.black][ed.color - 1];
    if (w != -1)
      throw ValidationError("duplicate color " + std::to_string(ed.color) + " at vertex '" +
                            b.white_names_[ed.white] + "'");
    if (bl != -1)
      throw ValidationError("duplicate color " + std::to_string(ed.color) + " at vertex '" +
                            b.black_names_[ed.black] + "'");
    w = e;
    bl = e;
  }
  for (int v = 0; v < 2 * k; ++v)
    for (int c = 1; c <= D; ++c)
      if (b.inc_[v][c - 1] == -1)
        throw ValidationError("vertex '" + b.name(v) + "' has no edge of color " + std::to_string(c));
  std::vector<int> seen(2 * k, 0), stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int c = 1; c <= D; ++c) {
      int u = b.neighbor(v, c);
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  if (count != 2 * k) throw ValidationError("graph is disconnected");
  return b;
}

const std::string& Bubble::name(int v) const {
  return is_white(v) ? white_names_[v] : black_names_[v - k()];
}

int Bubble::find_vertex(const std::string& nm) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (name(v) == nm) return v;
  return -1;
}

int Bubble::neighbor(int v, int c) const { return other_end(edge_at(v, c), v); }

int Bubble::other_end(int e, int v) const {
  int w = white_end(e), bl = black_end(e);
  return v == w ? bl : w;
}

std::string Bubble::to_text() const {
  std::ostringstream os;
  os << "rank " << D_ << "\nwhite";
  for (auto& n : white_names_) os << ' ' << n;
  os << "\nblack";
  for (auto& n : black_names_) os << ' ' << n;
  os << '\n';
  for (auto& e : edges_) os << "edge " << white_names_[e.white] << ' ' << black_names_[e.black] << ' ' << e.color << '\n';
  return os.str();
}

namespace {

struct RawEdge {
  std::string a, b;
  int color;
  int line;
};

Bubble assemble(int D, const std::vector<std::string>& whites, const std::vector<std::string>& blacks,
                const std::vector<RawEdge>& raw) {
  std::map<std::string, int> wi, bi;
  for (int i = 0; i < static_cast<int>(whites.size()); ++i) wi[whites[i]] = i;
  for (int i = 0; i < static_cast<int>(blacks.size()); ++i) bi[blacks[i]] = i;
  std::vector<Edge> edges;
  for (const auto& r : raw) {
    auto fa_w = wi.find(r.a), fa_b = bi.find(r.a), fb_w = wi.find(r.b), fb_b = bi.find(r.b);
    bool a_known = fa_w != wi.end() || fa_b != bi.end();
    bool b_known = fb_w != wi.end() || fb_b != bi.end();
    if (!a_known) throw ParseError("unknown vertex '" + r.a + "'", r.line);
    if (!b_known) throw ParseError("unknown vertex '" + r.b + "'", r.line);
    if (fa_w != wi.end() && fb_b != bi.end()) {
      edges.push_back({fa_w->second, fb_b->second, r.color});
    } else if (fa_b != bi.end() && fb_w != wi.end()) {
      edges.push_back({fb_w->second, fa_b->second, r.color});
    } else {
      throw ParseError("non-bipartite edge '" + r.a + "' - '" + r.b + "'", r.line);
    }
  }
  // Map validation failures back to the offending line where possible.
  try {
    return Bubble::make(D, whites, blacks, edges);
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    if (msg.rfind("duplicate color", 0) == 0) {
      std::map<std::pair<std::string, int>, int> seen;
      for (const auto& r : raw) {
        for (const auto& v : {r.a, r.b}) {
          if (seen.count({v, r.color})) throw ParseError(msg, r.line);
          seen[{v, r.color}] = r.line;
        }
      }
    }
    throw ParseError(msg, 0);
  }
}

Bubble parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), 0);
  }
  try {
    int D = j.at("rank").get<int>();
    auto whites = j.at("white").get<std::vector<std::string>>();
    auto blacks = j.at("black").get<std::vector<std::string>>();
    std::vector<RawEdge> raw;
    int idx = 0;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw ParseError("edges[" + std::to_string(idx) + "] must be [v, w, c]", 0);
      raw.push_back({e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<int>(), 0});
      ++idx;
    }
    return assemble(D, whites, blacks, raw);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad JSON field: ") + e.what(), 0);
  }
}

}  // namespace

Bubble parse_bubble(const std::string& text) {
  auto first = std::find_if(text.begin(), text.end(), [](unsigned char ch) { return !std::isspace(ch); });
  if (first != text.end() && *first == '{') return parse_json(text);

  int D = -1;
  std::vector<std::string> whites, blacks;
  bool have_white = false, have_black = false;
  std::vector<RawEdge> raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (kw == "rank") {
      if (toks.size() != 1) throw ParseError("'rank' expects one integer", line_no);
      try {
        size_t pos = 0;
        D = std::stoi(toks[0], &pos);
        if (pos != toks[0].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("'rank' expects an integer, got '" + toks[0] + "'", line_no);
      }
    } else if (kw == "white") {
      if (have_white) throw ParseError("'white' given twice", line_no);
      have_white = true;
      whites = toks;
    } else if (kw == "black") {
      if (have_black) throw ParseError("'black' given twice", line_no);
      have_black = true;
      blacks = toks;
    } else if (kw == "edge") {
      if (toks.size() != 3) throw ParseError("'edge' expects: edge v w c", line_no);
      int c = 0;
      try {
        size_t pos = 0;
        c = std::stoi(toks[2], &pos);
        if (pos != toks[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("edge color must be an integer, got '" + toks[2] + "'", line_no);
      }
      raw.push_back({toks[0], toks[1], c, line_no});
    } else {
      throw ParseError("unknown keyword '" + kw + "'", line_no);
    }
  }
  if (D < 0) throw ParseError("missing 'rank' line", 0);
  if (!have_white) throw ParseError("missing 'white' line", 0);
  if (!have_black) throw ParseError("missing 'black' line", 0);
  for (const auto& r : raw)
    if (r.color < 1 || r.color > D)
      throw ParseError("color " + std::to_string(r.color) + " outside 1.." + std::to_string(D), r.line);
  return assemble(D, whites, blacks, raw);
}

FaceReport faces(const Bubble& b) {
  FaceReport rep;
  const int D = b.rank(), k = b.k();
  for (int i = 1; i <= D; ++i) {
    for (int j = i + 1; j <= D; ++j) {
      std::vector<char> visited(k, 0);
      for (int w = 0; w < k; ++w) {
        if (visited[w]) continue;
        Face f{i, j, {}, {}};
        int v = w;
        do {
          visited[v] = 1;
          f.vertices.push_back(v);
          f.edges.push_back(b.edge_at(v, i));
          int bl = b.neighbor(v, i);
          f.vertices.push_back(bl);
          f.edges.push_back(b.edge_at(bl, j));
          v = b.neighbor(bl, j);
        } while (v != w);
        rep.faces.push_back(std::move(f));
      }
    }
  }
  rep.total = static_cast<int>(rep.faces.size());
  return rep;
}

std::vector<Jacket> jackets(const Bubble& b) {
  const int D = b.rank();
  if (D < 3) throw std::invalid_argument("jackets need D >= 3; the D = 2 case is handled by matrix_hif");
  FaceReport fr = faces(b);
  std::vector<int> rest(D - 1);
  std::iota(rest.begin(), rest.end(), 2);
  std::vector<Jacket> out;
  do {
    if (rest.front() > rest.back()) continue;  // one orientation per cycle
    Jacket jk;
    jk.cycle.push_back(1);
    jk.cycle.insert(jk.cycle.end(), rest.begin(), rest.end());
    auto adjacent = [&](int a, int c) {
      for (int p = 0; p < D; ++p) {
        int x = jk.cycle[p], y = jk.cycle[(p + 1) % D];
        if ((x == a && y == c) || (x == c && y == a)) return true;
      }
      return false;
    };
    for (int f = 0; f < fr.total; ++f)
      if (adjacent(fr.faces[f].ci, fr.faces[f].cj)) jk.face_ids.push_back(f);
    const int V = 2 * b.k(), E = D * b.k(), F = static_cast<int>(jk.face_ids.size());
    const int chi = V - E + F;
    if ((2 - chi) % 2 != 0 || 2 - chi < 0)
      throw std::logic_error("jacket with non-integer or negative genus");
    jk.genus = (2 - chi) / 2;
    out.push_back(std::move(jk));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

DegreeReport gurau_degree_report(const Bubble& b) {
  const int D = b.rank();
  auto js = jackets(b);
  DegreeReport rep;
  rep.jackets = static_cast<int>(js.size());
  rep.from_jackets = 0;
  for (const auto& j : js) rep.from_jackets += j.genus;
  rep.faces = faces(b).total;
  mpz_class fact = 1;
  for (int i = 2; i <= D - 2; ++i) fact *= i;
  mpq_class bracket = mpq_class((D - 1) * (D - 2), 2) * b.k() + (D - 1) - rep.faces;
  rep.from_faces = mpq_class(fact) / 2 * bracket;
  rep.from_faces.canonicalize();
  if (rep.from_faces != rep.from_jackets)
    throw std::logic_error("degree mismatch: jackets give " + rep.from_jackets.get_str() + ", faces give " +
                           rep.from_faces.get_str());
  return rep;
}

mpq_class gurau_degree(const Bubble& b) { return gurau_degree_report(b).from_jackets; }

bool is_melonic(const Bubble& b) { return gurau_degree(b) == 0; }

cplx evaluate_invariant(const Bubble& b, const std::vector<cplx>& T, int N) {
  const int D = b.rank(), k = b.k();
  if (N < 1) throw std::invalid_argument("N must be positive");
  size_t size = 1;
  for (int c = 0; c < D; ++c) size *= static_cast<size_t>(N);
  if (T.size() != size)
    throw std::invalid_argument("tensor has " + std::to_string(T.size()) + " entries, expected N^D = " +
                                std::to_string(size));
  const int E = static_cast<int>(b.edges().size());
  // Odometer over edge indices; each vertex reads its D edge indices.
  std::vector<int> idx(E, 0);
  std::vector<std::vector<int>> vedges(2 * k);
  for (int v = 0; v < 2 * k; ++v)
    for (int c = 1; c <= D; ++c) vedges[v].push_back(b.edge_at(v, c));
  auto flat = [&](int v) {
    size_t f = 0;
    for (int c = 0; c < D; ++c) f = f * N + idx[vedges[v][c]];
    return f;
  };
  cplx total = 0;
  while (true) {
    cplx term = 1;
    for (int v = 0; v < 2 * k && term != cplx(0); ++v) {
      cplx t = T[flat(v)];
      term *= b.is_white(v) ? t : std::conj(t);
    }
    total += term;
    int p = 0;
    while (p < E && ++idx[p] == N) idx[p++] = 0;
    if (p == E) break;
  }
  return total;
}

Bubble dipole(int D) {
  std::vector<Edge> edges;
  for (int c = 1; c <= D; ++c) edges.push_back({0, 0, c});
  return Bubble::make(D, {"w"}, {"b"}, edges);
}

// Tr (M M^dagger)^k: white i is M, black i is M-bar; color 1 joins w_i-b_i, color 2 joins w_{i+1}-b_i.
Bubble matrix_cycle(int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  std::vector<std::string> ws, bs;
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i) {
    ws.push_back("w" + std::to_string(i + 1));
    bs.push_back("b" + std::to_string(i + 1));
  }
  for (int i = 0; i < k; ++i) {
    edges.push_back({i, i, 1});
    edges.push_back({(i + 1) % k, i, 2});
  }
  return Bubble::make(2, ws, bs, edges);
}

}  // namespace hif
