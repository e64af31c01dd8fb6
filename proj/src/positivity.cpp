#include "hif/positivity.hpp"

#include <algorithm>
#include <functional>

namespace hif {

std::string SymmetricCut::refined_label(const Bubble& b, int edge) const {
  int w = b.white_end(edge), bl = b.black_end(edge);
  int v = in_F(w) ? w : bl;
  return std::to_string(b.edges()[edge].color) + "_" + b.name(v);
}

bool SymmetricCut::in_F(int v) const { return std::binary_search(side_F.begin(), side_F.end(), v); }

namespace {

bool connected(const Bubble& b, const std::vector<char>& member) {
  int start = -1, total = 0;
  for (int v = 0; v < b.num_vertices(); ++v)
    if (member[v]) {
      ++total;
      if (start < 0) start = v;
    }
  if (start < 0) return false;
  std::vector<char> seen(b.num_vertices(), 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int c = 1; c <= b.rank(); ++c) {
      int u = b.neighbor(v, c);
      if (member[u] && !seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == total;
}

// Propagate a color-preserving, color-flipping map F -> Fbar from one seed pair.
// Returns false if the propagation is inconsistent or not a bijection onto Fbar.
bool propagate(const Bubble& b, const std::vector<char>& inF, int seed, int image, std::vector<int>& mir) {
  const int n = b.num_vertices();
  mir.assign(n, -1);
  std::vector<int> inv(n, -1);
  if (b.is_white(seed) == b.is_white(image) || inF[image]) return false;
  mir[seed] = image;
  inv[image] = seed;
  std::vector<int> stack{seed};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int c = 1; c <= b.rank(); ++c) {
      int u = b.neighbor(v, c);
      if (!inF[u]) continue;
      int img = b.neighbor(mir[v], c);
      if (inF[img]) return false;
      if (mir[u] == -1) {
        if (inv[img] != -1) return false;
        mir[u] = img;
        inv[img] = u;
        stack.push_back(u);
      } else if (mir[u] != img) {
        return false;
      }
    }
  }
  for (int v = 0; v < n; ++v)
    if (inF[v] && mir[v] == -1) return false;
  // Internal edges of Fbar must all be images of internal edges of F.
  for (int w = 0; w < n; ++w) {
    if (inF[w]) continue;
    for (int c = 1; c <= b.rank(); ++c) {
      int u = b.neighbor(w, c);
      if (inF[u]) continue;
      if (b.neighbor(inv[w], c) != inv[u]) return false;
    }
  }
  for (int v = 0; v < n; ++v)
    if (inF[v]) mir[mir[v]] = v;
  return true;
}

bool strict_noncrossing(const Bubble& b, const std::vector<char>& inF, const std::vector<int>& mir) {
  for (int v = 0; v < b.num_vertices(); ++v) {
    if (!inF[v]) continue;
    for (int c = 1; c <= b.rank(); ++c) {
      int u = b.neighbor(v, c);
      if (!inF[u] && u != mir[v]) return false;
    }
  }
  return true;
}

// Boundary permutation reading: cut edges are mapped to cut edges of the same color.
bool boundary_symmetric(const Bubble& b, const std::vector<char>& inF, const std::vector<int>& mir) {
  for (int v = 0; v < b.num_vertices(); ++v) {
    if (!inF[v]) continue;
    for (int c = 1; c <= b.rank(); ++c) {
      int u = b.neighbor(v, c);
      if (inF[u]) continue;
      // edge v-u of color c; its mirror partner is mir[u]-mir[v]
      if (b.neighbor(mir[u], c) != mir[v]) return false;
    }
  }
  return true;
}

SymmetricCut assemble_cut(const Bubble& b, const std::vector<char>& inF, const std::vector<int>& mir) {
  SymmetricCut cut;
  for (int v = 0; v < b.num_vertices(); ++v) (inF[v] ? cut.side_F : cut.side_Fbar).push_back(v);
  for (int e = 0; e < static_cast<int>(b.edges().size()); ++e)
    if (inF[b.white_end(e)] != inF[b.black_end(e)]) cut.cut_edges.push_back(e);
  cut.mirror = mir;
  return cut;
}

bool cut_less(const SymmetricCut& a, const SymmetricCut& c) {
  if (a.cut_edges.size() != c.cut_edges.size()) return a.cut_edges.size() < c.cut_edges.size();
  if (a.cut_edges != c.cut_edges) return a.cut_edges < c.cut_edges;
  return a.side_F < c.side_F;
}

}  // namespace

CutSearch search_cuts(const Bubble& b, int vertex_cap) {
  const int n = b.num_vertices(), k = b.k();
  if (n > vertex_cap)
    throw TooLargeError("bubble has " + std::to_string(n) + " vertices, above the enumeration cap " +
                        std::to_string(vertex_cap));
  CutSearch out;
  std::vector<char> inF(n, 0);
  // F always contains vertex 0, so each unordered bipartition is seen once.
  std::vector<int> chosen{0};
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(chosen.size()) == k) {
      std::fill(inF.begin(), inF.end(), 0);
      for (int v : chosen) inF[v] = 1;
      std::vector<char> inFbar(n);
      for (int v = 0; v < n; ++v) inFbar[v] = !inF[v];
      if (!connected(b, inF) || !connected(b, inFbar)) return;
      std::vector<int> mir;
      // Strict reading: the mirror of a boundary vertex is its cut-edge neighbour.
      int boundary = -1;
      for (int v : chosen) {
        for (int c = 1; c <= b.rank() && boundary < 0; ++c)
          if (!inF[b.neighbor(v, c)]) boundary = v;
        if (boundary >= 0) break;
      }
      bool strict_found = false;
      for (int c = 1; c <= b.rank() && !strict_found; ++c) {
        int u = b.neighbor(boundary, c);
        if (inF[u]) continue;
        if (propagate(b, inF, boundary, u, mir) && strict_noncrossing(b, inF, mir)) {
          out.cuts.push_back(assemble_cut(b, inF, mir));
          strict_found = true;
        }
      }
      if (strict_found) return;
      for (int img = 0; img < n; ++img) {
        if (inF[img]) continue;
        if (propagate(b, inF, chosen[0], img, mir) && boundary_symmetric(b, inF, mir)) {
          out.crossing_only.push_back(assemble_cut(b, inF, mir));
          break;
        }
      }
      return;
    }
    for (int v = next; v < n; ++v) {
      if (n - v < k - static_cast<int>(chosen.size())) break;
      chosen.push_back(v);
      rec(v + 1);
      chosen.pop_back();
    }
  };
  rec(1);
  std::sort(out.cuts.begin(), out.cuts.end(), cut_less);
  std::sort(out.crossing_only.begin(), out.crossing_only.end(), cut_less);
  return out;
}

std::vector<SymmetricCut> find_symmetric_cuts(const Bubble& b, int vertex_cap) {
  return search_cuts(b, vertex_cap).cuts;
}

PositivityResult is_positive(const Bubble& b, int vertex_cap) {
  auto cuts = find_symmetric_cuts(b, vertex_cap);
  PositivityResult r;
  r.positive = !cuts.empty();
  if (r.positive) r.witness = cuts.front();
  return r;
}

std::string check_cut(const Bubble& b, const SymmetricCut& cut) {
  const int n = b.num_vertices();
  std::vector<char> inF(n, 0);
  for (int v : cut.side_F) inF[v] = 1;
  if (static_cast<int>(cut.side_F.size() + cut.side_Fbar.size()) != n) return "sides do not partition the vertices";
  for (int v : cut.side_Fbar)
    if (inF[v]) return "vertex on both sides";
  std::vector<char> inFbar(n);
  for (int v = 0; v < n; ++v) inFbar[v] = !inF[v];
  if (!connected(b, inF) || !connected(b, inFbar)) return "removing the cut does not leave two connected sides";
  std::vector<int> expect;
  for (int e = 0; e < static_cast<int>(b.edges().size()); ++e)
    if (inF[b.white_end(e)] != inF[b.black_end(e)]) expect.push_back(e);
  if (expect != cut.cut_edges) return "cut edge set does not match the sides";
  if (static_cast<int>(cut.mirror.size()) != n) return "mirror has wrong size";
  for (int v = 0; v < n; ++v) {
    int m = cut.mirror[v];
    if (m < 0 || m >= n || cut.mirror[m] != v) return "mirror is not an involution";
    if (inF[v] == inF[m]) return "mirror does not swap sides";
    if (b.is_white(v) == b.is_white(m)) return "mirror does not flip vertex color";
  }
  for (int v = 0; v < n; ++v) {
    if (!inF[v]) continue;
    for (int c = 1; c <= b.rank(); ++c) {
      int u = b.neighbor(v, c);
      if (inF[u]) {
        if (b.neighbor(cut.mirror[v], c) != cut.mirror[u]) return "mirror does not map internal edges";
      } else if (u != cut.mirror[v]) {
        return "crossing: cut edge does not join a vertex to its mirror";
      }
    }
  }
  return {};
}

SymmetricCut cut_from_side(const Bubble& b, const std::vector<int>& side_F) {
  const int n = b.num_vertices();
  std::vector<char> inF(n, 0);
  for (int v : side_F) {
    if (v < 0 || v >= n) throw std::invalid_argument("vertex id out of range");
    inF[v] = 1;
  }
  if (!inF[0]) {
    for (auto& x : inF) x = !x;  // normalise so that F holds vertex 0
  }
  std::vector<int> mir;
  for (int v = 0; v < n; ++v) {
    if (!inF[v]) continue;
    for (int c = 1; c <= b.rank(); ++c) {
      int u = b.neighbor(v, c);
      if (inF[u]) continue;
      if (propagate(b, inF, v, u, mir) && strict_noncrossing(b, inF, mir)) {
        SymmetricCut cut = assemble_cut(b, inF, mir);
        if (auto err = check_cut(b, cut); !err.empty()) throw std::invalid_argument("cut not symmetric: " + err);
        return cut;
      }
      throw std::invalid_argument("cut not symmetric: no mirror joins boundary vertices to their companions");
    }
  }
  throw std::invalid_argument("cut not symmetric: empty cut");
}

}  // namespace hif
