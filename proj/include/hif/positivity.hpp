#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hif/bubble_core.hpp"

namespace hif {

struct SymmetricCut {
  std::vector<int> cut_edges;   // sorted edge ids
  std::vector<int> side_F;      // sorted global vertex ids, contains the smallest vertex id
  std::vector<int> side_Fbar;
  std::vector<int> mirror;      // mirror[v] for every vertex (an involution)

  // Refined label "c_v" of a cut edge: color plus its endpoint in F.
  std::string refined_label(const Bubble& b, int edge) const;
  bool in_F(int v) const;
};

struct CutSearch {
  std::vector<SymmetricCut> cuts;
  // Bipartitions admitting a color-preserving anti-isomorphism whose cut edges
  // are permuted rather than joining companions. Reported, never counted as positive.
  std::vector<SymmetricCut> crossing_only;
};

inline constexpr int kDefaultVertexCap = 16;

struct TooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CutSearch search_cuts(const Bubble& b, int vertex_cap = kDefaultVertexCap);
std::vector<SymmetricCut> find_symmetric_cuts(const Bubble& b, int vertex_cap = kDefaultVertexCap);

struct PositivityResult {
  bool positive = false;
  std::optional<SymmetricCut> witness;
};

PositivityResult is_positive(const Bubble& b, int vertex_cap = kDefaultVertexCap);

// Re-checks the three cut invariants; returns an empty string when valid.
std::string check_cut(const Bubble& b, const SymmetricCut& cut);

// Build a cut from an explicit F side, or throw if it is not symmetric.
SymmetricCut cut_from_side(const Bubble& b, const std::vector<int>& side_F);

}  // namespace hif
