#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hif {

using cplx = std::complex<double>;

struct ParseError : std::runtime_error {
  int line;
  ParseError(const std::string& msg, int line_no)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  int white;  // index into white vertices
  int black;  // index into black vertices
  int color;  // 1..D
};

// Vertices carry a global id: whites are 0..k-1, blacks are k..2k-1.
class Bubble {
 public:
  static Bubble make(int D, std::vector<std::string> whites, std::vector<std::string> blacks,
                     std::vector<Edge> edges);

  int rank() const { return D_; }
  int k() const { return static_cast<int>(white_names_.size()); }
  int num_vertices() const { return 2 * k(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& white_names() const { return white_names_; }
  const std::vector<std::string>& black_names() const { return black_names_; }

  bool is_white(int v) const { return v < k(); }
  int white_id(int w) const { return w; }
  int black_id(int b) const { return k() + b; }
  const std::string& name(int v) const;
  int find_vertex(const std::string& name) const;  // -1 if absent

  // Edge id of color c (1..D) at global vertex v.
  int edge_at(int v, int c) const { return inc_[v][c - 1]; }
  // Neighbour of v across its color-c edge.
  int neighbor(int v, int c) const;
  // Endpoint of edge e opposite to v.
  int other_end(int e, int v) const;
  int white_end(int e) const { return edges_[e].white; }
  int black_end(int e) const { return k() + edges_[e].black; }

  std::string to_text() const;

 private:
  int D_ = 0;
  std::vector<std::string> white_names_, black_names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> inc_;
};

Bubble parse_bubble(const std::string& text);

struct Face {
  int ci = 0, cj = 0;             // i < j
  std::vector<int> vertices;      // global ids, cyclic order
  std::vector<int> edges;         // edge ids, alternating ci / cj
};

struct FaceReport {
  std::vector<Face> faces;
  int total = 0;
};

FaceReport faces(const Bubble& b);

struct Jacket {
  std::vector<int> cycle;  // canonical cyclic order of colors, starts at 1
  std::vector<int> face_ids;
  int genus = 0;
};

std::vector<Jacket> jackets(const Bubble& b);

struct DegreeReport {
  mpq_class from_jackets;
  mpq_class from_faces;
  int faces = 0;
  int jackets = 0;
};

// Throws std::logic_error if the two computations disagree.
DegreeReport gurau_degree_report(const Bubble& b);
mpq_class gurau_degree(const Bubble& b);
bool is_melonic(const Bubble& b);

// T is stored row-major, index (n_1, ..., n_D) with n_1 slowest.
cplx evaluate_invariant(const Bubble& b, const std::vector<cplx>& T, int N);

// Common small bubbles.
Bubble dipole(int D);
Bubble matrix_cycle(int k);

}  // namespace hif
