#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hif/bubble_core.hpp"

namespace hif::corpus {

// Names of the bundled graphs ("b1", "k33", "matrix3", ...).
std::vector<std::string> names();
std::optional<std::string> text(const std::string& name);

struct Model {
  std::string id;
  Bubble bubble;
  bool is_matrix = false;  // rank-2 cycle of Tr(M M^dagger)^k
};

// "matrix:k", a bundled name (with or without .graph), or a path to a graph file.
Model load_model(const std::string& ref);

}  // namespace hif::corpus
