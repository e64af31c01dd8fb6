#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "hif/bubble_core.hpp"

inline std::string corpus_text(const std::string& name) {
  std::ifstream in(std::string(HIF_CORPUS_DIR) + "/" + name + ".graph");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline hif::Bubble load(const std::string& name) { return hif::parse_bubble(corpus_text(name)); }
