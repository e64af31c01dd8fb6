#include "hif/corpus.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hif::corpus {

namespace {

const std::map<std::string, std::string>& table() {
  static const std::map<std::string, std::string> t = {
#include "corpus_data.inc"
  };
  return t;
}

}  // namespace

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [n, _] : table()) out.push_back(n);
  return out;
}

std::optional<std::string> text(const std::string& name) {
  auto it = table().find(name);
  if (it == table().end()) return std::nullopt;
  return it->second;
}

Model load_model(const std::string& ref) {
  Model m;
  m.id = ref;
  if (ref.rfind("matrix:", 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(ref.substr(7));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad matrix model '" + ref + "', expected matrix:k");
    }
    if (k < 1) throw std::invalid_argument("matrix model needs k >= 1");
    m.bubble = matrix_cycle(k);
    m.is_matrix = true;
    return m;
  }
  std::string name = ref;
  if (name.size() > 6 && name.substr(name.size() - 6) == ".graph") name = name.substr(0, name.size() - 6);
  if (auto t = text(name)) {
    m.bubble = parse_bubble(*t);
  } else {
    std::ifstream in(ref);
    if (!in) throw std::invalid_argument("no bundled model or readable file named '" + ref + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    m.bubble = parse_bubble(ss.str());
  }
  // a connected rank-2 bubble is a single bicolored cycle
  m.is_matrix = m.bubble.rank() == 2;
  return m;
}

}  // namespace hif::corpus
