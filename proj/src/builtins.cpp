#include "hvertex/builtins.hpp"

#include <stdexcept>

#include "builtin_sources.inc"
#include "hvertex/parser.hpp"

namespace hvertex {

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (auto& s : kBuiltinSources) n.emplace_back(s.name);
    return n;
  }();
  return names;
}

std::optional<std::string_view> builtin_source(std::string_view name) {
  if (name.size() > 4 && name.substr(name.size() - 4) == ".lca") name.remove_suffix(4);
  for (auto& s : kBuiltinSources)
    if (s.name == name) return s.text;
  return std::nullopt;
}

LCAlgebra load_algebra_text(std::string_view text, LoadOptions opts) {
  return LCAlgebra::load(parse::to_definition(parse::parse_algebra(text)), opts);
}

LCAlgebra load_builtin(std::string_view name, LoadOptions opts) {
  auto src = builtin_source(name);
  if (!src) throw std::invalid_argument("unknown built-in algebra '" + std::string(name) + "'");
  return load_algebra_text(*src, opts);
}

}  // namespace hvertex
