#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hvertex/lca.hpp"

namespace hvertex {

// Names of the shipped algebra files (without extension).
const std::vector<std::string>& builtin_names();
// Source of a shipped file; accepts "name" and "name.lca".
std::optional<std::string_view> builtin_source(std::string_view name);

// Parses and loads definition text.
LCAlgebra load_algebra_text(std::string_view text, LoadOptions opts = {});
// Throws std::invalid_argument for unknown names.
LCAlgebra load_builtin(std::string_view name, LoadOptions opts = {});

}  // namespace hvertex
