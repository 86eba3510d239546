#pragma once

#include <optional>
#include <string>

#include "heq/wp.hpp"

namespace heq {

// `point: x == y` lines followed by `ir:`, `iterations:` and `reaching iterations:`
std::string render_text(const Report& r, const std::optional<std::string>& point = std::nullopt);
// {"points": [{"point", "constants", "pairs"}], "stats": {...}}
std::string render_json(const Report& r, const std::optional<std::string>& point = std::nullopt);
// inverse of render_json for the point records and stats; throws std::invalid_argument
Report report_from_json(const std::string& text);

}  // namespace heq
