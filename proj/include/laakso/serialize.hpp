#pragma once

// JSON forms shared by every module and the CLI. Rationals travel as
// decimal-free "p/q" strings; points as {"h": "p/q", "bits": "0110"}.

#include <string>
#include <string_view>

#include <json.hpp>

#include "laakso/core.hpp"

namespace laakso {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& value);
Json to_json(const ExtRational& value);
Json to_json(const LaaksoPoint& point);
Json to_json(const HeightInterval& interval);

/// Throws std::invalid_argument on malformed input.
LaaksoPoint point_from_json(const Json& j);

/// CLI point syntax "h:bits", e.g. "1/2:01" or "1/3:" for the empty address.
LaaksoPoint parse_point(std::string_view text);
std::string format_point(const LaaksoPoint& point);

}  // namespace laakso
