#include "laakso/serialize.hpp"

#include <stdexcept>

namespace laakso {

Json to_json(const Rational& value) { return to_string(value); }

Json to_json(const ExtRational& value) { return value.to_string(); }

Json to_json(const LaaksoPoint& point) {
  Json j;
  j["h"] = to_string(point.height);
  j["bits"] = point.address.to_string();
  return j;
}

Json to_json(const HeightInterval& interval) { return Json::array({to_string(interval.a), to_string(interval.b)}); }

LaaksoPoint point_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("h") || !j.contains("bits") || !j["h"].is_string() || !j["bits"].is_string())
    throw std::invalid_argument("point JSON must be {\"h\": \"p/q\", \"bits\": \"...\"}");
  return LaaksoPoint::make(parse_rational(j["h"].get<std::string>()), CantorAddress(j["bits"].get<std::string>()));
}

LaaksoPoint parse_point(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("point must look like h:bits, got '" + std::string(text) + "'");
  return LaaksoPoint::make(parse_rational(text.substr(0, colon)), CantorAddress(text.substr(colon + 1)));
}

std::string format_point(const LaaksoPoint& point) { return to_string(point.height) + ":" + point.address.to_string(); }

}  // namespace laakso
