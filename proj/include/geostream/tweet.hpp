// The parsed tweet record and the effective-location policy.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geostream/geometry.hpp"

namespace geostream {

struct PlaceBox {
    std::string full_name;
    BBox bbox;

    bool operator==(const PlaceBox&) const = default;
};

// One message record. Coordinates are always stored in (lon, lat) order;
// values read from the deprecated "geo" field are swapped at parse time and
// kept in `geo_deprecated`.
struct Tweet {
    std::int64_t id = 0;
    std::int64_t user_id = 0;
    std::int64_t created_at = 0;  // seconds since Unix epoch, UTC
    std::string text;
    std::vector<std::string> hashtags;  // case-preserved, no '#'
    std::string source_raw;             // plain name or HTML anchor element
    std::optional<GeoPoint> coordinates;
    std::optional<GeoPoint> geo_deprecated;
    std::optional<PlaceBox> place;
    std::uint32_t urls_count = 0;

    bool operator==(const Tweet&) const = default;

    bool has_location() const { return coordinates || geo_deprecated || place; }
};

enum class EffectivePointPolicy {
    CoordinatesOnly,     // mirrors the Streaming API: deprecated geo ignored
    CoordinatesThenGeo,  // archival corpora: fall back to the deprecated field
};

inline std::optional<GeoPoint> effective_point(const Tweet& t, EffectivePointPolicy policy) {
    if (t.coordinates) return t.coordinates;
    if (policy == EffectivePointPolicy::CoordinatesThenGeo && t.geo_deprecated)
        return t.geo_deprecated;
    return std::nullopt;
}

inline const char* to_string(EffectivePointPolicy p) {
    return p == EffectivePointPolicy::CoordinatesOnly ? "coordinates-only" : "coordinates-then-geo";
}

inline std::optional<EffectivePointPolicy> policy_from_string(const std::string& s) {
    if (s == "coordinates-only") return EffectivePointPolicy::CoordinatesOnly;
    if (s == "coordinates-then-geo") return EffectivePointPolicy::CoordinatesThenGeo;
    return std::nullopt;
}

}  // namespace geostream
