// Streaming-API location matching and post-hoc region classification.
//
// The Streaming API decides membership with three rules: precise coordinates
// against the filter box, else the place box checked for any overlap, else no
// match (the deprecated geo field is ignored). Region classification is the
// post-hoc partition of a corpus into target / parent-only / elsewhere /
// no-location against actual polygon boundaries.
#pragma once

#include <array>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "geostream/geometry.hpp"
#include "geostream/ingest.hpp"
#include "geostream/report.hpp"
#include "geostream/tweet.hpp"

namespace geostream {

enum class RegionClass { InTarget = 0, InParentOnly = 1, Elsewhere = 2, NoLocation = 3 };

inline const char* to_string(RegionClass c) {
    switch (c) {
        case RegionClass::InTarget: return "in_target";
        case RegionClass::InParentOnly: return "in_parent_only";
        case RegionClass::Elsewhere: return "elsewhere";
        case RegionClass::NoLocation: return "no_location";
    }
    return "?";
}

// Rule 1: coordinates tested against the box. Rule 2: place box checked for
// any overlap. Rule 3: no match; geo is deprecated and ignored.
inline bool streaming_match(const Tweet& t, const BBox& filter_box) {
    if (t.coordinates) return point_in_bbox(*t.coordinates, filter_box);
    if (t.place) return bbox_intersects(t.place->bbox, filter_box);
    return false;
}

inline RegionClass classify_region(const Tweet& t, const Region& target, const Region& parent,
                                   EffectivePointPolicy policy) {
    auto p = effective_point(t, policy);
    if (!p) return RegionClass::NoLocation;
    if (point_in_region(*p, target)) return RegionClass::InTarget;
    if (point_in_region(*p, parent)) return RegionClass::InParentOnly;
    return RegionClass::Elsewhere;
}

struct PartitionReport {
    std::string target_name;
    std::string parent_name;
    std::array<std::uint64_t, 4> counts{};  // indexed by RegionClass

    std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
    std::uint64_t count(RegionClass c) const { return counts[static_cast<int>(c)]; }
    // Table-1 style percentages: one decimal place.
    std::string pct(RegionClass c) const { return format_pct(count(c), total(), 1); }
};

template <typename TweetRange>
PartitionReport partition_report(const TweetRange& corpus, const Region& target,
                                 const Region& parent, EffectivePointPolicy policy) {
    PartitionReport rep;
    rep.target_name = target.name;
    rep.parent_name = parent.name;
    for (const Tweet& t : corpus)
        rep.counts[static_cast<int>(classify_region(t, target, parent, policy))]++;
    return rep;
}

inline std::string partition_to_csv(const PartitionReport& r) {
    std::string out = "class,count,percent\n";
    for (int i = 0; i < 4; ++i) {
        RegionClass c = static_cast<RegionClass>(i);
        out += to_string(c);
        out += ',' + std::to_string(r.count(c)) + ',' + r.pct(c) + '\n';
    }
    out += "total," + std::to_string(r.total()) + ",\n";
    return out;
}

inline std::string partition_to_markdown(const PartitionReport& r) {
    std::string out;
    out += md_header({"", "Tweets", "Percentage to total Tweets"});
    out += md_row({"Tweets in " + r.target_name, std::to_string(r.count(RegionClass::InTarget)),
                   r.pct(RegionClass::InTarget)});
    out += md_row({"Tweets in " + r.parent_name + " (excluding " + r.target_name + ")",
                   std::to_string(r.count(RegionClass::InParentOnly)),
                   r.pct(RegionClass::InParentOnly)});
    out += md_row({"Other Regions", std::to_string(r.count(RegionClass::Elsewhere)),
                   r.pct(RegionClass::Elsewhere)});
    out += md_row({"No location", std::to_string(r.count(RegionClass::NoLocation)),
                   r.pct(RegionClass::NoLocation)});
    out += md_row({"Total Tweets", std::to_string(r.total()), ""});
    return out;
}

inline nlohmann::json partition_to_json(const PartitionReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        RegionClass c = static_cast<RegionClass>(i);
        nlohmann::json row{{"class", to_string(c)}, {"count", r.count(c)}};
        row["percent"] = r.total() == 0 ? nlohmann::json() : nlohmann::json(r.pct(c));
        rows.push_back(row);
    }
    return nlohmann::json{{"target", r.target_name},
                          {"parent", r.parent_name},
                          {"total", r.total()},
                          {"rows", rows}};
}

// ---------------------------------------------------------------------------
// GeoJSON region files: a Feature (or the first Feature of a collection) with
// Polygon/MultiPolygon geometry and a `name` property; `parent_name` optional.

inline Region region_from_geojson(const nlohmann::json& j) {
    const nlohmann::json* feature = &j;
    if (j.is_object() && j.value("type", "") == "FeatureCollection") {
        if (!j.contains("features") || !j["features"].is_array() || j["features"].empty())
            throw std::runtime_error("GeoJSON: empty FeatureCollection");
        feature = &j["features"][0];
    }
    if (!feature->is_object() || feature->value("type", "") != "Feature")
        throw std::runtime_error("GeoJSON: expected a Feature");
    const auto& props = feature->value("properties", nlohmann::json::object());
    if (!props.contains("name") || !props["name"].is_string())
        throw std::runtime_error("GeoJSON: feature has no name property");

    const auto& geom = (*feature)["geometry"];
    std::string gtype = geom.value("type", "");
    std::vector<Ring> rings;
    auto read_ring = [](const nlohmann::json& ring_json) {
        Ring ring;
        for (const auto& v : ring_json) ring.push_back({v[0].get<double>(), v[1].get<double>()});
        return ring;
    };
    if (gtype == "Polygon") {
        for (const auto& rj : geom["coordinates"]) rings.push_back(read_ring(rj));
    } else if (gtype == "MultiPolygon") {
        for (const auto& poly : geom["coordinates"])
            for (const auto& rj : poly) rings.push_back(read_ring(rj));
    } else {
        throw std::runtime_error("GeoJSON: geometry must be Polygon or MultiPolygon");
    }

    std::optional<std::string> parent;
    if (props.contains("parent_name") && props["parent_name"].is_string())
        parent = props["parent_name"].get<std::string>();
    return Region(props["name"].get<std::string>(), std::move(rings), std::move(parent));
}

inline Region load_region_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open region file " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("region file is not valid JSON: " + path);
    return region_from_geojson(j);
}

inline nlohmann::json region_to_geojson(const Region& r) {
    nlohmann::json rings = nlohmann::json::array();
    for (const Ring& ring : r.rings) {
        nlohmann::json rj = nlohmann::json::array();
        for (const GeoPoint& p : ring) rj.push_back({p.lon, p.lat});
        rings.push_back(rj);
    }
    nlohmann::json props{{"name", r.name}};
    if (r.parent_name) props["parent_name"] = *r.parent_name;
    return nlohmann::json{{"type", "Feature"},
                          {"properties", props},
                          {"geometry", {{"type", "Polygon"}, {"coordinates", rings}}}};
}

}  // namespace geostream
