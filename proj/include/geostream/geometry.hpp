// Planar lon/lat geometry: points, axis-aligned boxes, polygonal regions.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace geostream {

struct GeoPoint {
    double lon = 0.0;  // decimal degrees, [-180, 180]
    double lat = 0.0;  // decimal degrees, [-90, 90]

    bool operator==(const GeoPoint&) const = default;
};

inline bool valid_lon(double lon) { return lon >= -180.0 && lon <= 180.0; }
inline bool valid_lat(double lat) { return lat >= -90.0 && lat <= 90.0; }
inline bool valid_point(const GeoPoint& p) { return valid_lon(p.lon) && valid_lat(p.lat); }

// Axis-aligned lon/lat rectangle. Antimeridian-crossing boxes (west > east)
// are rejected at construction; both study areas are continental U.S.
struct BBox {
    double west = 0.0;
    double south = 0.0;
    double east = 0.0;
    double north = 0.0;

    BBox() = default;
    BBox(double w, double s, double e, double n) : west(w), south(s), east(e), north(n) {
        if (!(valid_lon(w) && valid_lon(e) && valid_lat(s) && valid_lat(n)))
            throw std::invalid_argument("BBox: coordinates out of lon/lat range");
        if (w > e)
            throw std::invalid_argument("BBox: west > east (antimeridian boxes unsupported)");
        if (s > n)
            throw std::invalid_argument("BBox: south > north");
    }

    bool operator==(const BBox&) const = default;
};

// Boundary-inclusive containment.
inline bool point_in_bbox(const GeoPoint& p, const BBox& b) {
    return b.west <= p.lon && p.lon <= b.east && b.south <= p.lat && p.lat <= b.north;
}

// True iff the rectangles share at least one point; edge/corner touch counts.
inline bool bbox_intersects(const BBox& a, const BBox& b) {
    return a.west <= b.east && b.west <= a.east && a.south <= b.north && b.south <= a.north;
}

using Ring = std::vector<GeoPoint>;  // closed: front() == back(), size >= 4

// Polygonal region with even-odd fill rule; rings may describe holes.
struct Region {
    std::string name;
    std::vector<Ring> rings;
    BBox bbox;  // hull over all ring vertices
    std::optional<std::string> parent_name;

    Region() = default;
    Region(std::string region_name, std::vector<Ring> region_rings,
           std::optional<std::string> parent = std::nullopt)
        : name(std::move(region_name)), rings(std::move(region_rings)), parent_name(std::move(parent)) {
        if (rings.empty()) throw std::invalid_argument("Region: no rings");
        double w = 180.0, e = -180.0, s = 90.0, n = -90.0;
        for (const Ring& ring : rings) {
            if (ring.size() < 4) throw std::invalid_argument("Region: ring with fewer than 4 points");
            if (!(ring.front() == ring.back()))
                throw std::invalid_argument("Region: ring not closed (first point must equal last)");
            for (const GeoPoint& p : ring) {
                if (!valid_point(p)) throw std::invalid_argument("Region: vertex out of range");
                w = std::min(w, p.lon);
                e = std::max(e, p.lon);
                s = std::min(s, p.lat);
                n = std::max(n, p.lat);
            }
        }
        bbox = BBox(w, s, e, n);
    }
};

namespace detail {

// Exact test for p lying on the closed segment [a, b].
inline bool on_segment(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
    double cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
    if (cross != 0.0) return false;
    return std::min(a.lon, b.lon) <= p.lon && p.lon <= std::max(a.lon, b.lon) &&
           std::min(a.lat, b.lat) <= p.lat && p.lat <= std::max(a.lat, b.lat);
}

}  // namespace detail

// Even-odd ray casting over all rings; points on an edge or vertex count as
// inside.
inline bool point_in_region(const GeoPoint& p, const Region& r) {
    if (!point_in_bbox(p, r.bbox)) return false;
    bool inside = false;
    for (const Ring& ring : r.rings) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            const GeoPoint& a = ring[i];
            const GeoPoint& b = ring[i + 1];
            if (detail::on_segment(p, a, b)) return true;
            // Half-open rule on the vertical span avoids double-counting
            // shared vertices.
            if ((a.lat > p.lat) != (b.lat > p.lat)) {
                double x_cross = a.lon + (p.lat - a.lat) / (b.lat - a.lat) * (b.lon - a.lon);
                if (x_cross > p.lon) inside = !inside;
            }
        }
    }
    return inside;
}

}  // namespace geostream
