// NDJSON tweet parsing, canonical serialization, and corpus reading.
//
// Input is newline-delimited JSON, one tweet per line, optionally
// gzip-compressed. Parsing is pure per line and parallelizes in fixed-size
// blocks; output order and dedup results are byte-identical regardless of
// worker count.
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "geostream/tweet.hpp"

namespace geostream {

struct IngestStats {
    std::uint64_t total_lines = 0;
    std::uint64_t parsed = 0;
    std::uint64_t malformed = 0;
    std::uint64_t duplicates_dropped = 0;
    std::uint64_t no_location = 0;

    bool operator==(const IngestStats&) const = default;
};

class IngestError : public std::runtime_error {
  public:
    IngestError(const std::string& what, IngestStats partial)
        : std::runtime_error(what), partial_stats(partial) {}
    IngestStats partial_stats;
};

// ---------------------------------------------------------------------------
// Timestamps: ISO 8601 UTC at second precision, "2015-11-01T00:00:00Z".

namespace detail {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace detail

inline std::optional<std::int64_t> parse_timestamp(std::string_view s) {
    int y, mo, d, h, mi, se;
    if (s.size() != 20) return std::nullopt;
    if (std::sscanf(s.data(), "%4d-%2d-%2dT%2d:%2d:%2d", &y, &mo, &d, &h, &mi, &se) != 6)
        return std::nullopt;
    if (s[19] != 'Z') return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60) return std::nullopt;
    return detail::days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

inline std::string format_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y, m, d;
    detail::civil_from_days(days, y, m, d);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::optional<GeoPoint> read_geojson_point(const nlohmann::json& j, bool lat_lon_order,
                                                  std::string& err) {
    if (!j.is_object() || !j.contains("coordinates")) {
        err = "point object without coordinates";
        return std::nullopt;
    }
    const auto& c = j["coordinates"];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
        err = "coordinates is not a numeric pair";
        return std::nullopt;
    }
    GeoPoint p;
    if (lat_lon_order) {
        p.lat = c[0].get<double>();
        p.lon = c[1].get<double>();
    } else {
        p.lon = c[0].get<double>();
        p.lat = c[1].get<double>();
    }
    if (!valid_point(p)) {
        err = "coordinates out of lon/lat range";
        return std::nullopt;
    }
    return p;
}

inline void extract_text_hashtags(const std::string& text, std::vector<std::string>& out) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '#') continue;
        std::size_t j = i + 1;
        while (j < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
            ++j;
        if (j > i + 1) out.emplace_back(text.substr(i + 1, j - i - 1));
        i = j - 1;
    }
}

inline std::uint32_t count_text_urls(const std::string& text) {
    std::uint32_t n = 0;
    for (std::size_t pos = 0; (pos = text.find("http", pos)) != std::string::npos; ++pos) {
        std::string_view rest(text.c_str() + pos, text.size() - pos);
        if (rest.starts_with("http://") || rest.starts_with("https://")) ++n;
    }
    return n;
}

}  // namespace detail

// Parses one NDJSON line. Returns nullopt on malformed input and, when
// `error` is non-null, a short reason.
inline std::optional<Tweet> parse_tweet(std::string_view line, std::string* error = nullptr) {
    auto fail = [&](const char* why) -> std::optional<Tweet> {
        if (error) *error = why;
        return std::nullopt;
    };

    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) return fail("malformed JSON");

    Tweet t;
    if (!j.contains("id") || !j["id"].is_number_integer()) return fail("missing id");
    t.id = j["id"].get<std::int64_t>();

    if (!j.contains("user") || !j["user"].is_object() || !j["user"].contains("id") ||
        !j["user"]["id"].is_number_integer())
        return fail("missing user object");
    t.user_id = j["user"]["id"].get<std::int64_t>();

    if (j.contains("created_at") && !j["created_at"].is_null()) {
        if (!j["created_at"].is_string()) return fail("invalid created_at");
        auto ts = parse_timestamp(j["created_at"].get_ref<const std::string&>());
        if (!ts) return fail("invalid created_at");
        t.created_at = *ts;
    }

    if (j.contains("text") && j["text"].is_string()) t.text = j["text"].get<std::string>();
    if (j.contains("source") && j["source"].is_string())
        t.source_raw = j["source"].get<std::string>();

    std::string err;
    if (j.contains("coordinates") && !j["coordinates"].is_null()) {
        auto p = detail::read_geojson_point(j["coordinates"], /*lat_lon_order=*/false, err);
        if (!p) return fail(err.c_str());
        t.coordinates = p;
    }
    if (j.contains("geo") && !j["geo"].is_null()) {
        // The deprecated field stores (lat, lon); normalize on read.
        auto p = detail::read_geojson_point(j["geo"], /*lat_lon_order=*/true, err);
        if (!p) return fail(err.c_str());
        t.geo_deprecated = p;
    }
    if (j.contains("place") && !j["place"].is_null()) {
        const auto& pl = j["place"];
        if (!pl.is_object() || !pl.contains("bounding_box") || !pl["bounding_box"].is_object())
            return fail("place without bounding_box");
        const auto& bb = pl["bounding_box"];
        if (!bb.contains("coordinates") || !bb["coordinates"].is_array() ||
            bb["coordinates"].empty())
            return fail("place bounding_box without coordinates");
        double w = 180.0, e = -180.0, s = 90.0, n = -90.0;
        for (const auto& ring : bb["coordinates"]) {
            if (!ring.is_array()) return fail("place bounding_box ring malformed");
            for (const auto& v : ring) {
                if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                    return fail("place bounding_box vertex malformed");
                double lon = v[0].get<double>(), lat = v[1].get<double>();
                if (!valid_lon(lon) || !valid_lat(lat))
                    return fail("place bounding_box out of range");
                w = std::min(w, lon);
                e = std::max(e, lon);
                s = std::min(s, lat);
                n = std::max(n, lat);
            }
        }
        if (w > e || s > n) return fail("place bounding_box empty");
        PlaceBox place;
        place.full_name = pl.contains("full_name") && pl["full_name"].is_string()
                              ? pl["full_name"].get<std::string>()
                              : "";
        place.bbox = BBox(w, s, e, n);
        t.place = place;
    }

    bool have_entity_hashtags = false, have_entity_urls = false;
    if (j.contains("entities") && j["entities"].is_object()) {
        const auto& en = j["entities"];
        if (en.contains("hashtags") && en["hashtags"].is_array()) {
            have_entity_hashtags = true;
            for (const auto& h : en["hashtags"])
                if (h.is_object() && h.contains("text") && h["text"].is_string())
                    t.hashtags.push_back(h["text"].get<std::string>());
        }
        if (en.contains("urls") && en["urls"].is_array()) {
            have_entity_urls = true;
            t.urls_count = static_cast<std::uint32_t>(en["urls"].size());
        }
    }
    if (!have_entity_hashtags) detail::extract_text_hashtags(t.text, t.hashtags);
    if (!have_entity_urls) t.urls_count = detail::count_text_urls(t.text);

    return t;
}

// ---------------------------------------------------------------------------
// Canonical serialization. Fixed key order, shortest round-trip doubles;
// serializing and re-parsing yields an equal Tweet, byte for byte stable.

namespace detail {

inline void append_json_escaped(std::string& out, std::string_view s) {
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
}

inline void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

inline void append_point(std::string& out, const GeoPoint& p, bool lat_lon_order) {
    out += "{\"type\":\"Point\",\"coordinates\":[";
    append_double(out, lat_lon_order ? p.lat : p.lon);
    out += ',';
    append_double(out, lat_lon_order ? p.lon : p.lat);
    out += "]}";
}

}  // namespace detail

inline std::string serialize_tweet(const Tweet& t) {
    std::string out;
    out.reserve(256);
    out += "{\"id\":";
    out += std::to_string(t.id);
    out += ",\"user\":{\"id\":";
    out += std::to_string(t.user_id);
    out += "},\"created_at\":\"";
    out += format_timestamp(t.created_at);
    out += "\",\"text\":\"";
    detail::append_json_escaped(out, t.text);
    out += "\",\"source\":\"";
    detail::append_json_escaped(out, t.source_raw);
    out += "\",\"coordinates\":";
    if (t.coordinates)
        detail::append_point(out, *t.coordinates, false);
    else
        out += "null";
    out += ",\"geo\":";
    if (t.geo_deprecated)
        detail::append_point(out, *t.geo_deprecated, true);  // back to (lat, lon)
    else
        out += "null";
    out += ",\"place\":";
    if (t.place) {
        out += "{\"full_name\":\"";
        detail::append_json_escaped(out, t.place->full_name);
        out += "\",\"bounding_box\":{\"type\":\"Polygon\",\"coordinates\":[[";
        const BBox& b = t.place->bbox;
        const double ring[4][2] = {{b.west, b.south}, {b.east, b.south}, {b.east, b.north},
                                   {b.west, b.north}};
        for (int i = 0; i < 4; ++i) {
            if (i) out += ',';
            out += '[';
            detail::append_double(out, ring[i][0]);
            out += ',';
            detail::append_double(out, ring[i][1]);
            out += ']';
        }
        out += "]]}}";
    } else {
        out += "null";
    }
    out += ",\"entities\":{\"hashtags\":[";
    for (std::size_t i = 0; i < t.hashtags.size(); ++i) {
        if (i) out += ',';
        out += "{\"text\":\"";
        detail::append_json_escaped(out, t.hashtags[i]);
        out += "\"}";
    }
    out += "],\"urls\":[";
    for (std::uint32_t i = 0; i < t.urls_count; ++i) {
        if (i) out += ',';
        out += "{}";
    }
    out += "]}}";
    return out;
}

// ---------------------------------------------------------------------------
// Corpus reading

namespace detail {

// Line source over a plain or gzip-compressed file. zlib's gzread handles
// both transparently.
class LineReader {
  public:
    explicit LineReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
        if (!file_) throw IngestError("cannot open " + path, {});
    }
    ~LineReader() {
        if (file_) gzclose(file_);
    }
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    // Returns false at clean EOF; throws on read error.
    bool next(std::string& line) {
        line.clear();
        while (true) {
            if (pos_ == len_) {
                len_ = gzread(file_, buf_, sizeof(buf_));
                pos_ = 0;
                if (len_ < 0) {
                    int errnum = 0;
                    const char* msg = gzerror(file_, &errnum);
                    throw IngestError(std::string("read error: ") + (msg ? msg : ""), {});
                }
                if (len_ == 0) return !line.empty();
            }
            char* nl = static_cast<char*>(memchr(buf_ + pos_, '\n', static_cast<size_t>(len_ - pos_)));
            if (nl) {
                line.append(buf_ + pos_, nl);
                pos_ = static_cast<int>(nl - buf_) + 1;
                return true;
            }
            line.append(buf_ + pos_, buf_ + len_);
            pos_ = len_;
        }
    }

  private:
    gzFile file_ = nullptr;
    char buf_[1 << 16];
    int pos_ = 0;
    int len_ = 0;
};

inline unsigned resolve_threads(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    if (const char* env = std::getenv("GEOSTREAM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return 1;
}

}  // namespace detail

struct Corpus {
    std::vector<Tweet> tweets;
    IngestStats stats;
};

// Parses a block of lines with `threads` workers; per-line results keep input
// order, so downstream dedup is independent of the worker count.
inline void parse_block(const std::vector<std::string>& lines, unsigned threads,
                        std::vector<std::optional<Tweet>>& out) {
    out.assign(lines.size(), std::nullopt);
    if (threads <= 1 || lines.size() < 128) {
        for (std::size_t i = 0; i < lines.size(); ++i) out[i] = parse_tweet(lines[i]);
        return;
    }
    std::vector<std::thread> workers;
    std::size_t chunk = (lines.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(lines.size(), lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) out[i] = parse_tweet(lines[i]);
        });
    }
    for (auto& t : workers) t.join();
}

// Reads a newline-delimited corpus, deduplicating by tweet id (first
// occurrence wins, in stream order).
inline Corpus read_corpus(const std::string& path, int threads = 1) {
    detail::LineReader reader(path);
    unsigned nthreads = detail::resolve_threads(threads);

    Corpus corpus;
    std::unordered_set<std::int64_t> seen;
    std::vector<std::string> block;
    std::vector<std::optional<Tweet>> parsed;
    constexpr std::size_t kBlockLines = 65536;

    auto flush = [&] {
        parse_block(block, nthreads, parsed);
        for (auto& maybe : parsed) {
            corpus.stats.total_lines++;
            if (!maybe) {
                corpus.stats.malformed++;
                continue;
            }
            corpus.stats.parsed++;
            if (!seen.insert(maybe->id).second) {
                corpus.stats.duplicates_dropped++;
                continue;
            }
            if (!maybe->has_location()) corpus.stats.no_location++;
            corpus.tweets.push_back(std::move(*maybe));
        }
        block.clear();
    };

    std::string line;
    try {
        while (reader.next(line)) {
            block.push_back(line);
            if (block.size() >= kBlockLines) flush();
        }
    } catch (IngestError& e) {
        flush();
        throw IngestError(e.what(), corpus.stats);
    }
    flush();
    return corpus;
}

inline Corpus read_corpus_from_stream(std::istream& in, int threads = 1) {
    unsigned nthreads = detail::resolve_threads(threads);
    Corpus corpus;
    std::unordered_set<std::int64_t> seen;
    std::vector<std::string> block;
    std::vector<std::optional<Tweet>> parsed;

    std::string line;
    while (std::getline(in, line)) block.push_back(line);
    parse_block(block, nthreads, parsed);
    for (auto& maybe : parsed) {
        corpus.stats.total_lines++;
        if (!maybe) {
            corpus.stats.malformed++;
            continue;
        }
        corpus.stats.parsed++;
        if (!seen.insert(maybe->id).second) {
            corpus.stats.duplicates_dropped++;
            continue;
        }
        if (!maybe->has_location()) corpus.stats.no_location++;
        corpus.tweets.push_back(std::move(*maybe));
    }
    return corpus;
}

inline void write_corpus(const std::vector<Tweet>& tweets, std::ostream& out) {
    std::string buf;
    for (const Tweet& t : tweets) {
        buf = serialize_tweet(t);
        buf += '\n';
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

inline void write_corpus_file(const std::vector<Tweet>& tweets, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot open " + path + " for writing", {});
    write_corpus(tweets, out);
    if (!out) throw IngestError("write error on " + path, {});
}

}  // namespace geostream
