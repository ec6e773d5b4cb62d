// Client-source extraction and bot/cyborg noise classification.
//
// The `source` metadata field names the client that posted a tweet, usually
// as an HTML anchor whose inner text is the display name. Classification is
// an exact, case-sensitive match of that name against a curated blacklist;
// an entry may additionally require a hashtag (matched case-insensitively).
#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "geostream/report.hpp"
#include "geostream/tweet.hpp"

namespace geostream {

enum class NoiseCategory { Job = 0, Advertisement, Weather, Earthquake, News, Traffic };

inline const char* to_string(NoiseCategory c) {
    switch (c) {
        case NoiseCategory::Job: return "Job";
        case NoiseCategory::Advertisement: return "Advertisement";
        case NoiseCategory::Weather: return "Weather";
        case NoiseCategory::Earthquake: return "Earthquake";
        case NoiseCategory::News: return "News";
        case NoiseCategory::Traffic: return "Traffic";
    }
    return "?";
}

inline std::optional<NoiseCategory> noise_category_from_string(std::string_view s) {
    static const std::pair<std::string_view, NoiseCategory> table[] = {
        {"Job", NoiseCategory::Job},           {"Advertisement", NoiseCategory::Advertisement},
        {"Weather", NoiseCategory::Weather},   {"Earthquake", NoiseCategory::Earthquake},
        {"News", NoiseCategory::News},         {"Traffic", NoiseCategory::Traffic},
    };
    for (auto& [name, cat] : table)
        if (name == s) return cat;
    return std::nullopt;
}

struct BlacklistEntry {
    NoiseCategory category;
    std::string source_name;                      // exact, case-sensitive
    std::optional<std::string> required_hashtag;  // stored without '#'
};

struct Blacklist {
    std::vector<BlacklistEntry> entries;
    std::string city_label;
};

// ---------------------------------------------------------------------------
// Source-name extraction

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::string decode_entities(std::string_view s) {
    static const std::pair<std::string_view, char> entities[] = {
        {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}};
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        bool matched = false;
        if (s[i] == '&') {
            for (auto& [ent, ch] : entities) {
                if (s.substr(i, ent.size()) == ent) {
                    out += ch;
                    i += ent.size();
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) out += s[i++];
    }
    return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

}  // namespace detail

// `<a ...>INNER</a>` yields INNER, trimmed and with the four basic HTML
// entities decoded; anything else falls through to the trimmed raw value.
inline std::string extract_source_name(std::string_view raw) {
    std::string_view s = detail::trim(raw);
    if (s.size() >= 7 && (s.substr(0, 3) == "<a " || s.substr(0, 3) == "<a>") &&
        s.substr(s.size() - 4) == "</a>") {
        std::size_t open_end = s.find('>');
        if (open_end != std::string_view::npos && open_end < s.size() - 4) {
            std::string_view inner = detail::trim(s.substr(open_end + 1, s.size() - 4 - open_end - 1));
            return detail::decode_entities(inner);
        }
    }
    return detail::decode_entities(detail::trim(s));
}

// ---------------------------------------------------------------------------
// Classification

struct ClientClass {
    enum class Kind { Noise, GenericClient, ThirdParty };
    Kind kind = Kind::ThirdParty;
    NoiseCategory category = NoiseCategory::Job;  // meaningful only for Noise
    std::string source_name;                      // extracted display name

    bool is_noise() const { return kind == Kind::Noise; }
};

inline const char* to_string(ClientClass::Kind k) {
    switch (k) {
        case ClientClass::Kind::Noise: return "noise";
        case ClientClass::Kind::GenericClient: return "generic";
        case ClientClass::Kind::ThirdParty: return "third_party";
    }
    return "?";
}

// Figure-3 style color coding: red = bots/cyborgs, green = generic Twitter
// apps, blue = other third-party platforms.
inline const char* class_color(ClientClass::Kind k) {
    switch (k) {
        case ClientClass::Kind::Noise: return "red";
        case ClientClass::Kind::GenericClient: return "green";
        case ClientClass::Kind::ThirdParty: return "blue";
    }
    return "?";
}

inline const std::vector<std::string>& default_generic_clients() {
    static const std::vector<std::string> v = {"Twitter for iPhone", "Twitter for Android",
                                               "Twitter Web Client"};
    return v;
}

// Precomputed lookup over a blacklist; first matching entry in list order
// wins when several entries share a source name.
class SourceClassifier {
  public:
    explicit SourceClassifier(const Blacklist& bl,
                              std::vector<std::string> generic = default_generic_clients())
        : blacklist_(&bl), generic_(std::move(generic)) {
        for (std::size_t i = 0; i < bl.entries.size(); ++i)
            by_name_[bl.entries[i].source_name].push_back(i);
        for (auto& [name, idx] : by_name_) std::sort(idx.begin(), idx.end());
    }

    ClientClass classify(const Tweet& t) const {
        ClientClass out;
        out.source_name = extract_source_name(t.source_raw);
        if (auto it = by_name_.find(out.source_name); it != by_name_.end()) {
            for (std::size_t idx : it->second) {
                const BlacklistEntry& e = blacklist_->entries[idx];
                if (!e.required_hashtag ||
                    std::any_of(t.hashtags.begin(), t.hashtags.end(), [&](const std::string& h) {
                        return detail::iequals(h, *e.required_hashtag);
                    })) {
                    out.kind = ClientClass::Kind::Noise;
                    out.category = e.category;
                    return out;
                }
            }
        }
        if (std::find(generic_.begin(), generic_.end(), out.source_name) != generic_.end())
            out.kind = ClientClass::Kind::GenericClient;
        else
            out.kind = ClientClass::Kind::ThirdParty;
        return out;
    }

  private:
    const Blacklist* blacklist_;
    std::vector<std::string> generic_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_name_;
};

inline ClientClass classify_source(const Tweet& t, const Blacklist& bl) {
    return SourceClassifier(bl).classify(t);
}

// ---------------------------------------------------------------------------
// Blacklist files: UTF-8 CSV with header `category,source_name,required_hashtag`.

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // tolerate CRLF
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace detail

inline Blacklist parse_blacklist_csv(std::istream& in, const std::string& label) {
    Blacklist bl;
    bl.city_label = label;
    std::string line;
    bool header_seen = false;
    std::map<std::pair<std::string, std::string>, bool> keys;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = detail::split_csv_line(line);
        if (!header_seen) {
            if (fields.size() < 2 || fields[0] != "category" || fields[1] != "source_name")
                throw std::runtime_error("blacklist: missing header 'category,source_name,required_hashtag'");
            header_seen = true;
            continue;
        }
        if (fields.size() < 2)
            throw std::runtime_error("blacklist line " + std::to_string(lineno) + ": too few fields");
        auto cat = noise_category_from_string(fields[0]);
        if (!cat)
            throw std::runtime_error("blacklist line " + std::to_string(lineno) +
                                     ": unknown category '" + fields[0] + "'");
        if (fields[1].empty())
            throw std::runtime_error("blacklist line " + std::to_string(lineno) +
                                     ": empty source_name");
        BlacklistEntry e;
        e.category = *cat;
        e.source_name = fields[1];
        std::string tag = fields.size() > 2 ? fields[2] : "";
        if (!tag.empty()) {
            if (tag[0] == '#') tag.erase(0, 1);
            if (tag.empty())
                throw std::runtime_error("blacklist line " + std::to_string(lineno) +
                                         ": empty required_hashtag");
            e.required_hashtag = tag;
        }
        auto key = std::make_pair(e.source_name, tag);
        if (keys.count(key))
            throw std::runtime_error("blacklist line " + std::to_string(lineno) +
                                     ": duplicate (source_name, required_hashtag)");
        keys[key] = true;
        bl.entries.push_back(std::move(e));
    }
    if (!header_seen && lineno > 0)
        throw std::runtime_error("blacklist: missing header");
    return bl;
}

inline Blacklist load_blacklist(const std::string& path, const std::string& label = "") {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open blacklist " + path);
    return parse_blacklist_csv(in, label.empty() ? path : label);
}

// ---------------------------------------------------------------------------
// Bundled presets transcribing the November 2015 case-study blacklists.

inline constexpr std::string_view kSanDiegoBlacklistCsv =
    "category,source_name,required_hashtag\n"
    "Job,TweetMyJOBS,\n"
    "Job,SafeTweet by TweetMyJOBS,\n"
    "Job,CareerCenter,\n"
    "Advertisement,dlvr.it,\n"
    "Advertisement,Golfstar,\n"
    "Advertisement,dine here,\n"
    "Advertisement,Simply Best Coupons,\n"
    "Advertisement,Auto City Sales,\n"
    "Advertisement,sp_california,Coupon\n"
    "Weather,Cities,\n"
    "Weather,iembot,\n"
    "Weather,Sandaysoft Cumulus,\n"
    "Earthquake,Earthquake,\n"
    "Earthquake,everyEarthquake,\n"
    "Earthquake,EarthquakeTrack.com,\n"
    "Earthquake,QuakeSOS,\n"
    "News,San Diego Trends,\n"
    "News,WordPress.com,\n"
    "Traffic,TTN SD traffic,\n"
    "Traffic,TTN LA traffic,\n";

inline constexpr std::string_view kColumbusBlacklistCsv =
    "category,source_name,required_hashtag\n"
    "Job,TweetMyJOBS,\n"
    "Job,SafeTweet by TweetMyJOBS,\n"
    "Advertisement,dlvr.it,\n"
    "Advertisement,circlepix,\n"
    "Advertisement,dine here,\n"
    "Advertisement,Beer Menus,\n"
    "Advertisement,sp_ohio,Coupon\n"
    "Advertisement,DanceDeets,\n"
    "Advertisement,sp_oregon,Coupon\n"
    "Advertisement,SmartSearch,\n"
    "Advertisement,JCScoop,\n"
    "Advertisement,LeadingCourses.com,\n"
    "Traffic,TTN CMH traffic,\n"
    "News,Columbus Trends,\n"
    "News,eLobbyist,\n"
    "News,WordPress.com,\n"
    "News,twitterfeed,\n"
    "News,stolen_bike_alerter,\n"
    "Weather,Cities,\n"
    "Weather,iembot,\n";

inline std::optional<Blacklist> blacklist_preset(const std::string& name) {
    std::string_view csv;
    if (name == "san-diego-2015-11")
        csv = kSanDiegoBlacklistCsv;
    else if (name == "columbus-2015-11")
        csv = kColumbusBlacklistCsv;
    else
        return std::nullopt;
    std::istringstream in{std::string(csv)};
    return parse_blacklist_csv(in, name);
}

// Resolves either a bundled preset name or a CSV file path.
inline Blacklist resolve_blacklist(const std::string& name_or_path) {
    if (auto bl = blacklist_preset(name_or_path)) return *bl;
    return load_blacklist(name_or_path);
}

// ---------------------------------------------------------------------------
// Reports

struct NoiseRow {
    NoiseCategory category;
    std::string source_name;
    std::optional<std::string> hashtag;
    std::uint64_t count = 0;
};

struct NoiseCategoryBlock {
    NoiseCategory category;
    std::vector<NoiseRow> rows;  // descending count, ties by name ascending
    std::uint64_t subtotal = 0;
};

struct NoiseReport {
    std::string city_label;
    std::uint64_t corpus_size = 0;
    std::uint64_t noise_total = 0;
    std::vector<NoiseCategoryBlock> categories;  // descending subtotal

    // Table-2/3 style percentages: two decimal places.
    std::string noise_pct() const { return format_pct(noise_total, corpus_size, 2); }
    std::uint64_t category_count(NoiseCategory c) const {
        for (const auto& b : categories)
            if (b.category == c) return b.subtotal;
        return 0;
    }
    std::string category_pct(NoiseCategory c) const {
        return format_pct(category_count(c), corpus_size, 2);
    }
};

template <typename TweetRange>
NoiseReport noise_report(const TweetRange& corpus, const Blacklist& bl) {
    SourceClassifier classifier(bl);
    NoiseReport rep;
    rep.city_label = bl.city_label;
    // Key rows by blacklist entry identity so hashtag-conditioned entries get
    // their own row.
    std::map<std::pair<int, std::pair<std::string, std::string>>, std::uint64_t> rows;
    for (const Tweet& t : corpus) {
        rep.corpus_size++;
        ClientClass c = classifier.classify(t);
        if (!c.is_noise()) continue;
        rep.noise_total++;
        // Recover the matched entry's hashtag condition for the report row.
        std::string tag;
        for (const BlacklistEntry& e : bl.entries) {
            if (e.source_name != c.source_name || e.category != c.category) continue;
            if (e.required_hashtag &&
                !std::any_of(t.hashtags.begin(), t.hashtags.end(), [&](const std::string& h) {
                    return detail::iequals(h, *e.required_hashtag);
                }))
                continue;
            tag = e.required_hashtag.value_or("");
            break;
        }
        rows[{static_cast<int>(c.category), {c.source_name, tag}}]++;
    }

    std::map<int, NoiseCategoryBlock> blocks;
    for (const auto& [key, count] : rows) {
        auto& block = blocks[key.first];
        block.category = static_cast<NoiseCategory>(key.first);
        NoiseRow row;
        row.category = block.category;
        row.source_name = key.second.first;
        if (!key.second.second.empty()) row.hashtag = key.second.second;
        row.count = count;
        block.rows.push_back(std::move(row));
        block.subtotal += count;
    }
    for (auto& [_, block] : blocks) {
        std::sort(block.rows.begin(), block.rows.end(), [](const NoiseRow& a, const NoiseRow& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.source_name < b.source_name;
        });
        rep.categories.push_back(std::move(block));
    }
    std::sort(rep.categories.begin(), rep.categories.end(),
              [](const NoiseCategoryBlock& a, const NoiseCategoryBlock& b) {
                  if (a.subtotal != b.subtotal) return a.subtotal > b.subtotal;
                  return static_cast<int>(a.category) < static_cast<int>(b.category);
              });
    return rep;
}

inline std::string noise_to_csv(const NoiseReport& r) {
    std::string out = "category,source_name,hashtag,count,category_pct\n";
    for (const auto& block : r.categories) {
        for (const auto& row : block.rows) {
            out += to_string(row.category);
            out += ',' + csv_escape(row.source_name) + ',' + row.hashtag.value_or("") + ',' +
                   std::to_string(row.count) + ",\n";
        }
        out += std::string(to_string(block.category)) + " total,,," +
               std::to_string(block.subtotal) + ',' + r.category_pct(block.category) + '\n';
    }
    out += "noise total,,," + std::to_string(r.noise_total) + ',' + r.noise_pct() + '\n';
    return out;
}

inline std::string noise_to_markdown(const NoiseReport& r) {
    std::string out;
    out += md_header({"Source category", "Source name", "Hashtag", "Tweet number", "Percentage"});
    for (const auto& block : r.categories) {
        bool first = true;
        for (const auto& row : block.rows) {
            out += md_row({first ? to_string(block.category) : "", row.source_name,
                           row.hashtag.value_or(""), std::to_string(row.count), ""});
            first = false;
        }
        out += md_row({"Total", "", "", std::to_string(block.subtotal),
                       r.category_pct(block.category) + "%"});
    }
    out += md_row({"", "Percentage of Noise:", "", "", r.noise_pct() + "%"});
    return out;
}

inline nlohmann::json noise_to_json(const NoiseReport& r) {
    nlohmann::json cats = nlohmann::json::array();
    for (const auto& block : r.categories) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : block.rows) {
            nlohmann::json jr{{"source", row.source_name}, {"count", row.count}};
            jr["hashtag"] = row.hashtag ? nlohmann::json(*row.hashtag) : nlohmann::json();
            rows.push_back(jr);
        }
        cats.push_back(nlohmann::json{{"category", to_string(block.category)},
                                      {"count", block.subtotal},
                                      {"percent", r.category_pct(block.category)},
                                      {"sources", rows}});
    }
    return nlohmann::json{{"city", r.city_label},
                          {"corpus_size", r.corpus_size},
                          {"noise_count", r.noise_total},
                          {"noise_percent", r.corpus_size ? nlohmann::json(r.noise_pct())
                                                          : nlohmann::json()},
                          {"categories", cats}};
}

// ---------------------------------------------------------------------------
// Platform census (Figure-3/4 style)

struct PlatformRow {
    std::string source_name;
    std::uint64_t count = 0;
    ClientClass::Kind kind = ClientClass::Kind::ThirdParty;
    NoiseCategory category = NoiseCategory::Job;  // when kind == Noise
};

struct PlatformReport {
    std::uint64_t corpus_size = 0;
    std::vector<PlatformRow> rows;  // descending count, ties by name ascending
};

template <typename TweetRange>
PlatformReport platform_report(const TweetRange& corpus, const Blacklist& bl) {
    SourceClassifier classifier(bl);
    struct Tally {
        std::uint64_t total = 0;
        std::uint64_t by_kind[3] = {0, 0, 0};
        NoiseCategory category = NoiseCategory::Job;
    };
    std::map<std::string, Tally> tallies;
    PlatformReport rep;
    for (const Tweet& t : corpus) {
        rep.corpus_size++;
        ClientClass c = classifier.classify(t);
        Tally& tally = tallies[c.source_name];
        tally.total++;
        tally.by_kind[static_cast<int>(c.kind)]++;
        if (c.is_noise()) tally.category = c.category;
    }
    for (auto& [name, tally] : tallies) {
        PlatformRow row;
        row.source_name = name;
        row.count = tally.total;
        // A name with mixed per-tweet outcomes (hashtag-conditioned entries)
        // is tagged by majority; ties prefer noise, then generic.
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (tally.by_kind[k] > tally.by_kind[best]) best = k;
        row.kind = static_cast<ClientClass::Kind>(best);
        row.category = tally.category;
        rep.rows.push_back(std::move(row));
    }
    std::sort(rep.rows.begin(), rep.rows.end(), [](const PlatformRow& a, const PlatformRow& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.source_name < b.source_name;
    });
    return rep;
}

inline std::string platform_to_csv(const PlatformReport& r, std::size_t top_n = 0) {
    std::string out = "rank,source_name,count,percent,class,color\n";
    std::size_t n = top_n ? std::min(top_n, r.rows.size()) : r.rows.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = r.rows[i];
        out += std::to_string(i + 1) + ',' + csv_escape(row.source_name) + ',' +
               std::to_string(row.count) + ',' + format_pct(row.count, r.corpus_size, 2) + ',' +
               to_string(row.kind) + ',' + class_color(row.kind) + '\n';
    }
    return out;
}

inline std::string platform_to_markdown(const PlatformReport& r, std::size_t top_n = 0) {
    std::string out = md_header({"Rank", "Platform", "Tweets", "Percentage", "Class"});
    std::size_t n = top_n ? std::min(top_n, r.rows.size()) : r.rows.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = r.rows[i];
        out += md_row({std::to_string(i + 1), row.source_name, std::to_string(row.count),
                       format_pct(row.count, r.corpus_size, 2) + "%", to_string(row.kind)});
    }
    return out;
}

inline nlohmann::json platform_to_json(const PlatformReport& r, std::size_t top_n = 0) {
    nlohmann::json rows = nlohmann::json::array();
    std::size_t n = top_n ? std::min(top_n, r.rows.size()) : r.rows.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = r.rows[i];
        rows.push_back(nlohmann::json{{"rank", i + 1},
                                      {"source", row.source_name},
                                      {"count", row.count},
                                      {"percent", format_pct(row.count, r.corpus_size, 2)},
                                      {"class", to_string(row.kind)},
                                      {"color", class_color(row.kind)}});
    }
    return nlohmann::json{{"corpus_size", r.corpus_size}, {"rows", rows}};
}

}  // namespace geostream
