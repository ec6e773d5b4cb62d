// Per-user activity statistics, bias summaries, and mitigation transforms.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "geostream/report.hpp"
#include "geostream/tweet.hpp"

namespace geostream {

inline constexpr double kEarthRadiusKm = 6371.0;

inline double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    constexpr double deg2rad = 3.14159265358979323846 / 180.0;
    double lat1 = a.lat * deg2rad, lat2 = b.lat * deg2rad;
    double dlat = (b.lat - a.lat) * deg2rad;
    double dlon = (b.lon - a.lon) * deg2rad;
    double s = std::sin(dlat / 2), t = std::sin(dlon / 2);
    double h = s * s + std::cos(lat1) * std::cos(lat2) * t * t;
    return kEarthRadiusKm * 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

struct UserFrequencyTable {
    std::unordered_map<std::int64_t, std::uint64_t> counts;
    std::uint64_t total_tweets = 0;

    std::uint64_t unique_users() const { return counts.size(); }
};

template <typename TweetRange>
UserFrequencyTable build_frequency(const TweetRange& corpus) {
    UserFrequencyTable tbl;
    for (const Tweet& t : corpus) {
        tbl.counts[t.user_id]++;
        tbl.total_tweets++;
    }
    return tbl;
}

// The top-`fraction` user set: the ceil(fraction * unique_users) users with
// the highest counts, ties broken by smaller user id.
inline std::vector<std::int64_t> top_user_set(const UserFrequencyTable& tbl, double fraction) {
    std::vector<std::pair<std::uint64_t, std::int64_t>> order;
    order.reserve(tbl.counts.size());
    for (const auto& [user, count] : tbl.counts) order.emplace_back(count, user);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::size_t k = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(tbl.counts.size())));
    k = std::min(k, order.size());
    std::vector<std::int64_t> users;
    users.reserve(k);
    for (std::size_t i = 0; i < k; ++i) users.push_back(order[i].second);
    return users;
}

struct FrequencySummary {
    std::uint64_t unique_users = 0;
    std::uint64_t total_tweets = 0;
    std::uint64_t users_exactly_1 = 0;
    std::uint64_t users_at_most_n = 0;  // n from summarize(), default 5
    std::uint64_t at_most_n = 5;
    double top_fraction = 0.01;
    std::uint64_t top_user_count = 0;  // size of the top set
    std::uint64_t top_tweets = 0;      // tweets created by the top set
    std::uint64_t max_user_count = 0;

    double pct_users_exactly_1() const {
        return 100.0 * static_cast<double>(users_exactly_1) / static_cast<double>(unique_users);
    }
    double pct_users_at_most_n() const {
        return 100.0 * static_cast<double>(users_at_most_n) / static_cast<double>(unique_users);
    }
    double share_of_top() const {
        return 100.0 * static_cast<double>(top_tweets) / static_cast<double>(total_tweets);
    }
};

inline FrequencySummary summarize(const UserFrequencyTable& tbl, double top_fraction = 0.01,
                                  std::uint64_t at_most_n = 5) {
    if (tbl.counts.empty()) throw std::invalid_argument("summarize: empty frequency table");
    FrequencySummary s;
    s.unique_users = tbl.unique_users();
    s.total_tweets = tbl.total_tweets;
    s.at_most_n = at_most_n;
    s.top_fraction = top_fraction;
    for (const auto& [_, count] : tbl.counts) {
        if (count == 1) s.users_exactly_1++;
        if (count <= at_most_n) s.users_at_most_n++;
        s.max_user_count = std::max(s.max_user_count, count);
    }
    auto top = top_user_set(tbl, top_fraction);
    s.top_user_count = top.size();
    for (std::int64_t user : top) s.top_tweets += tbl.counts.at(user);
    return s;
}

inline std::vector<Tweet> remove_top_users(const std::vector<Tweet>& corpus, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("remove_top_users: fraction must be in (0,1)");
    auto tbl = build_frequency(corpus);
    if (tbl.counts.empty()) return {};
    auto top = top_user_set(tbl, fraction);
    std::set<std::int64_t> topset(top.begin(), top.end());
    std::vector<Tweet> out;
    out.reserve(corpus.size());
    for (const Tweet& t : corpus)
        if (!topset.count(t.user_id)) out.push_back(t);
    return out;
}

// Keeps each user's earliest tweet by created_at, ties by smallest tweet id;
// output preserves corpus order of the kept tweets.
inline std::vector<Tweet> one_per_user(const std::vector<Tweet>& corpus) {
    std::unordered_map<std::int64_t, const Tweet*> keep;
    for (const Tweet& t : corpus) {
        auto [it, inserted] = keep.try_emplace(t.user_id, &t);
        if (!inserted) {
            const Tweet* cur = it->second;
            if (t.created_at < cur->created_at ||
                (t.created_at == cur->created_at && t.id < cur->id))
                it->second = &t;
        }
    }
    std::vector<Tweet> out;
    out.reserve(keep.size());
    for (const Tweet& t : corpus)
        if (keep.at(t.user_id) == &t) out.push_back(t);
    return out;
}

template <typename TweetRange>
std::uint64_t unique_user_count(const TweetRange& corpus) {
    std::set<std::int64_t> users;
    for (const Tweet& t : corpus) users.insert(t.user_id);
    return users.size();
}

// ---------------------------------------------------------------------------
// Bot heuristics on user trajectories and URL rates.

// Flags users whose consecutive located tweets imply a travel speed above
// `threshold_kmh`. Pairs with zero time delta and nonzero distance are
// flagged; coincident pairs are ignored.
template <typename TweetRange>
std::set<std::int64_t> speed_flag(const TweetRange& corpus, double threshold_kmh = 120.0) {
    struct Fix {
        std::int64_t t;
        std::int64_t id;
        GeoPoint p;
    };
    std::unordered_map<std::int64_t, std::vector<Fix>> tracks;
    for (const Tweet& t : corpus)
        if (t.coordinates) tracks[t.user_id].push_back({t.created_at, t.id, *t.coordinates});

    std::set<std::int64_t> flagged;
    for (auto& [user, fixes] : tracks) {
        std::sort(fixes.begin(), fixes.end(), [](const Fix& a, const Fix& b) {
            if (a.t != b.t) return a.t < b.t;
            return a.id < b.id;
        });
        for (std::size_t i = 0; i + 1 < fixes.size(); ++i) {
            double dist = haversine_km(fixes[i].p, fixes[i + 1].p);
            double dt_h = static_cast<double>(fixes[i + 1].t - fixes[i].t) / 3600.0;
            if (dt_h == 0.0) {
                if (dist > 0.0) {
                    flagged.insert(user);
                    break;
                }
                continue;
            }
            if (dist / dt_h > threshold_kmh) {
                flagged.insert(user);
                break;
            }
        }
    }
    return flagged;
}

// Flags users whose tweets contain URLs more than `threshold` of the time.
// Users with fewer than `min_tweets` tweets are exempt.
template <typename TweetRange>
std::set<std::int64_t> url_rate_flag(const TweetRange& corpus, double threshold = 0.70,
                                     std::uint64_t min_tweets = 2) {
    struct Tally {
        std::uint64_t total = 0;
        std::uint64_t with_url = 0;
    };
    std::unordered_map<std::int64_t, Tally> tallies;
    for (const Tweet& t : corpus) {
        Tally& tally = tallies[t.user_id];
        tally.total++;
        if (t.urls_count >= 1) tally.with_url++;
    }
    std::set<std::int64_t> flagged;
    for (const auto& [user, tally] : tallies) {
        if (tally.total < min_tweets) continue;
        if (static_cast<double>(tally.with_url) / static_cast<double>(tally.total) > threshold)
            flagged.insert(user);
    }
    return flagged;
}

// ---------------------------------------------------------------------------
// Exports

// Histogram CSV, `tweets_per_user,count_of_users`, ascending by rate.
inline std::string frequency_histogram_csv(const UserFrequencyTable& tbl) {
    std::map<std::uint64_t, std::uint64_t> hist;
    for (const auto& [_, count] : tbl.counts) hist[count]++;
    std::string out = "tweets_per_user,count_of_users\n";
    for (const auto& [rate, users] : hist)
        out += std::to_string(rate) + ',' + std::to_string(users) + '\n';
    return out;
}

inline std::string user_list_text(const std::set<std::int64_t>& users) {
    std::string out;
    for (std::int64_t u : users) out += std::to_string(u) + '\n';
    return out;
}

}  // namespace geostream
