#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ffarank/telemetry.hpp"

namespace ffarank {

// Lifetime accumulators for one player, updated once per played match.
struct PlayerProfile {
    std::int64_t games = 0;
    std::int64_t wins = 0;
    std::int64_t kills = 0;
    double damage = 0.0;
    double walk_m = 0.0;
    double ride_m = 0.0;
    double survive_s = 0.0;
    double rank_pct_sum = 0.0;  // sum of 100 * rank / n over played matches
};

// field_size is n for the match the stats came from. Pure value update: the
// argument is left untouched.
PlayerProfile update_after_match(PlayerProfile profile, const ParticipantStats& stats,
                                 int field_size);

enum class Feature : int {
    b1_games = 0,
    b2_kd,
    b3_accuracy,
    b4_survive,
    b5_walk_ratio,
    b6_ride_ratio,
    b7_walk_vel,
    b8_ride_vel,
    b9_rank_ratio,
};

inline constexpr int kFeatureCount = 9;
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::b1_games,      Feature::b2_kd,        Feature::b3_accuracy,
    Feature::b4_survive,    Feature::b5_walk_ratio, Feature::b6_ride_ratio,
    Feature::b7_walk_vel,   Feature::b8_ride_vel,  Feature::b9_rank_ratio,
};

std::string_view feature_name(Feature f);

// Ratio convention: x/y with y == 0 mapping to 0. A player with no games
// scores 100 on b9 and 0 everywhere else.
double feature_value(const PlayerProfile& profile, Feature f);

// b9 predicts better players with smaller values; everything else is
// higher-is-better.
inline bool feature_lower_is_better(Feature f) { return f == Feature::b9_rank_ratio; }

// Interns player names to dense 32-bit ids.
class PlayerIndex {
public:
    std::uint32_t id_of(const std::string& name) {
        auto [it, inserted] = ids_.try_emplace(name, static_cast<std::uint32_t>(names_.size()));
        if (inserted) names_.push_back(name);
        return it->second;
    }
    const std::uint32_t* find(const std::string& name) const {
        auto it = ids_.find(name);
        return it == ids_.end() ? nullptr : &it->second;
    }
    const std::string& name_of(std::uint32_t id) const { return names_[id]; }
    std::size_t size() const { return names_.size(); }

private:
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::string> names_;
};

}  // namespace ffarank
