#include "ffarank/profile.hpp"

#include "ffarank/common.hpp"

namespace ffarank {
namespace {

double ratio(double x, double y) { return y == 0.0 ? 0.0 : x / y; }

}  // namespace

PlayerProfile update_after_match(PlayerProfile profile, const ParticipantStats& stats,
                                 int field_size) {
    require(field_size >= 2, "profile update needs field_size >= 2");
    require(stats.rank >= 1 && stats.rank <= field_size, "rank outside [1, field_size]");
    profile.games += 1;
    if (stats.rank == 1) profile.wins += 1;
    profile.kills += stats.kills;
    profile.damage += stats.damage;
    profile.walk_m += stats.walk_m;
    profile.ride_m += stats.ride_m;
    profile.survive_s += stats.survive_s;
    profile.rank_pct_sum += 100.0 * stats.rank / field_size;
    return profile;
}

std::string_view feature_name(Feature f) {
    switch (f) {
        case Feature::b1_games: return "b1_games";
        case Feature::b2_kd: return "b2_kd";
        case Feature::b3_accuracy: return "b3_accuracy";
        case Feature::b4_survive: return "b4_survive";
        case Feature::b5_walk_ratio: return "b5_walk_ratio";
        case Feature::b6_ride_ratio: return "b6_ride_ratio";
        case Feature::b7_walk_vel: return "b7_walk_vel";
        case Feature::b8_ride_vel: return "b8_ride_vel";
        case Feature::b9_rank_ratio: return "b9_rank_ratio";
    }
    throw ContractError("unknown feature");
}

double feature_value(const PlayerProfile& p, Feature f) {
    if (p.games == 0) return f == Feature::b9_rank_ratio ? 100.0 : 0.0;
    const auto games = static_cast<double>(p.games);
    switch (f) {
        case Feature::b1_games: return games;
        case Feature::b2_kd: return ratio(static_cast<double>(p.kills),
                                          static_cast<double>(p.games - p.wins));
        case Feature::b3_accuracy: return ratio(static_cast<double>(p.kills), p.damage);
        case Feature::b4_survive: return p.survive_s / games;
        case Feature::b5_walk_ratio: return p.walk_m / games;
        case Feature::b6_ride_ratio: return p.ride_m / games;
        case Feature::b7_walk_vel: return ratio(p.walk_m, p.survive_s);
        case Feature::b8_ride_vel: return ratio(p.ride_m, p.survive_s);
        case Feature::b9_rank_ratio: return p.rank_pct_sum / games;
    }
    throw ContractError("unknown feature");
}

}  // namespace ffarank
