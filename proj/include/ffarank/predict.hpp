#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ffarank/profile.hpp"
#include "ffarank/rating.hpp"

namespace ffarank {

// The twelve models of the summary table, in report column order.
enum class ModelId : int {
    elo = 0,
    glicko,
    trueskill,
    b1_games,
    b2_kd,
    b3_accuracy,
    b4_survive,
    b5_walk_ratio,
    b6_ride_ratio,
    b7_walk_vel,
    b8_ride_vel,
    b9_rank_ratio,
};

inline constexpr int kModelCount = 12;
inline constexpr std::array<ModelId, kModelCount> kAllModels = {
    ModelId::elo,          ModelId::glicko,       ModelId::trueskill,
    ModelId::b1_games,     ModelId::b2_kd,        ModelId::b3_accuracy,
    ModelId::b4_survive,   ModelId::b5_walk_ratio, ModelId::b6_ride_ratio,
    ModelId::b7_walk_vel,  ModelId::b8_ride_vel,  ModelId::b9_rank_ratio,
};

std::string_view model_name(ModelId m);
// Returns nullptr-equivalent via optional-free API: throws DataError on unknown name.
ModelId model_from_name(std::string_view name);

inline bool is_feature_model(ModelId m) { return static_cast<int>(m) >= 3; }
inline Feature model_feature(ModelId m) {
    return static_cast<Feature>(static_cast<int>(m) - 3);
}
inline ModelId feature_model(Feature f) {
    return static_cast<ModelId>(static_cast<int>(f) + 3);
}
inline bool model_lower_is_better(ModelId m) { return m == ModelId::b9_rank_ratio; }

struct PredictedOrder {
    std::string match_id;
    std::string model_id;
    std::vector<std::string> ordering;  // position k = predicted rank k+1
};

// One RNG stream per (run seed, match, model) so models stay independent
// and reruns reproduce every tie break.
std::uint64_t tie_break_seed(std::uint64_t run_seed, std::string_view match_id,
                             std::string_view model_id);

// Core ordering kernel: indices [0, n) sorted by score, descending unless
// lower_is_better; tied scores land in a seeded uniform random order.
std::vector<std::uint32_t> order_by_score(std::span<const double> scores, bool lower_is_better,
                                          std::uint64_t seed);

using ProfileStore = std::unordered_map<std::string, PlayerProfile>;

template <typename State>
using RatingStore = std::unordered_map<std::string, State>;

// Missing players are treated as fresh (default profile / default state).
PredictedOrder predict_by_feature(const std::vector<std::string>& participants,
                                  const ProfileStore& profiles, Feature f,
                                  std::uint64_t rng_seed, const std::string& match_id);

PredictedOrder predict_by_rating(const std::vector<std::string>& participants,
                                 const RatingStore<EloState>& states, std::uint64_t rng_seed,
                                 const std::string& match_id);
PredictedOrder predict_by_rating(const std::vector<std::string>& participants,
                                 const RatingStore<GlickoState>& states, std::uint64_t rng_seed,
                                 const std::string& match_id);
PredictedOrder predict_by_rating(const std::vector<std::string>& participants,
                                 const RatingStore<TrueSkillState>& states, std::uint64_t rng_seed,
                                 const std::string& match_id);

}  // namespace ffarank
