#include "ffarank/predict.hpp"

#include <algorithm>
#include <numeric>

#include "ffarank/common.hpp"

namespace ffarank {
namespace {

const char* kModelNames[kModelCount] = {
    "elo",          "glicko",       "trueskill",   "b1_games",
    "b2_kd",        "b3_accuracy",  "b4_survive",  "b5_walk_ratio",
    "b6_ride_ratio", "b7_walk_vel", "b8_ride_vel", "b9_rank_ratio",
};

template <typename ScoreOf>
PredictedOrder predict_generic(const std::vector<std::string>& participants,
                               std::string_view model, std::uint64_t rng_seed,
                               const std::string& match_id, bool lower_is_better,
                               ScoreOf&& score_of) {
    require(participants.size() >= 2, "prediction needs at least 2 participants");
    std::vector<double> scores(participants.size());
    for (std::size_t i = 0; i < participants.size(); ++i) scores[i] = score_of(participants[i]);
    const auto order =
        order_by_score(scores, lower_is_better, tie_break_seed(rng_seed, match_id, model));
    PredictedOrder out;
    out.match_id = match_id;
    out.model_id = std::string(model);
    out.ordering.reserve(participants.size());
    for (std::uint32_t idx : order) out.ordering.push_back(participants[idx]);
    return out;
}

}  // namespace

std::string_view model_name(ModelId m) {
    const int i = static_cast<int>(m);
    require(i >= 0 && i < kModelCount, "model id out of range");
    return kModelNames[i];
}

ModelId model_from_name(std::string_view name) {
    for (int i = 0; i < kModelCount; ++i) {
        if (name == kModelNames[i]) return static_cast<ModelId>(i);
    }
    throw DataError("unknown model '" + std::string(name) + "'");
}

std::uint64_t tie_break_seed(std::uint64_t run_seed, std::string_view match_id,
                             std::string_view model_id) {
    std::uint64_t h = fnv1a64(match_id);
    h = hash_mix(h ^ fnv1a64(model_id));
    return hash_mix(h ^ hash_mix(run_seed));
}

std::vector<std::uint32_t> order_by_score(std::span<const double> scores, bool lower_is_better,
                                          std::uint64_t seed) {
    std::vector<std::uint32_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0u);
    Rng64 rng(seed);
    shuffle_range(order, rng);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return lower_is_better ? scores[a] < scores[b] : scores[a] > scores[b];
    });
    return order;
}

PredictedOrder predict_by_feature(const std::vector<std::string>& participants,
                                  const ProfileStore& profiles, Feature f,
                                  std::uint64_t rng_seed, const std::string& match_id) {
    static const PlayerProfile fresh;
    return predict_generic(participants, feature_name(f), rng_seed, match_id,
                           feature_lower_is_better(f), [&](const std::string& p) {
                               auto it = profiles.find(p);
                               return feature_value(it == profiles.end() ? fresh : it->second, f);
                           });
}

PredictedOrder predict_by_rating(const std::vector<std::string>& participants,
                                 const RatingStore<EloState>& states, std::uint64_t rng_seed,
                                 const std::string& match_id) {
    return predict_generic(participants, model_name(ModelId::elo), rng_seed, match_id, false,
                           [&](const std::string& p) {
                               auto it = states.find(p);
                               return it == states.end() ? EloState{}.r : it->second.r;
                           });
}

PredictedOrder predict_by_rating(const std::vector<std::string>& participants,
                                 const RatingStore<GlickoState>& states, std::uint64_t rng_seed,
                                 const std::string& match_id) {
    return predict_generic(participants, model_name(ModelId::glicko), rng_seed, match_id, false,
                           [&](const std::string& p) {
                               auto it = states.find(p);
                               return it == states.end() ? GlickoState{}.r : it->second.r;
                           });
}

PredictedOrder predict_by_rating(const std::vector<std::string>& participants,
                                 const RatingStore<TrueSkillState>& states, std::uint64_t rng_seed,
                                 const std::string& match_id) {
    return predict_generic(participants, model_name(ModelId::trueskill), rng_seed, match_id, false,
                           [&](const std::string& p) {
                               auto it = states.find(p);
                               return it == states.end() ? TrueSkillState{}.mu : it->second.mu;
                           });
}

}  // namespace ffarank
