#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ffarank/common.hpp"
#include "ffarank/predict.hpp"

using namespace ffarank;

TEST_CASE("model names round-trip and unknown names are data errors") {
    for (ModelId m : kAllModels) CHECK(model_from_name(model_name(m)) == m);
    CHECK(model_name(ModelId::elo) == "elo");
    CHECK(model_name(ModelId::b9_rank_ratio) == "b9_rank_ratio");
    CHECK_THROWS_AS(model_from_name("nope"), DataError);
    CHECK(model_lower_is_better(ModelId::b9_rank_ratio));
    CHECK_FALSE(model_lower_is_better(ModelId::b2_kd));
    CHECK(model_feature(ModelId::b1_games) == Feature::b1_games);
    CHECK(feature_model(Feature::b9_rank_ratio) == ModelId::b9_rank_ratio);
}

TEST_CASE("distinct scores sort descending, or ascending when lower is better") {
    const std::vector<double> scores = {0.3, 1.7, -2.0, 0.9};
    auto desc = order_by_score(scores, false, 42);
    CHECK(desc == std::vector<std::uint32_t>{1, 3, 0, 2});
    auto asc = order_by_score(scores, true, 42);
    CHECK(asc == std::vector<std::uint32_t>{2, 0, 3, 1});
}

TEST_CASE("ordering is invariant to the seed when scores are distinct") {
    Rng64 rng(31);
    std::vector<double> scores(25);
    for (auto& s : scores) s = rng.uniform01();
    const auto base = order_by_score(scores, false, 0);
    for (std::uint64_t seed : {1ull, 77ull, 123456789ull}) {
        CHECK(order_by_score(scores, false, seed) == base);
    }
}

TEST_CASE("same seed reproduces the same tie break, different seeds move ties") {
    const std::vector<double> tied(8, 1.0);
    const auto a = order_by_score(tied, false, 99);
    const auto b = order_by_score(tied, false, 99);
    CHECK(a == b);
    bool any_difference = false;
    for (std::uint64_t seed = 0; seed < 20 && !any_difference; ++seed) {
        any_difference = order_by_score(tied, false, seed) != a;
    }
    CHECK(any_difference);
}

TEST_CASE("tie break seeds separate matches, models, and runs") {
    const auto s = tie_break_seed(0, "match-1", "elo");
    CHECK(tie_break_seed(0, "match-1", "elo") == s);
    CHECK(tie_break_seed(0, "match-2", "elo") != s);
    CHECK(tie_break_seed(0, "match-1", "glicko") != s);
    CHECK(tie_break_seed(1, "match-1", "elo") != s);
}

TEST_CASE("tied scores land uniformly: each of two players first about half the time") {
    const std::vector<double> tied(2, 5.0);
    int first_count = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const auto order =
            order_by_score(tied, false, tie_break_seed(0, "m" + std::to_string(t), "elo"));
        if (order[0] == 0) ++first_count;
    }
    const double frequency = static_cast<double>(first_count) / trials;
    CHECK(frequency > 0.48);
    CHECK(frequency < 0.52);
}

TEST_CASE("partial ties: tied block is shuffled, the rest stays put") {
    // scores: 2.0 at positions 1 and 3, distinct elsewhere
    const std::vector<double> scores = {9.0, 2.0, -1.0, 2.0};
    bool saw_13 = false, saw_31 = false;
    for (int t = 0; t < 200; ++t) {
        const auto order = order_by_score(
            scores, false, tie_break_seed(7, "m" + std::to_string(t), "b2_kd"));
        CHECK(order[0] == 0);
        CHECK(order[3] == 2);
        if (order[1] == 1 && order[2] == 3) saw_13 = true;
        if (order[1] == 3 && order[2] == 1) saw_31 = true;
    }
    CHECK(saw_13);
    CHECK(saw_31);
}

TEST_CASE("feature prediction ranks by the profile value") {
    ProfileStore profiles;
    ParticipantStats stats;
    stats.rank = 2;
    stats.kills = 5;
    PlayerProfile strong;
    strong = update_after_match(strong, stats, 4);
    stats.kills = 1;
    PlayerProfile weak;
    weak = update_after_match(weak, stats, 4);
    profiles["strong"] = strong;
    profiles["weak"] = weak;

    const std::vector<std::string> players = {"weak", "strong"};
    const auto pred = predict_by_feature(players, profiles, Feature::b2_kd, 0, "m1");
    CHECK(pred.match_id == "m1");
    CHECK(pred.model_id == "b2_kd");
    CHECK(pred.ordering == std::vector<std::string>{"strong", "weak"});
}

TEST_CASE("missing players fall back to fresh defaults") {
    ProfileStore profiles;
    ParticipantStats stats;
    stats.rank = 1;
    PlayerProfile veteran;
    veteran = update_after_match(veteran, stats, 4);  // b9 = 25
    profiles["veteran"] = veteran;
    // unknown player scores b9 = 100 (worst); veteran should lead
    const auto pred = predict_by_feature({"nobody", "veteran"}, profiles,
                                         Feature::b9_rank_ratio, 0, "m1");
    CHECK(pred.ordering == std::vector<std::string>{"veteran", "nobody"});

    RatingStore<EloState> elo;
    elo["veteran"] = EloState{1600.0};
    const auto elo_pred = predict_by_rating({"nobody", "veteran"}, elo, 0, "m1");
    CHECK(elo_pred.model_id == "elo");
    CHECK(elo_pred.ordering == std::vector<std::string>{"veteran", "nobody"});
}

TEST_CASE("rating predictions use r, r, and mu respectively") {
    const std::vector<std::string> players = {"a", "b", "c"};
    RatingStore<EloState> elo;
    elo["a"] = {1450.0};
    elo["b"] = {1650.0};
    elo["c"] = {1550.0};
    CHECK(predict_by_rating(players, elo, 0, "m").ordering ==
          std::vector<std::string>{"b", "c", "a"});

    RatingStore<GlickoState> glicko;
    glicko["a"] = {1700.0, 300.0};
    glicko["b"] = {1500.0, 30.0};
    glicko["c"] = {1600.0, 200.0};
    CHECK(predict_by_rating(players, glicko, 0, "m").ordering ==
          std::vector<std::string>{"a", "c", "b"});

    RatingStore<TrueSkillState> ts;
    ts["a"] = {23.0, 2.0};
    ts["b"] = {31.0, 8.0};
    ts["c"] = {27.0, 1.0};
    CHECK(predict_by_rating(players, ts, 0, "m").ordering ==
          std::vector<std::string>{"b", "c", "a"});
}

TEST_CASE("prediction is equivariant under participant reordering") {
    ProfileStore profiles;
    Rng64 rng(33);
    std::vector<std::string> players;
    for (int i = 0; i < 12; ++i) {
        const std::string name = "p" + std::to_string(i);
        players.push_back(name);
        ParticipantStats stats;
        stats.rank = 1 + static_cast<int>(rng.bounded(4));
        stats.kills = 1;
        stats.damage = 101.0 + 7.0 * i;  // all scores distinct
        PlayerProfile p;
        profiles[name] = update_after_match(p, stats, 4);
    }
    const auto base = predict_by_feature(players, profiles, Feature::b3_accuracy, 5, "m");
    std::vector<std::string> shuffled = players;
    shuffle_range(shuffled, rng);
    const auto moved = predict_by_feature(shuffled, profiles, Feature::b3_accuracy, 5, "m");
    CHECK(moved.ordering == base.ordering);  // same names, same predicted order
}

TEST_CASE("predictions need at least two participants") {
    ProfileStore profiles;
    CHECK_THROWS_AS(predict_by_feature({"solo"}, profiles, Feature::b1_games, 0, "m"),
                    ContractError);
}
