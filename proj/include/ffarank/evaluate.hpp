#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ffarank/predict.hpp"
#include "ffarank/profile.hpp"
#include "ffarank/rating.hpp"
#include "ffarank/telemetry.hpp"

namespace ffarank {

enum class GainKind { linear, exponential };

struct GainSpec {
    GainKind kind = GainKind::linear;
};

std::string_view gain_name(GainKind kind);
GainKind gain_from_name(std::string_view name);

// linear: n - rank; exponential: 2^(n - rank) / 2^(n - 1).
double relevance(GainKind kind, int rank, int n);

// ranks[k] = observed rank of the player predicted at position k.
double ndcg_from_ranks(std::span<const int> ranks, GainKind kind);

double ndcg(const PredictedOrder& predicted,
            const std::vector<std::pair<std::string, int>>& observed, GainSpec gain);

enum class Setup { all_players = 0, top_tier, frequent };
inline constexpr int kSetupCount = 3;

std::string_view setup_name(Setup s);
Setup setup_from_name(std::string_view name);

struct CohortSpec {
    int top_k = 500;
    int min_games_top = 10;   // strict: eligible means games > min_games_top
    int window_top = 10;
    int min_games_freq = 100;  // strict
    int window_freq = 100;
};

struct PlayerTally {
    std::int64_t games = 0;
    std::int64_t wins = 0;

    double win_rate() const { return games == 0 ? 0.0 : static_cast<double>(wins) / games; }
};

// First pass over the stream: interns every player and counts games/wins.
std::vector<PlayerTally> tally_players(const std::vector<MatchRecord>& matches,
                                       PlayerIndex& index);

// Top top_k by win rate among players with games > min_games_top; ties broken
// by more games, then lexicographic name. Sorted best-first. When fewer than
// top_k are eligible, returns them all and sets short_of_quota.
std::vector<std::uint32_t> build_top_tier_cohort(const std::vector<PlayerTally>& tallies,
                                                 const PlayerIndex& index, const CohortSpec& spec,
                                                 bool* short_of_quota = nullptr);

std::vector<std::uint32_t> build_frequent_cohort(const std::vector<PlayerTally>& tallies,
                                                 const CohortSpec& spec);

// match_selection: a cohort member inside its window makes the whole match
// count, scored over the full ordering. members_only: score only the
// in-window members' sub-ordering against their densified observed ranks.
enum class CohortScoring { match_selection, members_only };

struct ExperimentConfig {
    RatingConfig rating;
    GainKind gain = GainKind::linear;
    std::uint64_t seed = 0;
    CohortScoring scoring = CohortScoring::match_selection;
    std::vector<ModelId> models{kAllModels.begin(), kAllModels.end()};
    CohortSpec cohort;
    int display_players = 5;
    int window_all = 100;   // trajectory window for the all-players setup
    bool audit_orders = false;  // hand predicted orderings to the score sink
};

struct TrajectoryPoint {
    std::string player_id;
    int game_index = 0;  // 1-based appearance index for that player
    std::array<double, kFeatureCount> features{};
};

struct ModelSummary {
    ModelId model{};
    double mean_ndcg = 0.0;  // fraction in [0, 1]
    std::size_t match_count = 0;
};

struct ExperimentReport {
    Setup setup{};
    GainKind gain{};
    CohortScoring scoring{};
    std::size_t cohort_size = 0;
    std::size_t contributing_matches = 0;
    bool empty = false;  // no match contributed
    std::vector<ModelSummary> models;
    std::vector<std::string> display_players;
    std::vector<TrajectoryPoint> trajectories;
};

// Per-match scores handed to the sink as the stream advances. scores is
// aligned to (setups, config.models); a non-contributing setup holds an
// empty inner vector. match stays valid only for the duration of the call.
// orderings (participant indices, aligned to config.models) are filled only
// when audit_orders is set.
struct MatchScores {
    std::string match_id;
    std::size_t match_index = 0;
    int field_size = 0;
    std::vector<std::vector<double>> scores;
    const MatchRecord* match = nullptr;
    std::vector<std::vector<std::uint32_t>> orderings;
};

using ScoreSink = std::function<void(const MatchScores&)>;

// End-of-stream state for every player seen, for snapshot export and for
// tests that need the learned ratings.
struct FinalStates {
    PlayerIndex index;
    std::vector<PlayerProfile> profiles;
    std::vector<EloState> elo;
    std::vector<GlickoState> glicko;
    std::vector<TrueSkillState> trueskill;
};

struct EngineResult {
    std::vector<ExperimentReport> reports;  // aligned to the setups argument
    std::size_t matches_processed = 0;
    std::size_t causality_violations = 0;
    std::size_t ts_nonconverged = 0;
    std::vector<std::string> warnings;
    FinalStates final_states;
};

// Streams the chronological match list once with shared evolving state
// (profiles and ratings do not depend on the cohort), scoring every setup in
// the same pass. Predictions for one match all read the frozen pre-match
// state; updates land strictly afterwards, and participant-state hashes
// taken before and after the prediction fan-out count causality violations.
EngineResult run_setups(const std::vector<MatchRecord>& matches, const std::vector<Setup>& setups,
                        const ExperimentConfig& config, const ScoreSink& sink = {});

ExperimentReport run_experiment(const std::vector<MatchRecord>& matches, Setup setup,
                                const ExperimentConfig& config, const ScoreSink& sink = {});

// Summary table: rows = setups, columns = the 12 models, cells = mean NDCG
// as a percentage with 1 decimal.
std::string summary_csv(const std::vector<ExperimentReport>& reports);

// Columns: player_id, game_index, b1..b9.
std::string trajectory_csv(const ExperimentReport& report);

}  // namespace ffarank
