#include "ffarank/evaluate.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include "ffarank/common.hpp"

namespace ffarank {
namespace {

double log2_pos(std::size_t k) { return std::log2(static_cast<double>(k)); }

std::string format_fixed1(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", x);
    return buf;
}

std::string format_general(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

// Dense 1-based competition-free ranks: tied observed ranks stay tied, the
// distinct values are renumbered 1..k.
std::vector<int> dense_ranks(std::span<const int> observed) {
    std::vector<int> uniq(observed.begin(), observed.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> out(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) {
        out[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), observed[i]) -
                                  uniq.begin()) + 1;
    }
    return out;
}

struct SetupPlan {
    Setup setup{};
    std::vector<std::uint8_t> member;      // by player id
    int window = 0;                        // contribution window
    std::vector<std::uint8_t> displayed;   // by player id
    std::vector<std::uint32_t> display_ids;
    int traj_window = 0;
    std::size_t cohort_size = 0;
};

std::vector<std::uint32_t> top_by_games(const std::vector<PlayerTally>& tallies,
                                        const PlayerIndex& index,
                                        std::vector<std::uint32_t> pool, int count) {
    std::sort(pool.begin(), pool.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (tallies[a].games != tallies[b].games) return tallies[a].games > tallies[b].games;
        return index.name_of(a) < index.name_of(b);
    });
    if (pool.size() > static_cast<std::size_t>(count)) pool.resize(static_cast<std::size_t>(count));
    return pool;
}

}  // namespace

std::string_view gain_name(GainKind kind) {
    return kind == GainKind::linear ? "linear" : "exponential";
}

GainKind gain_from_name(std::string_view name) {
    if (name == "linear") return GainKind::linear;
    if (name == "exponential") return GainKind::exponential;
    throw DataError("unknown gain '" + std::string(name) + "'");
}

double relevance(GainKind kind, int rank, int n) {
    require(rank >= 1 && rank <= n, "relevance rank outside [1, n]");
    if (kind == GainKind::linear) return static_cast<double>(n - rank);
    return std::ldexp(1.0, 1 - rank);  // 2^(n-rank) / 2^(n-1)
}

double ndcg_from_ranks(std::span<const int> ranks, GainKind kind) {
    const int n = static_cast<int>(ranks.size());
    require(n >= 1, "ndcg needs at least one position");
    std::vector<double> rel(ranks.size());
    double dcg = 0.0;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
        rel[k] = relevance(kind, ranks[k], n);
        dcg += rel[k] / log2_pos(k + 2);
    }
    std::sort(rel.begin(), rel.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t k = 0; k < rel.size(); ++k) idcg += rel[k] / log2_pos(k + 2);
    if (idcg == 0.0) return 1.0;
    return dcg / idcg;
}

double ndcg(const PredictedOrder& predicted,
            const std::vector<std::pair<std::string, int>>& observed, GainSpec gain) {
    require(predicted.ordering.size() == observed.size(),
            "predicted and observed cover different player counts");
    std::unordered_map<std::string, int> rank_of;
    rank_of.reserve(observed.size());
    for (const auto& [player, rank] : observed) {
        require(rank_of.emplace(player, rank).second, "duplicate player in observed ranks");
    }
    std::vector<int> ranks;
    ranks.reserve(predicted.ordering.size());
    for (const auto& player : predicted.ordering) {
        auto it = rank_of.find(player);
        require(it != rank_of.end(), "predicted player missing from observed ranks");
        ranks.push_back(it->second);
    }
    return ndcg_from_ranks(ranks, gain.kind);
}

std::string_view setup_name(Setup s) {
    switch (s) {
        case Setup::all_players: return "all";
        case Setup::top_tier: return "top_tier";
        case Setup::frequent: return "frequent";
    }
    throw ContractError("unknown setup");
}

Setup setup_from_name(std::string_view name) {
    if (name == "all") return Setup::all_players;
    if (name == "top_tier") return Setup::top_tier;
    if (name == "frequent") return Setup::frequent;
    throw DataError("unknown setup '" + std::string(name) + "'");
}

std::vector<PlayerTally> tally_players(const std::vector<MatchRecord>& matches,
                                       PlayerIndex& index) {
    std::vector<PlayerTally> tallies(index.size());
    for (const auto& match : matches) {
        for (const auto& p : match.participants) {
            const std::uint32_t id = index.id_of(p.player_id);
            if (id >= tallies.size()) tallies.resize(index.size());
            tallies[id].games += 1;
            if (p.rank == 1) tallies[id].wins += 1;
        }
    }
    return tallies;
}

std::vector<std::uint32_t> build_top_tier_cohort(const std::vector<PlayerTally>& tallies,
                                                 const PlayerIndex& index, const CohortSpec& spec,
                                                 bool* short_of_quota) {
    std::vector<std::uint32_t> eligible;
    for (std::uint32_t id = 0; id < tallies.size(); ++id) {
        if (tallies[id].games > spec.min_games_top) eligible.push_back(id);
    }
    std::sort(eligible.begin(), eligible.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double wa = tallies[a].win_rate();
        const double wb = tallies[b].win_rate();
        if (wa != wb) return wa > wb;
        if (tallies[a].games != tallies[b].games) return tallies[a].games > tallies[b].games;
        return index.name_of(a) < index.name_of(b);
    });
    if (short_of_quota) *short_of_quota = eligible.size() < static_cast<std::size_t>(spec.top_k);
    if (eligible.size() > static_cast<std::size_t>(spec.top_k)) {
        eligible.resize(static_cast<std::size_t>(spec.top_k));
    }
    return eligible;
}

std::vector<std::uint32_t> build_frequent_cohort(const std::vector<PlayerTally>& tallies,
                                                 const CohortSpec& spec) {
    std::vector<std::uint32_t> cohort;
    for (std::uint32_t id = 0; id < tallies.size(); ++id) {
        if (tallies[id].games > spec.min_games_freq) cohort.push_back(id);
    }
    return cohort;
}

namespace {

std::uint64_t participant_state_hash(const std::vector<std::uint32_t>& ids,
                                     const std::vector<PlayerProfile>& profiles,
                                     const std::vector<EloState>& elo,
                                     const std::vector<GlickoState>& glicko,
                                     const std::vector<TrueSkillState>& ts) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) { h = hash_mix(h ^ v); };
    auto mix_d = [&](double d) { mix(std::bit_cast<std::uint64_t>(d)); };
    for (std::uint32_t id : ids) {
        mix(id);
        const PlayerProfile& p = profiles[id];
        mix(static_cast<std::uint64_t>(p.games));
        mix(static_cast<std::uint64_t>(p.wins));
        mix(static_cast<std::uint64_t>(p.kills));
        mix_d(p.damage);
        mix_d(p.walk_m);
        mix_d(p.ride_m);
        mix_d(p.survive_s);
        mix_d(p.rank_pct_sum);
        mix_d(elo[id].r);
        mix_d(glicko[id].r);
        mix_d(glicko[id].rd);
        mix_d(ts[id].mu);
        mix_d(ts[id].sigma);
    }
    return h;
}

}  // namespace

EngineResult run_setups(const std::vector<MatchRecord>& matches, const std::vector<Setup>& setups,
                        const ExperimentConfig& config, const ScoreSink& sink) {
    config.rating.validate();
    require(!setups.empty(), "run_setups needs at least one setup");
    require(!config.models.empty(), "run_setups needs at least one model");
    for (std::size_t t = 1; t < matches.size(); ++t) {
        require(matches[t - 1].timestamp <= matches[t].timestamp,
                "matches are not in chronological order");
    }

    EngineResult result;

    PlayerIndex index;
    const std::vector<PlayerTally> tallies = tally_players(matches, index);
    const std::size_t n_players = index.size();

    const std::size_t S = setups.size();
    std::vector<SetupPlan> plans(S);
    for (std::size_t s = 0; s < S; ++s) {
        SetupPlan& plan = plans[s];
        plan.setup = setups[s];
        plan.member.assign(n_players, 0);
        switch (setups[s]) {
            case Setup::all_players: {
                std::fill(plan.member.begin(), plan.member.end(), 1);
                plan.window = INT_MAX;
                plan.traj_window = config.window_all;
                plan.cohort_size = n_players;
                std::vector<std::uint32_t> pool(n_players);
                std::iota(pool.begin(), pool.end(), 0u);
                plan.display_ids =
                    top_by_games(tallies, index, std::move(pool), config.display_players);
                break;
            }
            case Setup::top_tier: {
                bool short_quota = false;
                auto cohort = build_top_tier_cohort(tallies, index, config.cohort, &short_quota);
                if (short_quota) {
                    result.warnings.push_back(
                        "top_tier cohort has only " + std::to_string(cohort.size()) +
                        " eligible players (requested " + std::to_string(config.cohort.top_k) + ")");
                }
                for (std::uint32_t id : cohort) plan.member[id] = 1;
                plan.window = config.cohort.window_top;
                plan.traj_window = config.cohort.window_top;
                plan.cohort_size = cohort.size();
                plan.display_ids.assign(
                    cohort.begin(),
                    cohort.begin() + std::min<std::size_t>(
                                         cohort.size(),
                                         static_cast<std::size_t>(config.display_players)));
                break;
            }
            case Setup::frequent: {
                auto cohort = build_frequent_cohort(tallies, config.cohort);
                for (std::uint32_t id : cohort) plan.member[id] = 1;
                plan.window = config.cohort.window_freq;
                plan.traj_window = config.cohort.window_freq;
                plan.cohort_size = cohort.size();
                plan.display_ids =
                    top_by_games(tallies, index, std::move(cohort), config.display_players);
                break;
            }
        }
        plan.displayed.assign(n_players, 0);
        for (std::uint32_t id : plan.display_ids) plan.displayed[id] = 1;
    }

    std::vector<PlayerProfile> profiles(n_players);
    std::vector<EloState> elo(n_players);
    std::vector<GlickoState> glicko(n_players);
    std::vector<TrueSkillState> trueskill(n_players);

    const std::size_t M = config.models.size();
    bool update_elo = false, update_glicko = false, update_ts = false;
    for (ModelId m : config.models) {
        update_elo |= m == ModelId::elo;
        update_glicko |= m == ModelId::glicko;
        update_ts |= m == ModelId::trueskill;
    }

    std::vector<std::vector<double>> sums(S, std::vector<double>(M, 0.0));
    std::vector<std::size_t> counts(S, 0);
    for (std::size_t s = 0; s < S; ++s) {
        result.reports.push_back(ExperimentReport{});
        ExperimentReport& rep = result.reports.back();
        rep.setup = setups[s];
        rep.gain = config.gain;
        rep.scoring = config.scoring;
        rep.cohort_size = plans[s].cohort_size;
        for (std::uint32_t id : plans[s].display_ids) {
            rep.display_players.push_back(index.name_of(id));
        }
    }

    std::vector<std::uint32_t> ids;
    std::vector<int> ranks;
    std::vector<double> full_ndcg(M);
    const bool keep_orders = sink && config.audit_orders;
    std::vector<std::vector<std::uint32_t>> audit(keep_orders ? M : 0);
    std::vector<std::vector<double>> member_ndcg(S, std::vector<double>(M, 0.0));
    // per setup, per participant position: in-window member flag + dense rank
    std::vector<std::vector<std::uint8_t>> member_pos(S);
    std::vector<std::vector<int>> member_dense(S);

    for (std::size_t t = 0; t < matches.size(); ++t) {
        const MatchRecord& match = matches[t];
        const std::size_t n = match.participants.size();
        require(n >= 2, "match with fewer than 2 participants");

        ids.resize(n);
        ranks.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t* id = index.find(match.participants[i].player_id);
            require(id != nullptr, "participant missing from first-pass index");
            ids[i] = *id;
            ranks[i] = match.participants[i].rank;
        }

        // Contribution and member sublists come from pre-match state.
        std::vector<std::uint8_t> contributes(S, 0);
        for (std::size_t s = 0; s < S; ++s) {
            const SetupPlan& plan = plans[s];
            member_pos[s].assign(n, 0);
            bool any = false;
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint32_t id = ids[i];
                if (plan.member[id] && profiles[id].games < plan.window) {
                    member_pos[s][i] = 1;
                    any = true;
                }
            }
            contributes[s] = any ? 1 : 0;
            if (any && config.scoring == CohortScoring::members_only) {
                std::vector<int> observed;
                for (std::size_t i = 0; i < n; ++i) {
                    if (member_pos[s][i]) observed.push_back(ranks[i]);
                }
                member_dense[s] = dense_ranks(observed);
            }
        }

        const std::uint64_t pre_hash =
            participant_state_hash(ids, profiles, elo, glicko, trueskill);

        const auto model_count = static_cast<std::ptrdiff_t>(M);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::ptrdiff_t mi = 0; mi < model_count; ++mi) {
            const auto m = static_cast<std::size_t>(mi);
            const ModelId model = config.models[m];
            std::vector<double> scores(n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint32_t id = ids[i];
                if (is_feature_model(model)) {
                    scores[i] = feature_value(profiles[id], model_feature(model));
                } else if (model == ModelId::elo) {
                    scores[i] = elo[id].r;
                } else if (model == ModelId::glicko) {
                    scores[i] = glicko[id].r;
                } else {
                    scores[i] = trueskill[id].mu;
                }
            }
            auto order = order_by_score(
                scores, model_lower_is_better(model),
                tie_break_seed(config.seed, match.match_id, model_name(model)));
            std::vector<int> predicted_ranks(n);
            for (std::size_t k = 0; k < n; ++k) predicted_ranks[k] = ranks[order[k]];
            full_ndcg[m] = ndcg_from_ranks(predicted_ranks, config.gain);

            if (config.scoring == CohortScoring::members_only) {
                for (std::size_t s = 0; s < S; ++s) {
                    if (!contributes[s]) continue;
                    std::vector<int> sub;
                    std::size_t seen = 0;
                    std::vector<int> dense_by_pos(n, 0);
                    for (std::size_t i = 0; i < n; ++i) {
                        if (member_pos[s][i]) dense_by_pos[i] = member_dense[s][seen++];
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        if (member_pos[s][order[k]]) sub.push_back(dense_by_pos[order[k]]);
                    }
                    member_ndcg[s][m] = ndcg_from_ranks(sub, config.gain);
                }
            }
            if (keep_orders) audit[m] = std::move(order);
        }

        const std::uint64_t post_hash =
            participant_state_hash(ids, profiles, elo, glicko, trueskill);
        if (pre_hash != post_hash) ++result.causality_violations;

        for (std::size_t s = 0; s < S; ++s) {
            if (!contributes[s]) continue;
            ++counts[s];
            for (std::size_t m = 0; m < M; ++m) {
                sums[s][m] += config.scoring == CohortScoring::members_only ? member_ndcg[s][m]
                                                                            : full_ndcg[m];
            }
        }

        if (sink) {
            MatchScores row;
            row.match_id = match.match_id;
            row.match_index = t;
            row.field_size = static_cast<int>(n);
            row.match = &match;
            if (keep_orders) row.orderings = std::move(audit);
            row.scores.resize(S);
            for (std::size_t s = 0; s < S; ++s) {
                if (!contributes[s]) continue;
                row.scores[s].resize(M);
                for (std::size_t m = 0; m < M; ++m) {
                    row.scores[s][m] = config.scoring == CohortScoring::members_only
                                           ? member_ndcg[s][m]
                                           : full_ndcg[m];
                }
            }
            sink(row);
            if (keep_orders) audit.assign(M, {});
        }

        // Updates: profiles first (they also advance the appearance index),
        // then the selected rating systems, each from the frozen snapshot.
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t id = ids[i];
            profiles[id] = update_after_match(profiles[id], match.participants[i],
                                              static_cast<int>(n));
            for (std::size_t s = 0; s < S; ++s) {
                const SetupPlan& plan = plans[s];
                if (plan.displayed[id] && profiles[id].games <= plan.traj_window) {
                    TrajectoryPoint point;
                    point.player_id = match.participants[i].player_id;
                    point.game_index = static_cast<int>(profiles[id].games);
                    for (int f = 0; f < kFeatureCount; ++f) {
                        point.features[static_cast<std::size_t>(f)] =
                            feature_value(profiles[id], static_cast<Feature>(f));
                    }
                    result.reports[s].trajectories.push_back(std::move(point));
                }
            }
        }
        if (update_elo) {
            std::vector<EloState> states(n);
            for (std::size_t i = 0; i < n; ++i) states[i] = elo[ids[i]];
            elo_update_br(states, ranks, config.rating, states);
            for (std::size_t i = 0; i < n; ++i) elo[ids[i]] = states[i];
        }
        if (update_glicko) {
            std::vector<GlickoState> states(n);
            for (std::size_t i = 0; i < n; ++i) states[i] = glicko[ids[i]];
            glicko_update_br(states, ranks, config.rating, states);
            for (std::size_t i = 0; i < n; ++i) glicko[ids[i]] = states[i];
        }
        if (update_ts) {
            std::vector<TrueSkillState> states(n);
            for (std::size_t i = 0; i < n; ++i) states[i] = trueskill[ids[i]];
            if (!trueskill_update_ffa(states, ranks, config.rating, states)) {
                ++result.ts_nonconverged;
            }
            for (std::size_t i = 0; i < n; ++i) trueskill[ids[i]] = states[i];
        }
        ++result.matches_processed;
    }

    for (std::size_t s = 0; s < S; ++s) {
        ExperimentReport& rep = result.reports[s];
        rep.contributing_matches = counts[s];
        rep.empty = counts[s] == 0;
        rep.models.resize(M);
        for (std::size_t m = 0; m < M; ++m) {
            rep.models[m].model = config.models[m];
            rep.models[m].match_count = counts[s];
            rep.models[m].mean_ndcg =
                counts[s] == 0 ? 0.0 : sums[s][m] / static_cast<double>(counts[s]);
        }
    }

    result.final_states.index = std::move(index);
    result.final_states.profiles = std::move(profiles);
    result.final_states.elo = std::move(elo);
    result.final_states.glicko = std::move(glicko);
    result.final_states.trueskill = std::move(trueskill);
    return result;
}

ExperimentReport run_experiment(const std::vector<MatchRecord>& matches, Setup setup,
                                const ExperimentConfig& config, const ScoreSink& sink) {
    EngineResult result = run_setups(matches, {setup}, config, sink);
    return std::move(result.reports.front());
}

std::string summary_csv(const std::vector<ExperimentReport>& reports) {
    std::string out = "setup";
    for (ModelId m : kAllModels) {
        out += ',';
        out += model_name(m);
    }
    out += '\n';
    for (const auto& rep : reports) {
        out += setup_name(rep.setup);
        for (ModelId m : kAllModels) {
            out += ',';
            if (rep.empty) continue;
            for (const auto& summary : rep.models) {
                if (summary.model == m) {
                    out += format_fixed1(summary.mean_ndcg * 100.0);
                    break;
                }
            }
        }
        out += '\n';
    }
    return out;
}

std::string trajectory_csv(const ExperimentReport& report) {
    std::string out = "player_id,game_index";
    for (Feature f : kAllFeatures) {
        out += ',';
        out += feature_name(f);
    }
    out += '\n';
    for (const auto& point : report.trajectories) {
        out += csv_escape(point.player_id);
        out += ',';
        out += std::to_string(point.game_index);
        for (double v : point.features) {
            out += ',';
            out += format_general(v);
        }
        out += '\n';
    }
    return out;
}

}  // namespace ffarank
