#include "ffarank/snapshots.hpp"

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ffarank/common.hpp"

namespace ffarank {

using nlohmann::json;

void write_profiles_jsonl(std::ostream& out, const PlayerIndex& index,
                          const std::vector<PlayerProfile>& profiles) {
    for (std::uint32_t id = 0; id < profiles.size(); ++id) {
        const PlayerProfile& p = profiles[id];
        json row{{"player_id", index.name_of(id)}, {"games", p.games},
                 {"wins", p.wins},                 {"kills", p.kills},
                 {"damage", p.damage},             {"walk_m", p.walk_m},
                 {"ride_m", p.ride_m},             {"survive_s", p.survive_s},
                 {"rank_pct_sum", p.rank_pct_sum}};
        out << row.dump() << '\n';
    }
}

ProfileStore read_profiles_jsonl(std::istream& in) {
    ProfileStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError("profiles line " + std::to_string(line_no) + ": " + e.what());
        }
        PlayerProfile p;
        p.games = row.at("games").get<std::int64_t>();
        p.wins = row.at("wins").get<std::int64_t>();
        p.kills = row.at("kills").get<std::int64_t>();
        p.damage = row.at("damage").get<double>();
        p.walk_m = row.at("walk_m").get<double>();
        p.ride_m = row.at("ride_m").get<double>();
        p.survive_s = row.at("survive_s").get<double>();
        p.rank_pct_sum = row.at("rank_pct_sum").get<double>();
        store[row.at("player_id").get<std::string>()] = p;
    }
    return store;
}

void write_ratings_jsonl(std::ostream& out, const FinalStates& states) {
    for (std::uint32_t id = 0; id < states.index.size(); ++id) {
        const std::string& name = states.index.name_of(id);
        out << json{{"player_id", name}, {"system", "elo"}, {"r", states.elo[id].r}}.dump()
            << '\n';
        out << json{{"player_id", name},
                    {"system", "glicko"},
                    {"r", states.glicko[id].r},
                    {"rd", states.glicko[id].rd}}
                   .dump()
            << '\n';
        out << json{{"player_id", name},
                    {"system", "trueskill"},
                    {"mu", states.trueskill[id].mu},
                    {"sigma", states.trueskill[id].sigma}}
                   .dump()
            << '\n';
    }
}

}  // namespace ffarank
