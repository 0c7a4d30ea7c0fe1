#include "ffarank/telemetry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ffarank/common.hpp"

namespace ffarank {
namespace {

// Howard Hinnant's days_from_civil.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_int_field(std::string_view s, int& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_double_field(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

// Splits one CSV record. Supports quoted fields with "" escapes; embedded
// newlines are not supported (rows are read line by line upstream).
bool split_fields(const std::string& line, char delim, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == delim) {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) return false;
    out.push_back(std::move(field));
    return true;
}

struct ColumnIndex {
    int date, game_size, match_id, match_mode, party_size;
    int dist_ride, dist_walk, damage, kills, name, survive, placement;
    std::size_t width;
};

ColumnIndex resolve_columns(const std::vector<std::string>& header, const CsvSpec& spec) {
    auto find = [&](const char* logical) {
        auto it = spec.column_map.find(logical);
        const std::string& wanted = it == spec.column_map.end() ? std::string(logical) : it->second;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == wanted) return static_cast<int>(i);
        }
        throw DataError("missing column '" + wanted + "' in header");
    };
    ColumnIndex ix{};
    ix.date = find(col::kDate);
    ix.game_size = find(col::kGameSize);
    ix.match_id = find(col::kMatchId);
    ix.match_mode = find(col::kMatchMode);
    ix.party_size = find(col::kPartySize);
    ix.dist_ride = find(col::kDistRide);
    ix.dist_walk = find(col::kDistWalk);
    ix.damage = find(col::kDamage);
    ix.kills = find(col::kKills);
    ix.name = find(col::kName);
    ix.survive = find(col::kSurvive);
    ix.placement = find(col::kPlacement);
    ix.width = header.size();
    return ix;
}

}  // namespace

std::optional<std::int64_t> parse_timestamp(std::string_view text) {
    // YYYY-MM-DD[{T| }HH:MM:SS[offset]]
    auto digits = [&](std::size_t pos, std::size_t count, int& out) {
        if (pos + count > text.size()) return false;
        out = 0;
        for (std::size_t i = pos; i < pos + count; ++i) {
            const char c = text[i];
            if (c < '0' || c > '9') return false;
            out = out * 10 + (c - '0');
        }
        return true;
    };
    int y, mo, d;
    if (!digits(0, 4, y) || text.size() < 10 || text[4] != '-' || !digits(5, 2, mo) ||
        text[7] != '-' || !digits(8, 2, d)) {
        return std::nullopt;
    }
    if (mo < 1 || mo > 12 || d < 1) return std::nullopt;
    static constexpr int kMonthDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
    if (d > (mo == 2 && leap ? 29 : kMonthDays[mo - 1])) return std::nullopt;
    std::int64_t epoch = days_from_civil(y, mo, d) * 86400;
    std::size_t pos = 10;
    if (pos < text.size()) {
        if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
        ++pos;
        int h, mi, s;
        if (!digits(pos, 2, h) || pos + 8 > text.size() || text[pos + 2] != ':' ||
            !digits(pos + 3, 2, mi) || text[pos + 5] != ':' || !digits(pos + 6, 2, s)) {
            return std::nullopt;
        }
        if (h > 23 || mi > 59 || s > 60) return std::nullopt;
        epoch += h * 3600 + mi * 60 + s;
        pos += 8;
        if (pos < text.size()) {
            if (text[pos] == 'Z' && pos + 1 == text.size()) return epoch;
            const char sign = text[pos];
            if (sign != '+' && sign != '-') return std::nullopt;
            ++pos;
            int oh, om;
            if (!digits(pos, 2, oh)) return std::nullopt;
            pos += 2;
            if (pos < text.size() && text[pos] == ':') ++pos;
            if (!digits(pos, 2, om) || pos + 2 != text.size()) return std::nullopt;
            const std::int64_t offset = oh * 3600 + om * 60;
            epoch += sign == '+' ? -offset : offset;
        }
    }
    return epoch;
}

void parse_rows(std::istream& in, const CsvSpec& spec, const RowSink& on_row,
                const ErrorSink& on_error, IngestCounters& counters) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty input: no header line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    if (!split_fields(line, spec.delimiter, fields)) throw DataError("malformed header line");
    const ColumnIndex ix = resolve_columns(fields, spec);

    std::size_t line_no = 1;
    auto fail = [&](std::string msg) {
        ++counters.row_errors;
        on_error(RowError{line_no, std::move(msg)});
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!split_fields(line, spec.delimiter, fields)) {
            fail("unterminated quote");
            continue;
        }
        if (fields.size() != ix.width) {
            fail("expected " + std::to_string(ix.width) + " fields, got " +
                 std::to_string(fields.size()));
            continue;
        }
        RawRow row;
        const auto ts = parse_timestamp(fields[static_cast<std::size_t>(ix.date)]);
        if (!ts) {
            fail("bad date '" + fields[static_cast<std::size_t>(ix.date)] + "'");
            continue;
        }
        row.date_epoch_s = *ts;
        row.match_id = fields[static_cast<std::size_t>(ix.match_id)];
        row.match_mode = fields[static_cast<std::size_t>(ix.match_mode)];
        row.player_name = fields[static_cast<std::size_t>(ix.name)];
        if (row.match_id.empty() || row.player_name.empty()) {
            fail("empty match_id or player_name");
            continue;
        }
        bool ok = parse_int_field(fields[static_cast<std::size_t>(ix.game_size)], row.game_size) &&
                  parse_int_field(fields[static_cast<std::size_t>(ix.party_size)], row.party_size) &&
                  parse_int_field(fields[static_cast<std::size_t>(ix.kills)], row.kills) &&
                  parse_int_field(fields[static_cast<std::size_t>(ix.placement)], row.team_placement) &&
                  parse_double_field(fields[static_cast<std::size_t>(ix.dist_ride)], row.dist_ride_m) &&
                  parse_double_field(fields[static_cast<std::size_t>(ix.dist_walk)], row.dist_walk_m) &&
                  parse_double_field(fields[static_cast<std::size_t>(ix.damage)], row.damage) &&
                  parse_double_field(fields[static_cast<std::size_t>(ix.survive)], row.survive_s);
        if (!ok) {
            fail("unparseable numeric field");
            continue;
        }
        if (row.game_size < 1 || row.party_size < 1) {
            fail("non-positive game_size or party_size");
            continue;
        }
        if (row.team_placement < 1 || row.team_placement > row.game_size) {
            fail("team_placement " + std::to_string(row.team_placement) + " outside [1, " +
                 std::to_string(row.game_size) + "]");
            continue;
        }
        if (row.kills < 0 || row.damage < 0 || row.dist_walk_m < 0 || row.dist_ride_m < 0 ||
            row.survive_s < 0) {
            fail("negative stat");
            continue;
        }
        ++counters.rows_parsed;
        on_row(std::move(row));
    }
}

ParseResult parse_rows(std::istream& in, const CsvSpec& spec) {
    ParseResult result;
    parse_rows(
        in, spec, [&](RawRow&& r) { result.rows.push_back(std::move(r)); },
        [&](RowError&& e) { result.errors.push_back(std::move(e)); }, result.counters);
    return result;
}

bool SoloFilter::is_solo(const RawRow& row) const {
    if (row.party_size != 1) return false;
    for (const auto& token : team_mode_tokens) {
        if (row.match_mode.find(token) != std::string::npos) return false;
    }
    return true;
}

std::vector<RawRow> filter_solo(std::vector<RawRow> rows, const SoloFilter& filter,
                                IngestCounters& counters) {
    auto kept = std::stable_partition(rows.begin(), rows.end(),
                                      [&](const RawRow& r) { return filter.is_solo(r); });
    counters.non_solo_dropped += static_cast<std::size_t>(rows.end() - kept);
    rows.erase(kept, rows.end());
    return rows;
}

std::vector<MatchRecord> assemble_matches(const std::vector<RawRow>& rows,
                                          IngestCounters& counters,
                                          std::vector<RowError>* warnings) {
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(RowError{0, msg});
    };

    // Group row indices by match_id, preserving first-seen match order.
    std::vector<std::vector<std::size_t>> groups;
    std::unordered_map<std::string, std::size_t> group_of;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto [it, inserted] = group_of.try_emplace(rows[i].match_id, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(i);
    }

    std::vector<MatchRecord> matches;
    matches.reserve(groups.size());
    std::unordered_set<std::string> seen_players;
    for (const auto& group : groups) {
        const RawRow& head = rows[group.front()];
        MatchRecord match;
        match.match_id = head.match_id;
        match.timestamp = head.date_epoch_s;
        match.game_size = head.game_size;

        seen_players.clear();
        std::vector<std::size_t> kept;
        for (std::size_t i : group) {
            const RawRow& row = rows[i];
            if (!seen_players.insert(row.player_name).second) {
                ++counters.duplicate_rows;
                warn("match " + match.match_id + ": duplicate row for player " + row.player_name);
                continue;
            }
            if (row.team_placement < 1 || row.team_placement > match.game_size) {
                ++counters.bad_rank_dropped;
                warn("match " + match.match_id + ": player " + row.player_name + " rank " +
                     std::to_string(row.team_placement) + " outside [1, game_size]");
                continue;
            }
            kept.push_back(i);
        }

        // Shrink until every kept rank fits in [1, n]: keep the k lowest-ranked
        // participants for the largest k whose k-th smallest rank is <= k.
        std::vector<std::size_t> by_rank(kept.size());
        std::iota(by_rank.begin(), by_rank.end(), 0u);
        std::stable_sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
            return rows[kept[a]].team_placement < rows[kept[b]].team_placement;
        });
        std::size_t n = kept.size();
        while (n > 0 &&
               rows[kept[by_rank[n - 1]]].team_placement > static_cast<int>(n)) {
            --n;
        }
        if (n < kept.size()) {
            counters.bad_rank_dropped += kept.size() - n;
            warn("match " + match.match_id + ": dropped " + std::to_string(kept.size() - n) +
                 " participants with ranks beyond field size");
            std::vector<bool> keep_flag(kept.size(), false);
            for (std::size_t j = 0; j < n; ++j) keep_flag[by_rank[j]] = true;
            std::vector<std::size_t> filtered;
            filtered.reserve(n);
            for (std::size_t j = 0; j < kept.size(); ++j) {
                if (keep_flag[j]) filtered.push_back(kept[j]);
            }
            kept = std::move(filtered);
        }

        if (kept.size() < 2) {
            ++counters.undersized_matches;
            warn("match " + match.match_id + ": fewer than 2 usable participants, discarded");
            continue;
        }

        match.participants.reserve(kept.size());
        for (std::size_t i : kept) {
            const RawRow& row = rows[i];
            ParticipantStats p;
            p.player_id = row.player_name;
            p.rank = row.team_placement;
            p.kills = row.kills;
            p.damage = row.damage;
            p.walk_m = row.dist_walk_m;
            p.ride_m = row.dist_ride_m;
            p.survive_s = row.survive_s;
            match.participants.push_back(std::move(p));
        }
        matches.push_back(std::move(match));
    }
    return matches;
}

void sort_chronological(std::vector<MatchRecord>& matches) {
    std::stable_sort(matches.begin(), matches.end(),
                     [](const MatchRecord& a, const MatchRecord& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.match_id < b.match_id;
                     });
}

}  // namespace ffarank
