#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ffarank {

// One telemetry line from an aggregate match-stats file.
struct RawRow {
    std::int64_t date_epoch_s = 0;  // UTC
    int game_size = 0;
    std::string match_id;
    std::string match_mode;
    int party_size = 0;
    double dist_ride_m = 0.0;
    double dist_walk_m = 0.0;
    double damage = 0.0;
    int kills = 0;
    std::string player_name;
    double survive_s = 0.0;
    int team_placement = 0;
};

struct ParticipantStats {
    std::string player_id;
    int rank = 0;  // 1 = winner
    int kills = 0;
    double damage = 0.0;
    double walk_m = 0.0;
    double ride_m = 0.0;
    double survive_s = 0.0;
};

struct MatchRecord {
    std::string match_id;
    std::int64_t timestamp = 0;
    int game_size = 0;
    std::vector<ParticipantStats> participants;  // n >= 2, every rank in [1, n]
};

// Logical field names used by the parser. column_map maps these to the
// header names actually present in the file.
namespace col {
inline constexpr const char* kDate = "date";
inline constexpr const char* kGameSize = "game_size";
inline constexpr const char* kMatchId = "match_id";
inline constexpr const char* kMatchMode = "match_mode";
inline constexpr const char* kPartySize = "party_size";
inline constexpr const char* kDistRide = "player_dist_ride";
inline constexpr const char* kDistWalk = "player_dist_walk";
inline constexpr const char* kDamage = "player_dmg";
inline constexpr const char* kKills = "player_kills";
inline constexpr const char* kName = "player_name";
inline constexpr const char* kSurvive = "player_survive_time";
inline constexpr const char* kPlacement = "team_placement";
}  // namespace col

struct CsvSpec {
    char delimiter = ',';
    // logical name -> header name; unmapped logical names default to themselves
    std::unordered_map<std::string, std::string> column_map;
};

struct RowError {
    std::size_t line_no = 0;  // 1-based, header is line 1
    std::string message;
};

struct IngestCounters {
    std::size_t rows_parsed = 0;
    std::size_t row_errors = 0;
    std::size_t non_solo_dropped = 0;
    std::size_t duplicate_rows = 0;
    std::size_t bad_rank_dropped = 0;
    std::size_t undersized_matches = 0;

    IngestCounters& operator+=(const IngestCounters& o) {
        rows_parsed += o.rows_parsed;
        row_errors += o.row_errors;
        non_solo_dropped += o.non_solo_dropped;
        duplicate_rows += o.duplicate_rows;
        bad_rank_dropped += o.bad_rank_dropped;
        undersized_matches += o.undersized_matches;
        return *this;
    }
};

// "2018-01-01", "2018-01-01 13:59:40", "2018-01-01T13:59:40+0000" (UTC).
std::optional<std::int64_t> parse_timestamp(std::string_view text);

using RowSink = std::function<void(RawRow&&)>;
using ErrorSink = std::function<void(RowError&&)>;

// Streams rows out of delimiter-separated text with a header line. Malformed
// lines go to on_error with their line number; parsing continues. A header
// missing a mapped column is fatal (DataError).
void parse_rows(std::istream& in, const CsvSpec& spec, const RowSink& on_row,
                const ErrorSink& on_error, IngestCounters& counters);

struct ParseResult {
    std::vector<RawRow> rows;
    std::vector<RowError> errors;
    IngestCounters counters;
};

ParseResult parse_rows(std::istream& in, const CsvSpec& spec = {});

struct SoloFilter {
    // Rows whose match_mode contains one of these tokens are team matches.
    std::vector<std::string> team_mode_tokens = {"duo", "squad"};

    bool is_solo(const RawRow& row) const;
};

std::vector<RawRow> filter_solo(std::vector<RawRow> rows, const SoloFilter& filter,
                                IngestCounters& counters);

// Groups solo rows by match_id into validated MatchRecords. Duplicate
// (match_id, player) rows collapse to the first occurrence; participants with
// inconsistent ranks are dropped until every kept rank fits in [1, n]; groups
// left with n < 2 are discarded. All drops are counted and reported.
std::vector<MatchRecord> assemble_matches(const std::vector<RawRow>& rows,
                                          IngestCounters& counters,
                                          std::vector<RowError>* warnings = nullptr);

// Stable ascending (timestamp, match_id) order.
void sort_chronological(std::vector<MatchRecord>& matches);

}  // namespace ffarank
