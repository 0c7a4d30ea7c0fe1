#pragma once

#include <iosfwd>

#include "ffarank/evaluate.hpp"
#include "ffarank/predict.hpp"

namespace ffarank {

// One player per line, every accumulator field; importable for checkpoints.
void write_profiles_jsonl(std::ostream& out, const PlayerIndex& index,
                          const std::vector<PlayerProfile>& profiles);
ProfileStore read_profiles_jsonl(std::istream& in);

// One line per (player, system): {"player_id", "system", system fields}.
void write_ratings_jsonl(std::ostream& out, const FinalStates& states);

}  // namespace ffarank
