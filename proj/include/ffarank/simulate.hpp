#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ffarank {

struct SyntheticSpec {
    int n_players = 1000;
    int n_matches = 5000;
    int players_per_match = 20;
    double latent_skill_stddev = 1.0;
    double performance_noise = 1.0;
    std::uint64_t seed = 0;

    void validate() const;  // DataError on violation
};

struct SyntheticDataset {
    std::vector<std::string> player_names;  // index-aligned with latent_skill
    std::vector<double> latent_skill;
    std::string csv;  // telemetry file in the ingest schema, chronological
};

// Latent skill per player ~ N(0, skill_stddev); per match a uniform distinct
// player sample, observed rank = descending (skill + N(0, noise)); the
// telemetry stats are simple monotone functions of the performance
// percentile plus per-player movement archetypes. Fully determined by seed.
SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace ffarank
