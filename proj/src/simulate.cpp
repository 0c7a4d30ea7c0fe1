#include "ffarank/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ffarank/common.hpp"

namespace ffarank {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double normal_draw(Rng64& rng) {
    const double u1 = 1.0 - rng.uniform01();  // (0, 1], keeps log finite
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::string padded_label(char prefix, int value, int width) {
    std::string digits = std::to_string(value);
    if (static_cast<int>(digits.size()) < width) {
        digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    }
    return prefix + digits;
}

std::string format3(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", x);
    return buf;
}

int digits_of(int n) {
    int d = 1;
    while (n >= 10) {
        n /= 10;
        ++d;
    }
    return d;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (n_players < 2) throw DataError("n_players must be >= 2");
    if (n_matches < 1) throw DataError("n_matches must be >= 1");
    if (players_per_match < 2) throw DataError("players_per_match must be >= 2");
    if (players_per_match > n_players) {
        throw DataError("players_per_match exceeds n_players");
    }
    if (!(performance_noise > 0.0)) throw DataError("performance_noise must be > 0");
    if (latent_skill_stddev < 0.0) throw DataError("latent_skill_stddev must be >= 0");
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    Rng64 rng(spec.seed);

    SyntheticDataset out;
    const int name_width = digits_of(spec.n_players - 1);
    out.player_names.reserve(static_cast<std::size_t>(spec.n_players));
    out.latent_skill.reserve(static_cast<std::size_t>(spec.n_players));
    for (int i = 0; i < spec.n_players; ++i) {
        out.player_names.push_back(padded_label('p', i, name_width));
        out.latent_skill.push_back(spec.latent_skill_stddev * normal_draw(rng));
    }

    out.csv =
        "date,game_size,match_id,match_mode,party_size,player_dist_ride,player_dist_walk,"
        "player_dmg,player_kills,player_name,player_survive_time,team_id,team_placement\n";

    const int match_width = digits_of(spec.n_matches - 1);
    const int n = spec.players_per_match;
    std::vector<int> pool(static_cast<std::size_t>(spec.n_players));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::pair<double, int>> perf(static_cast<std::size_t>(n));

    // 2018-01-01T00:00:00Z, one match per minute.
    const std::int64_t base_epoch = 17532 * 86400;
    for (int m = 0; m < spec.n_matches; ++m) {
        // Partial Fisher-Yates: the first n slots become the match roster.
        for (int i = 0; i < n; ++i) {
            const auto j =
                i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(spec.n_players - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        }
        for (int i = 0; i < n; ++i) {
            const int player = pool[static_cast<std::size_t>(i)];
            const double p =
                out.latent_skill[static_cast<std::size_t>(player)] +
                spec.performance_noise * normal_draw(rng);
            perf[static_cast<std::size_t>(i)] = {p, player};
        }
        std::sort(perf.begin(), perf.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        const std::int64_t epoch = base_epoch + static_cast<std::int64_t>(m) * 60;
        const std::int64_t day = epoch / 86400;
        const std::int64_t sec = epoch % 86400;
        // civil date from day count (valid for the narrow 2018+ range used here)
        std::int64_t z = day + 719468;
        const std::int64_t era = z / 146097;
        const auto doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const auto y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        const unsigned d = doy - (153 * mp + 2) / 5 + 1;
        const unsigned month = mp < 10 ? mp + 3 : mp - 9;
        char date_buf[40];
        std::snprintf(date_buf, sizeof(date_buf), "%04d-%02u-%02uT%02d:%02d:%02d+0000",
                      month <= 2 ? y + 1 : y, month, d, static_cast<int>(sec / 3600),
                      static_cast<int>(sec % 3600 / 60), static_cast<int>(sec % 60));

        const std::string match_id = padded_label('m', m, match_width);
        for (int rank = 1; rank <= n; ++rank) {
            const int player = perf[static_cast<std::size_t>(rank - 1)].second;
            const double q = static_cast<double>(n - rank) / (n - 1);  // 1 = best
            const int kills = static_cast<int>(q * 10.0 + 1e-9);
            const double damage = 1200.0 * q;
            const double survive = 60.0 + 1740.0 * q;
            const int archetype = player % 3;  // 0 camper, 1 walker, 2 rider
            const double walk = (archetype == 1 ? 2200.0 : 320.0) * q + 45.0;
            const double ride = archetype == 2 ? 2800.0 * q : 0.0;

            out.csv += date_buf;
            out.csv += ',';
            out.csv += std::to_string(n);
            out.csv += ',';
            out.csv += match_id;
            out.csv += ",solo,1,";
            out.csv += format3(ride);
            out.csv += ',';
            out.csv += format3(walk);
            out.csv += ',';
            out.csv += format3(damage);
            out.csv += ',';
            out.csv += std::to_string(kills);
            out.csv += ',';
            out.csv += out.player_names[static_cast<std::size_t>(player)];
            out.csv += ',';
            out.csv += format3(survive);
            out.csv += ',';
            out.csv += std::to_string(rank);
            out.csv += ',';
            out.csv += std::to_string(rank);
            out.csv += '\n';
        }
    }
    return out;
}

}  // namespace ffarank
