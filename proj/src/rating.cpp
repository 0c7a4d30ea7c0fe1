#include "ffarank/rating.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ffarank/common.hpp"

namespace ffarank {
namespace {

constexpr double kPi = 3.14159265358979323846;

double pair_score(int rank_i, int rank_j) {
    if (rank_i < rank_j) return 1.0;
    if (rank_i > rank_j) return 0.0;
    return 0.5;
}

// Positions adjacent in (rank, index) order; the neighbour list for player i
// under the adjacent decomposition.
std::vector<std::vector<int>> adjacent_opponents(std::span<const int> ranks) {
    const int n = static_cast<int>(ranks.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ranks[static_cast<std::size_t>(a)] <
                                                ranks[static_cast<std::size_t>(b)]; });
    std::vector<std::vector<int>> opp(static_cast<std::size_t>(n));
    for (int k = 0; k + 1 < n; ++k) {
        opp[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])].push_back(
            order[static_cast<std::size_t>(k + 1)]);
        opp[static_cast<std::size_t>(order[static_cast<std::size_t>(k + 1)])].push_back(
            order[static_cast<std::size_t>(k)]);
    }
    return opp;
}

double elo_player_update(std::span<const EloState> states, std::span<const int> ranks,
                         const RatingConfig& cfg, const std::vector<std::vector<int>>* adj,
                         std::size_t i) {
    const double r_i = states[i].r;
    const int rank_i = ranks[i];
    double sum = 0.0;
    double gain = cfg.elo_k;
    if (adj == nullptr) {
        for (std::size_t j = 0; j < states.size(); ++j) {
            if (j == i) continue;
            sum += pair_score(rank_i, ranks[j]) - elo_expected(r_i, states[j].r, cfg.elo_scale);
        }
        gain /= static_cast<double>(states.size() - 1);
    } else {
        for (int j : (*adj)[i]) {
            const auto ju = static_cast<std::size_t>(j);
            sum += pair_score(rank_i, ranks[ju]) - elo_expected(r_i, states[ju].r, cfg.elo_scale);
        }
    }
    return r_i + gain * sum;
}

GlickoState glicko_player_update(std::span<const GlickoState> states, std::span<const int> ranks,
                                 const RatingConfig& cfg, const std::vector<std::vector<int>>* adj,
                                 std::size_t i) {
    const double q = cfg.glicko_q;
    const double r_i = states[i].r;
    const int rank_i = ranks[i];
    double g2e_sum = 0.0;  // sum of g^2 E (1-E), builds 1/d^2
    double gse_sum = 0.0;  // sum of g (S - E)
    auto accumulate = [&](std::size_t j) {
        const double g = glicko_g(states[j].rd, q);
        const double e = 1.0 / (1.0 + std::pow(10.0, -g * (r_i - states[j].r) / 400.0));
        g2e_sum += g * g * e * (1.0 - e);
        gse_sum += g * (pair_score(rank_i, ranks[j]) - e);
    };
    if (adj == nullptr) {
        for (std::size_t j = 0; j < states.size(); ++j) {
            if (j != i) accumulate(j);
        }
    } else {
        for (int j : (*adj)[i]) accumulate(static_cast<std::size_t>(j));
    }
    const double inv_d2 = q * q * g2e_sum;
    const double denom = 1.0 / (states[i].rd * states[i].rd) + inv_d2;
    GlickoState next;
    next.r = r_i + q / denom * gse_sum;
    next.rd = std::clamp(std::sqrt(1.0 / denom), cfg.glicko_rd_min, cfg.glicko_rd_max);
    return next;
}

void check_update_args(std::size_t n_states, std::size_t n_ranks, std::size_t n_out) {
    require(n_states == n_ranks && n_states == n_out, "states/ranks/out lengths differ");
    require(n_states >= 2, "rating update needs at least 2 players");
}

}  // namespace

void RatingConfig::validate() const {
    require(elo_k > 0 && elo_scale > 0, "elo constants must be positive");
    require(glicko_q > 0 && glicko_rd_min > 0 && glicko_rd_max >= glicko_rd_min,
            "bad glicko constants");
    require(ts_beta > 0 && ts_tau > 0, "trueskill noise constants must be positive");
    require(ts_draw_prob >= 0 && ts_draw_prob < 1, "ts_draw_prob outside [0, 1)");
    require(convergence_tol > 0 && max_iterations > 0, "bad convergence settings");
}

double elo_expected(double r_a, double r_b, double scale) {
    return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / scale));
}

double glicko_g(double rd, double q) {
    return 1.0 / std::sqrt(1.0 + 3.0 * q * q * rd * rd / (kPi * kPi));
}

void elo_update_br_serial(std::span<const EloState> states, std::span<const int> ranks,
                          const RatingConfig& cfg, std::span<EloState> out) {
    check_update_args(states.size(), ranks.size(), out.size());
    std::vector<EloState> snapshot(states.begin(), states.end());
    std::vector<std::vector<int>> adj;
    const bool all_pairs = cfg.decomposition == PairDecomposition::all_pairs;
    if (!all_pairs) adj = adjacent_opponents(ranks);
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
        out[i].r = elo_player_update(snapshot, ranks, cfg, all_pairs ? nullptr : &adj, i);
    }
}

void elo_update_br(std::span<const EloState> states, std::span<const int> ranks,
                   const RatingConfig& cfg, std::span<EloState> out) {
    check_update_args(states.size(), ranks.size(), out.size());
    std::vector<EloState> snapshot(states.begin(), states.end());
    std::vector<std::vector<int>> adj;
    const bool all_pairs = cfg.decomposition == PairDecomposition::all_pairs;
    if (!all_pairs) adj = adjacent_opponents(ranks);
    const auto n = static_cast<std::ptrdiff_t>(snapshot.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        out[iu].r = elo_player_update(snapshot, ranks, cfg, all_pairs ? nullptr : &adj, iu);
    }
}

void glicko_update_br_serial(std::span<const GlickoState> states, std::span<const int> ranks,
                             const RatingConfig& cfg, std::span<GlickoState> out) {
    check_update_args(states.size(), ranks.size(), out.size());
    std::vector<GlickoState> snapshot(states.begin(), states.end());
    std::vector<std::vector<int>> adj;
    const bool all_pairs = cfg.decomposition == PairDecomposition::all_pairs;
    if (!all_pairs) adj = adjacent_opponents(ranks);
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
        out[i] = glicko_player_update(snapshot, ranks, cfg, all_pairs ? nullptr : &adj, i);
    }
}

void glicko_update_br(std::span<const GlickoState> states, std::span<const int> ranks,
                      const RatingConfig& cfg, std::span<GlickoState> out) {
    check_update_args(states.size(), ranks.size(), out.size());
    std::vector<GlickoState> snapshot(states.begin(), states.end());
    std::vector<std::vector<int>> adj;
    const bool all_pairs = cfg.decomposition == PairDecomposition::all_pairs;
    if (!all_pairs) adj = adjacent_opponents(ranks);
    const auto n = static_cast<std::ptrdiff_t>(snapshot.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        out[iu] = glicko_player_update(snapshot, ranks, cfg, all_pairs ? nullptr : &adj, iu);
    }
}

}  // namespace ffarank
