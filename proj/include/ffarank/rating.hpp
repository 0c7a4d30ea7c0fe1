#pragma once

#include <span>
#include <vector>

namespace ffarank {

struct EloState {
    double r = 1500.0;
};

struct GlickoState {
    double r = 1500.0;
    double rd = 350.0;
};

struct TrueSkillState {
    double mu = 25.0;
    double sigma = 25.0 / 3.0;
};

enum class PairDecomposition {
    all_pairs,  // every opponent, Elo K normalized by (n - 1)
    adjacent,   // rank neighbours only, full K per game
};

struct RatingConfig {
    double elo_k = 32.0;
    double elo_scale = 400.0;
    double glicko_q = 0.005756462732485114;  // ln(10) / 400
    double glicko_rd_min = 30.0;
    double glicko_rd_max = 350.0;
    double ts_beta = 25.0 / 6.0;
    double ts_tau = 25.0 / 300.0;
    double ts_draw_prob = 0.10;
    double convergence_tol = 1e-4;
    int max_iterations = 100;
    PairDecomposition decomposition = PairDecomposition::all_pairs;

    void validate() const;
};

double elo_expected(double r_a, double r_b, double scale);
double glicko_g(double rd, double q = 0.005756462732485114);

// Battle-royale Elo: rank 1 beats everyone, equal ranks draw, all
// expectations taken against the pre-match snapshot. out may alias states.
void elo_update_br(std::span<const EloState> states, std::span<const int> ranks,
                   const RatingConfig& cfg, std::span<EloState> out);

// Battle-royale Glicko-1: one rating period holding the pairwise games
// implied by the ranks; no idle-time RD inflation; rd clamped to
// [rd_min, rd_max].
void glicko_update_br(std::span<const GlickoState> states, std::span<const int> ranks,
                      const RatingConfig& cfg, std::span<GlickoState> out);

// Serial single-thread reference bodies; the unsuffixed entry points run the
// same per-player math under OpenMP and must agree bit for bit.
void elo_update_br_serial(std::span<const EloState> states, std::span<const int> ranks,
                          const RatingConfig& cfg, std::span<EloState> out);
void glicko_update_br_serial(std::span<const GlickoState> states, std::span<const int> ranks,
                             const RatingConfig& cfg, std::span<GlickoState> out);

// Free-for-all TrueSkill via expectation propagation on the chain of
// rank-ordered single-player teams. Returns false when the sweep hit
// max_iterations without the message deltas dropping below convergence_tol
// (posteriors are still written).
bool trueskill_update_ffa(std::span<const TrueSkillState> states, std::span<const int> ranks,
                          const RatingConfig& cfg, std::span<TrueSkillState> out);

}  // namespace ffarank
