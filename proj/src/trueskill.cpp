#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ffarank/common.hpp"
#include "ffarank/gauss.hpp"
#include "ffarank/rating.hpp"

namespace ffarank {
namespace {

double message_delta(const Gaussian& a, const Gaussian& b) {
    return std::max(std::abs(a.tau - b.tau), std::sqrt(std::abs(a.pi - b.pi)));
}

// Belief + per-factor message bookkeeping for one variable endpoint.
void set_message(Gaussian& value, Gaussian& slot, const Gaussian& msg) {
    value = value / slot * msg;
    slot = msg;
}

double set_value(Gaussian& value, Gaussian& slot, const Gaussian& next) {
    slot = next / value * slot;
    const double delta = message_delta(next, value);
    value = next;
    return delta;
}

Gaussian context(const Gaussian& value, const Gaussian& slot) { return value / slot; }

}  // namespace

bool trueskill_update_ffa(std::span<const TrueSkillState> states, std::span<const int> ranks,
                          const RatingConfig& cfg, std::span<TrueSkillState> out) {
    require(states.size() == ranks.size() && states.size() == out.size(),
            "states/ranks/out lengths differ");
    const std::size_t n = states.size();
    require(n >= 2, "trueskill update needs at least 2 players");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });

    const double beta2 = cfg.ts_beta * cfg.ts_beta;
    const double eps = draw_margin(cfg.ts_draw_prob, cfg.ts_beta);

    // Chain of variables: skill_i -> perf_i -> diff_k = perf[order[k]] -
    // perf[order[k+1]], diff_k truncated to a win (or draw on tied ranks).
    std::vector<Gaussian> s_val(n), s_msg_lik(n);
    std::vector<Gaussian> p_val(n), p_msg_lik(n);
    const std::size_t K = n - 1;
    std::vector<Gaussian> p_msg_left(K), p_msg_right(K);  // diff_k -> left/right perf
    std::vector<Gaussian> d_val(K), d_msg_diff(K), d_msg_trunc(K);

    for (std::size_t i = 0; i < n; ++i) {
        const double sigma2 = states[i].sigma * states[i].sigma + cfg.ts_tau * cfg.ts_tau;
        s_val[i] = Gaussian::from_mu_sigma(states[i].mu, std::sqrt(sigma2));
    }

    auto lik_down = [&](std::size_t i) {
        const Gaussian y = s_val[i];
        const Gaussian fy = s_msg_lik[i];
        const double a = 1.0 / (1.0 + beta2 * (y.pi - fy.pi));
        set_message(p_val[i], p_msg_lik[i], Gaussian{a * (y.pi - fy.pi), a * (y.tau - fy.tau)});
    };
    auto lik_up = [&](std::size_t i) {
        const Gaussian x = p_val[i];
        const Gaussian fx = p_msg_lik[i];
        const double a = 1.0 / (1.0 + beta2 * (x.pi - fx.pi));
        set_message(s_val[i], s_msg_lik[i], Gaussian{a * (x.pi - fx.pi), a * (x.tau - fx.tau)});
    };
    auto diff_down = [&](std::size_t k) {
        const Gaussian l = context(p_val[order[k]], p_msg_left[k]);
        const Gaussian r = context(p_val[order[k + 1]], p_msg_right[k]);
        const double pi = 1.0 / (1.0 / l.pi + 1.0 / r.pi);
        set_message(d_val[k], d_msg_diff[k], Gaussian{pi, pi * (l.mu() - r.mu())});
    };
    auto diff_up_left = [&](std::size_t k) {  // left = diff + right
        const Gaussian d = context(d_val[k], d_msg_diff[k]);
        const Gaussian r = context(p_val[order[k + 1]], p_msg_right[k]);
        const double pi = 1.0 / (1.0 / d.pi + 1.0 / r.pi);
        set_message(p_val[order[k]], p_msg_left[k], Gaussian{pi, pi * (d.mu() + r.mu())});
    };
    auto diff_up_right = [&](std::size_t k) {  // right = left - diff
        const Gaussian d = context(d_val[k], d_msg_diff[k]);
        const Gaussian l = context(p_val[order[k]], p_msg_left[k]);
        const double pi = 1.0 / (1.0 / d.pi + 1.0 / l.pi);
        set_message(p_val[order[k + 1]], p_msg_right[k], Gaussian{pi, pi * (l.mu() - d.mu())});
    };
    auto trunc_up = [&](std::size_t k) {
        const Gaussian div = context(d_val[k], d_msg_trunc[k]);
        const double sqrt_pi = std::sqrt(div.pi);
        const double t = div.tau / sqrt_pi;
        const double e = eps * sqrt_pi;
        const bool draw = ranks[order[k]] == ranks[order[k + 1]];
        const double v = draw ? v_draw(t, e) : v_win(t - e);
        const double w = draw ? w_draw(t, e) : w_win(t - e);
        const double denom = 1.0 - w;
        const Gaussian next{div.pi / denom, (div.tau + sqrt_pi * v) / denom};
        return set_value(d_val[k], d_msg_trunc[k], next);
    };

    for (std::size_t i = 0; i < n; ++i) lik_down(i);

    bool converged = false;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        double delta = 0.0;
        if (K == 1) {
            diff_down(0);
            delta = trunc_up(0);
        } else {
            for (std::size_t z = 0; z + 1 < K; ++z) {
                diff_down(z);
                delta = std::max(delta, trunc_up(z));
                diff_up_right(z);
            }
            for (std::size_t z = K - 1; z >= 1; --z) {
                diff_down(z);
                delta = std::max(delta, trunc_up(z));
                diff_up_left(z);
            }
        }
        if (delta <= cfg.convergence_tol) {
            converged = true;
            break;
        }
    }
    diff_up_left(0);
    diff_up_right(K - 1);
    for (std::size_t i = 0; i < n; ++i) lik_up(i);

    for (std::size_t i = 0; i < n; ++i) {
        out[i].mu = s_val[i].mu();
        out[i].sigma = s_val[i].sigma();
    }
    return converged;
}

}  // namespace ffarank
