#pragma once

#include <cmath>

namespace ffarank {

double normal_pdf(double x);
double normal_cdf(double x);
// Inverse of normal_cdf, refined to full double precision. p in (0, 1).
double normal_ppf(double p);

// One-dimensional Gaussian in natural parameters: pi = 1/sigma^2,
// tau = mu/sigma^2. pi == 0 is the improper uniform message.
struct Gaussian {
    double pi = 0.0;
    double tau = 0.0;

    static Gaussian from_mu_sigma(double mu, double sigma) {
        const double p = 1.0 / (sigma * sigma);
        return Gaussian{p, p * mu};
    }
    static Gaussian from_pi_tau(double pi, double tau) { return Gaussian{pi, tau}; }

    double mu() const { return pi == 0.0 ? 0.0 : tau / pi; }
    double variance() const { return 1.0 / pi; }
    double sigma() const { return std::sqrt(1.0 / pi); }

    Gaussian operator*(const Gaussian& o) const { return {pi + o.pi, tau + o.tau}; }
    Gaussian operator/(const Gaussian& o) const { return {pi - o.pi, tau - o.tau}; }
};

// Moment-matching corrections for a Gaussian truncated to a win
// (x > margin... expressed on the normalized scale, margin already folded
// into t) or to a draw window [-margin, margin].
//
// v_win(t) = pdf(t) / cdf(t), w_win(t) = v * (v + t); both stay finite for
// t down to -40 via an asymptotic expansion of the Mills ratio.
double v_win(double t);
double w_win(double t);
double v_draw(double t, double margin);
double w_draw(double t, double margin);

// Margin such that two equal players draw with probability draw_prob when
// their performance gap has standard deviation sqrt(pair_size) * beta.
double draw_margin(double draw_prob, double beta, int pair_size = 2);

}  // namespace ffarank
