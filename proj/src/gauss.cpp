#include "ffarank/gauss.hpp"

#include "ffarank/common.hpp"

namespace ffarank {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kSqrt2 = 1.4142135623730950488;

// Mills ratio pdf(x)/cdf(x) for x << 0 via the divergent asymptotic series;
// direct evaluation dies once cdf underflows (x < ~-38).
double v_win_asymptotic(double t) {
    const double u = 1.0 / (t * t);
    const double series = 1.0 - u * (1.0 - u * (3.0 - u * (15.0 - 105.0 * u)));
    return -t / series;
}

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_ppf(double p) {
    require(p > 0.0 && p < 1.0, "normal_ppf needs p in (0, 1)");
    // Acklam's rational approximation, then one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double v_win(double t) {
    if (t < -20.0) return v_win_asymptotic(t);
    return normal_pdf(t) / normal_cdf(t);
}

double w_win(double t) {
    const double v = v_win(t);
    return v * (v + t);
}

double v_draw(double t, double margin) {
    const double abs_t = std::abs(t);
    const double a = margin - abs_t;
    const double b = -margin - abs_t;
    const double denom = normal_cdf(a) - normal_cdf(b);
    double v;
    if (denom < 1e-300) {
        v = margin - abs_t;  // mass collapses onto the near edge of the window
    } else {
        v = (normal_pdf(b) - normal_pdf(a)) / denom;
    }
    return t < 0.0 ? -v : v;
}

double w_draw(double t, double margin) {
    const double abs_t = std::abs(t);
    const double a = margin - abs_t;
    const double b = -margin - abs_t;
    const double denom = normal_cdf(a) - normal_cdf(b);
    if (denom < 1e-300) return 1.0;
    const double v = v_draw(abs_t, margin);
    return v * v + (a * normal_pdf(a) - b * normal_pdf(b)) / denom;
}

double draw_margin(double draw_prob, double beta, int pair_size) {
    require(draw_prob >= 0.0 && draw_prob < 1.0, "draw_prob outside [0, 1)");
    require(beta > 0.0 && pair_size > 0, "draw_margin needs positive beta and pair_size");
    if (draw_prob == 0.0) return 0.0;
    return normal_ppf(0.5 * (draw_prob + 1.0)) * std::sqrt(static_cast<double>(pair_size)) * beta;
}

}  // namespace ffarank
