#include "lyricsim/statistics.hpp"

#include "lyricsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lyricsim {

namespace {

double beta_continued_fraction(double a, double b, double x)
{
    constexpr int kMaxIterations = 10000;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) return h;
    }
    throw Error(ErrorCode::ConvergenceFailure, "incomplete beta continued fraction did not converge");
}

} // namespace

double incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::DegenerateInput, "incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // the fraction converges fast on this side of the mean; use symmetry otherwise
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df)
{
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double t2 = t * t;
    // near zero df/(df+t^2) rounds to 1; go through the complement instead
    const double tail = t2 < df ? 0.5 * (1.0 - incomplete_beta(0.5, 0.5 * df, t2 / (df + t2)))
                                : 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t2));
    return t > 0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df)
{
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::DegenerateInput, "quantile level must be in (0, 1)");
    double lo = -1.0;
    double hi = 1.0;
    while (student_t_cdf(lo, df) > p) lo *= 2.0;
    while (student_t_cdf(hi, df) < p) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, df) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DegenerateInput, "pearson inputs differ in length");
    }
    const std::size_t n = x.size();
    if (n < 3) {
        throw Error(ErrorCode::DegenerateInput, "pearson needs at least 3 samples, got " + std::to_string(n));
    }
    long double mx = 0.0L;
    long double my = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<long double>(n);
    my /= static_cast<long double>(n);
    long double sxy = 0.0L;
    long double sxx = 0.0L;
    long double syy = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0L || syy == 0.0L) {
        throw Error(ErrorCode::DegenerateInput, "pearson input has zero variance");
    }
    const auto r = static_cast<double>(sxy / std::sqrt(sxx * syy));
    return std::clamp(r, -1.0, 1.0);
}

double p_value(double r, std::size_t n)
{
    if (n < 3) throw Error(ErrorCode::InsufficientSamples, "p-value needs n >= 3, got " + std::to_string(n));
    if (!(std::abs(r) <= 1.0)) throw Error(ErrorCode::DegenerateInput, "|r| must not exceed 1");
    if (std::abs(r) == 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    // two-sided tail of t = r sqrt(df / (1 - r^2)) is I_{df/(df+t^2)}(df/2, 1/2),
    // and df/(df+t^2) simplifies to 1 - r^2
    return std::clamp(incomplete_beta(0.5 * df, 0.5, 1.0 - r * r), 0.0, 1.0);
}

CorrelationResult correlate(std::span<const double> x, std::span<const double> y)
{
    CorrelationResult out;
    out.r = pearson(x, y);
    out.n = x.size();
    out.p = p_value(out.r, out.n);
    return out;
}

RankSummary summarize_ranks(std::span<const double> ranks)
{
    const std::size_t n = ranks.size();
    if (n < 2) throw Error(ErrorCode::InsufficientSamples, "rank summary needs at least 2 ranks");
    double mean = 0.0;
    for (double r : ranks) mean += r;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double r : ranks) ss += (r - mean) * (r - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double half = student_t_quantile(0.975, static_cast<double>(n - 1)) * sd / std::sqrt(static_cast<double>(n));
    return {mean, mean - half, mean + half, n};
}

} // namespace lyricsim
