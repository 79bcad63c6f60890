#pragma once

#include <cstddef>
#include <span>

namespace lyricsim {

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// Inverse of student_t_cdf for p in (0, 1), by bracketed bisection.
double student_t_quantile(double p, double df);

/// Sample Pearson r. Throws DegenerateInput on length mismatch, n < 3, or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of r under t = r sqrt(n-2) / sqrt(1-r^2), n-2 degrees of
/// freedom. |r| = 1 gives 0. Throws InsufficientSamples for n < 3.
double p_value(double r, std::size_t n);

struct CorrelationResult {
    double r = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

CorrelationResult correlate(std::span<const double> x, std::span<const double> y);

struct RankSummary {
    double mean = 0.0;
    double lower = 0.0;   ///< mean - t_{0.975,n-1} s / sqrt(n)
    double upper = 0.0;
    std::size_t n = 0;
};

/// Mean with a 95% t-interval. Throws InsufficientSamples for fewer than two values.
RankSummary summarize_ranks(std::span<const double> ranks);

} // namespace lyricsim
