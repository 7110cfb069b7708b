#ifndef MDFS_STATS_HPP
#define MDFS_STATS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mdfs::stats {

// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Chi-squared CDF / survival / log-CDF for real df > 0.
double chi2_cdf(double s, double df);
double chi2_sf(double s, double df);
// ln CDF, computed through the survival function near 1 so that values like
// ln F = -1e-60 keep full relative precision.
double chi2_log_cdf(double s, double df);

// Inverse CDF on p in [0, 1) by bracketed bisection.
double chi2_quantile(double p, double df);

enum class FitMode { raw, exp_family };

// Null model for a max-statistic: CDF(s) = F(s)^m with F the chi-squared CDF
// at `df` degrees of freedom and m the effective number of independent
// tests. raw mode pins m = 1.
struct DistributionFit {
    double df = 1.0;
    double m_hat = 1.0;
    FitMode mode = FitMode::raw;
    std::size_t n_fit = 0;
};

// Maximum-likelihood m for the F^m family: m = -n / sum(ln F(s_i)), with
// ln F clamped to [ln 1e-300, ln(1-1e-16)]. Throws on an all-zero sample.
DistributionFit fit_effective_tests(std::span<const double> statistics, double df);

// Contrast-free variant: fit on all statistics, drop those with p < 0.01,
// refit, repeat to a fixed point (at most 20 rounds).
DistributionFit fit_effective_tests_trimmed(std::span<const double> statistics, double df);

enum class AdjustMethod { holm, benjamini_hochberg, benjamini_yekutieli };

AdjustMethod adjust_method_from_string(const std::string& name);  // holm | BH | BY
std::string to_string(AdjustMethod m);

struct PValueResult {
    std::vector<double> p_value;
    std::vector<double> adjusted_p_value;  // empty until adjusted
    AdjustMethod method = AdjustMethod::holm;
    DistributionFit fit;
};

// p_i = 1 - F(s_i)^m under `fit` (raw: 1 - F). Statistics below zero are
// treated as zero evidence (p = 1). Adjustment is a separate step.
PValueResult compute_p_values(std::span<const double> statistics, const DistributionFit& fit);

// Standard step-down Holm, step-up Benjamini-Hochberg, and BH scaled by
// sum(1/i) for Benjamini-Yekutieli; all clamped to 1, input order restored.
std::vector<double> adjust_p_values(std::span<const double> p_values, AdjustMethod method);

// Statistic threshold at significance alpha under the fitted null:
// chi2_quantile((1-alpha)^(1/m), df).
double ig_limit(const DistributionFit& fit, double alpha);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

// Two-sided Welch t-test with Welch-Satterthwaite degrees of freedom.
// Requires two observations per group and nonzero variance in at least one.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace mdfs::stats

#endif
