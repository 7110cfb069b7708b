#include "mdfs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mdfs::stats {

namespace {

constexpr int kMaxIterations = 500;
const double kEps = std::numeric_limits<double>::epsilon();
const double kFpMin = std::numeric_limits<double>::min() / kEps;

// ln F clamp used before fit logarithms: F in [1e-300, 1 - 1e-16].
const double kLogFloor = std::log(1e-300);
const double kLogCeil = std::log1p(-1e-16);

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIterations; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Lentz continued fraction for the incomplete beta.
double beta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) break;
    }
    return h;
}

void check_chi2_domain(double s, double df) {
    if (!(df > 0.0) || !std::isfinite(df)) throw std::invalid_argument("df must be positive");
    if (!(s >= 0.0)) throw std::invalid_argument("statistic must be >= 0");
}

double clamped_log_cdf(double s, double df) {
    const double lf = chi2_log_cdf(std::max(s, 0.0), df);
    return std::clamp(lf, kLogFloor, kLogCeil);
}

double ml_m_hat(std::span<const double> statistics, double df,
                std::span<const std::size_t> subset) {
    double sum_log_f = 0.0;
    for (std::size_t i : subset) sum_log_f += clamped_log_cdf(statistics[i], df);
    return -static_cast<double>(subset.size()) / sum_log_f;
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: need a, b > 0");
    if (!(x >= 0.0) || !(x <= 1.0)) throw std::invalid_argument("incomplete_beta: x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double chi2_cdf(double s, double df) {
    check_chi2_domain(s, df);
    return gamma_p(df / 2.0, s / 2.0);
}

double chi2_sf(double s, double df) {
    check_chi2_domain(s, df);
    return gamma_q(df / 2.0, s / 2.0);
}

double chi2_log_cdf(double s, double df) {
    check_chi2_domain(s, df);
    const double a = df / 2.0;
    const double x = s / 2.0;
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x < a + 1.0) {
        const double p = gamma_p_series(a, x);
        return std::log(p);
    }
    // F close to 1: go through the survival function to keep ln F exact
    // down to the underflow limit of Q.
    return std::log1p(-gamma_q_cf(a, x));
}

double chi2_quantile(double p, double df) {
    if (!(df > 0.0) || !std::isfinite(df)) throw std::invalid_argument("df must be positive");
    if (!(p >= 0.0) || !(p < 1.0)) throw std::invalid_argument("p must be in [0, 1)");
    if (p == 0.0) return 0.0;

    double lo = 0.0;
    double hi = std::max(df, 1.0);
    while (chi2_cdf(hi, df) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (chi2_cdf(mid, df) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

AdjustMethod adjust_method_from_string(const std::string& name) {
    if (name == "holm") return AdjustMethod::holm;
    if (name == "BH") return AdjustMethod::benjamini_hochberg;
    if (name == "BY") return AdjustMethod::benjamini_yekutieli;
    throw std::invalid_argument("unknown adjustment method: " + name +
                                " (expected holm, BH or BY)");
}

std::string to_string(AdjustMethod m) {
    switch (m) {
        case AdjustMethod::holm: return "holm";
        case AdjustMethod::benjamini_hochberg: return "BH";
        case AdjustMethod::benjamini_yekutieli: return "BY";
    }
    return "holm";
}

DistributionFit fit_effective_tests(std::span<const double> statistics, double df) {
    if (statistics.empty()) throw std::invalid_argument("empty fit sample");
    if (std::all_of(statistics.begin(), statistics.end(), [](double s) { return s <= 0.0; })) {
        throw std::invalid_argument("degenerate fit sample: all statistics are zero");
    }
    std::vector<std::size_t> all(statistics.size());
    std::iota(all.begin(), all.end(), std::size_t{0});

    DistributionFit fit;
    fit.df = df;
    fit.mode = FitMode::exp_family;
    fit.m_hat = ml_m_hat(statistics, df, all);
    fit.n_fit = statistics.size();
    return fit;
}

DistributionFit fit_effective_tests_trimmed(std::span<const double> statistics, double df) {
    if (statistics.empty()) throw std::invalid_argument("empty fit sample");
    if (std::all_of(statistics.begin(), statistics.end(), [](double s) { return s <= 0.0; })) {
        throw std::invalid_argument("degenerate fit sample: all statistics are zero");
    }

    std::vector<double> log_f(statistics.size());
    for (std::size_t i = 0; i < statistics.size(); ++i) {
        log_f[i] = clamped_log_cdf(statistics[i], df);
    }

    std::vector<std::size_t> keep(statistics.size());
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    double m_hat = 1.0;
    for (int round = 0; round < 20; ++round) {
        m_hat = ml_m_hat(statistics, df, keep);
        std::vector<std::size_t> next;
        next.reserve(keep.size());
        for (std::size_t i = 0; i < statistics.size(); ++i) {
            const double p = -std::expm1(m_hat * log_f[i]);
            if (p >= 0.01) next.push_back(i);
        }
        if (next.empty() || next == keep) break;
        keep = std::move(next);
    }

    DistributionFit fit;
    fit.df = df;
    fit.mode = FitMode::exp_family;
    fit.m_hat = m_hat;
    fit.n_fit = keep.size();
    return fit;
}

PValueResult compute_p_values(std::span<const double> statistics, const DistributionFit& fit) {
    PValueResult out;
    out.fit = fit;
    out.p_value.resize(statistics.size());
    for (std::size_t i = 0; i < statistics.size(); ++i) {
        const double s = std::max(statistics[i], 0.0);
        if (fit.mode == FitMode::raw) {
            out.p_value[i] = chi2_sf(s, fit.df);
        } else {
            // unclamped: ln F keeps relative precision deep into the tail, so
            // extreme statistics stay ordered; s = 0 gives ln F = -inf, p = 1
            out.p_value[i] = -std::expm1(fit.m_hat * chi2_log_cdf(s, fit.df));
        }
    }
    return out;
}

std::vector<double> adjust_p_values(std::span<const double> p_values, AdjustMethod method) {
    const std::size_t n = p_values.size();
    std::vector<double> adjusted(n);
    if (n == 0) return adjusted;
    for (double p : p_values) {
        if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("p-values must be in [0, 1]");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    if (method == AdjustMethod::holm) {
        double running = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            running = std::max(running, static_cast<double>(n - i) * p_values[order[i]]);
            adjusted[order[i]] = std::min(1.0, running);
        }
        return adjusted;
    }

    const double scale = [&] {
        if (method == AdjustMethod::benjamini_hochberg) return 1.0;
        double c = 0.0;
        for (std::size_t i = 1; i <= n; ++i) c += 1.0 / static_cast<double>(i);
        return c;
    }();
    double running = 1.0;
    for (std::size_t i = n; i-- > 0;) {
        const double q = scale * static_cast<double>(n) / static_cast<double>(i + 1) *
                         p_values[order[i]];
        running = std::min(running, std::min(1.0, q));
        adjusted[order[i]] = running;
    }
    return adjusted;
}

double ig_limit(const DistributionFit& fit, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
    if (fit.mode == FitMode::raw) return chi2_quantile(1.0 - alpha, fit.df);
    const double p = std::exp(std::log1p(-alpha) / fit.m_hat);
    return chi2_quantile(p, fit.df);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("welch_t_test needs at least 2 observations per group");
    }
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / na;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / nb;

    double va = 0.0, vb = 0.0;
    for (double x : a) va += (x - ma) * (x - ma);
    for (double x : b) vb += (x - mb) * (x - mb);
    va /= na - 1.0;
    vb /= nb - 1.0;
    if (va == 0.0 && vb == 0.0) {
        throw std::invalid_argument("welch_t_test: zero variance in both groups");
    }

    const double sa = va / na;
    const double sb = vb / nb;
    const double se2 = sa + sb;

    WelchResult r;
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    // two-sided p = I_{df/(df+t^2)}(df/2, 1/2), the Student-t tail identity
    const double x = r.df / (r.df + r.t * r.t);
    r.p_value = incomplete_beta(r.df / 2.0, 0.5, x);
    return r;
}

}  // namespace mdfs::stats
