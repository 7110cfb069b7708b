// Independent reference implementations used as test oracles. Everything here
// is written from the documented contracts by plain loops, with no code
// shared with the engine under test.
#ifndef MDFS_TEST_ORACLES_HPP
#define MDFS_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mdfs/discretization.hpp"
#include "mdfs/rng.hpp"

namespace oracle {

// Conditional entropy straight from the definition:
//   CE = -sum_voxel sum_d (n_d + b_d) * ln((n_d + b_d) / (n_0 + b_0 + n_1 + b_1))
inline double naive_ce(std::span<const std::uint32_t> class0,
                       std::span<const std::uint32_t> class1, double b0, double b1) {
    double ce = 0.0;
    for (std::size_t w = 0; w < class0.size(); ++w) {
        const double a0 = class0[w] + b0;
        const double a1 = class1[w] + b1;
        const double total = a0 + a1;
        if (total <= 0.0) continue;
        if (a0 > 0.0) ce -= a0 * std::log(a0 / total);
        if (a1 > 0.0) ce -= a1 * std::log(a1 / total);
    }
    return ce;
}

// Classical G statistic of a 2 x c table: G = 2 sum O ln(O / E),
// E = row_total * column_total / N.
inline double g_statistic(std::span<const std::uint32_t> class0,
                          std::span<const std::uint32_t> class1) {
    double n = 0.0, row0 = 0.0, row1 = 0.0;
    for (std::size_t j = 0; j < class0.size(); ++j) {
        row0 += class0[j];
        row1 += class1[j];
    }
    n = row0 + row1;
    double g = 0.0;
    for (std::size_t j = 0; j < class0.size(); ++j) {
        const double col = static_cast<double>(class0[j]) + class1[j];
        if (class0[j] > 0) g += class0[j] * std::log(class0[j] * n / (row0 * col));
        if (class1[j] > 0) g += class1[j] * std::log(class1[j] * n / (row1 * col));
    }
    return 2.0 * g;
}

struct NaiveBest {
    double ig = -std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> tuple;  // sorted members including the variable
    std::uint32_t disc = 0;
};

namespace detail {

inline void enumerate_subsets(std::uint32_t m, std::uint32_t k,
                              std::vector<std::uint32_t>& current,
                              const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
    if (current.size() == k) {
        fn(current);
        return;
    }
    const std::uint32_t start = current.empty() ? 0 : current.back() + 1;
    for (std::uint32_t v = start; v < m; ++v) {
        current.push_back(v);
        enumerate_subsets(m, k, current, fn);
        current.pop_back();
    }
}

}  // namespace detail

// Exhaustive per-variable max information gain by plain nested loops.
// Marginal tables are counted directly from the remaining members and
// smoothed with c*beta per voxel; the full table is smoothed with beta.
inline std::vector<NaiveBest> naive_max_ig(const mdfs::DiscretizedView& view,
                                           std::span<const std::uint8_t> decision,
                                           std::uint32_t k, double xi) {
    const std::size_t m = view.n_variables;
    const std::size_t n = view.n_objects;
    const std::uint32_t c = view.n_levels;
    std::size_t n1 = 0;
    for (auto d : decision) n1 += d;
    const std::size_t n0 = n - n1;
    const double cmin = static_cast<double>(std::min(n0, n1));
    const double b0 = xi * static_cast<double>(n0) / cmin;
    const double b1 = xi * static_cast<double>(n1) / cmin;

    const auto count_subset = [&](const std::vector<std::uint32_t>& members, std::size_t t,
                                  std::vector<std::uint32_t>& out0,
                                  std::vector<std::uint32_t>& out1) {
        std::size_t voxels = 1;
        for (std::size_t j = 0; j < members.size(); ++j) voxels *= c;
        out0.assign(voxels, 0);
        out1.assign(voxels, 0);
        for (std::size_t o = 0; o < n; ++o) {
            std::size_t idx = 0, stride = 1;
            for (std::uint32_t v : members) {
                idx += view.slice(t, v)[o] * stride;
                stride *= c;
            }
            (decision[o] ? out1 : out0)[idx] += 1;
        }
    };

    std::vector<NaiveBest> best(m);
    std::vector<std::uint32_t> f0, f1, g0, g1;
    std::vector<std::uint32_t> current;
    detail::enumerate_subsets(static_cast<std::uint32_t>(m), k, current,
                              [&](const std::vector<std::uint32_t>& members) {
        for (std::size_t t = 0; t < view.n_discretizations; ++t) {
            count_subset(members, t, f0, f1);
            const double ce_full = naive_ce(f0, f1, b0, b1);
            for (std::uint32_t i = 0; i < k; ++i) {
                std::vector<std::uint32_t> rest;
                for (std::uint32_t j = 0; j < k; ++j) {
                    if (j != i) rest.push_back(members[j]);
                }
                if (rest.empty()) {
                    g0.assign(1, static_cast<std::uint32_t>(n0));
                    g1.assign(1, static_cast<std::uint32_t>(n1));
                } else {
                    count_subset(rest, t, g0, g1);
                }
                const double ce_marg = naive_ce(g0, g1, c * b0, c * b1);
                const double ig = 2.0 * (ce_marg - ce_full);

                NaiveBest& slot = best[members[i]];
                const bool wins = ig > slot.ig ||
                                  (ig == slot.ig && slot.tuple.empty()) ||
                                  (ig == slot.ig && !slot.tuple.empty() &&
                                   (members < slot.tuple ||
                                    (members == slot.tuple &&
                                     static_cast<std::uint32_t>(t) < slot.disc)));
                if (wins) {
                    slot.ig = ig;
                    slot.tuple = members;
                    slot.disc = static_cast<std::uint32_t>(t);
                }
            }
        }
    });
    return best;
}

// One-sample Kolmogorov-Smirnov distance against Uniform(0, 1).
inline double ks_uniform_distance(std::vector<double> p) {
    std::sort(p.begin(), p.end());
    const double n = static_cast<double>(p.size());
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        d = std::max(d, std::fabs((i + 1.0) / n - p[i]));
        d = std::max(d, std::fabs(p[i] - i / n));
    }
    return d;
}

// Deterministic test-data helpers.
inline std::vector<double> random_values(mdfs::CounterRng& rng, std::size_t n,
                                         double lo = 0.0, double hi = 1.0) {
    std::vector<double> out(n);
    for (double& x : out) x = rng.uniform(lo, hi);
    return out;
}

inline std::vector<std::uint8_t> random_decision(mdfs::CounterRng& rng, std::size_t n) {
    std::vector<std::uint8_t> out(n);
    bool has0 = false, has1 = false;
    for (auto& d : out) {
        d = static_cast<std::uint8_t>(rng.next_u64() & 1);
        (d ? has1 : has0) = true;
    }
    if (!has0) out[0] = 0;
    if (!has1) out[n - 1] = 1;
    return out;
}

}  // namespace oracle

#endif
