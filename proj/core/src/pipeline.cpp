#include "mdfs/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mdfs/discretization.hpp"

namespace mdfs {

namespace {

std::uint64_t random_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace

void MdfsParams::validate() const {
    if (dimensions < 1 || dimensions > 5) {
        throw std::invalid_argument("dimensions must be 1..5");
    }
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::invalid_argument("level must be in (0, 1)");
    }
    if (!(pseudocount_xi > 0.0) || pseudocount_xi > 1.0) {
        throw std::invalid_argument("pseudocount xi must be in (0, 1]");
    }
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    DiscretizationParams dp;
    dp.divisions = divisions;
    dp.discretizations = discretizations;
    dp.range = range;
    dp.validate();
}

MdfsResult run_mdfs(const Dataset& ds, const MdfsParams& params) {
    params.validate();
    ds.validate();
    if (ds.n_variables < params.dimensions) {
        throw std::invalid_argument("dimensions exceed variable count");
    }
    const auto t_start = std::chrono::steady_clock::now();

    const std::uint64_t seed = params.seed ? *params.seed : random_seed();
    const std::size_t m = ds.n_variables;

    // contrast augmentation anchors the null fit
    AugmentedDataset augmented = add_contrast_variables(ds, params.n_contrast, seed);

    DiscretizationParams disc;
    disc.divisions = params.divisions;
    disc.discretizations = params.discretizations;
    disc.range = params.range;
    disc.seed = seed;

    const DiscretizedView view = discretize_all(augmented.data, disc, params.workers);

    EngineParams engine;
    engine.dimensions = params.dimensions;
    engine.pseudocount_xi = params.pseudocount_xi;
    engine.disc = view.params;
    engine.track_tuples = params.track_tuples;
    engine.workers = params.workers;

    const MaxIGResult max_ig = compute_max_info_gains(view, augmented.data.decision, engine);

    // chi-squared degrees of freedom of the k-dimensional conditional test
    const double c = static_cast<double>(params.divisions + 1);
    const double df = static_cast<double>(params.divisions) *
                      std::pow(c, static_cast<double>(params.dimensions - 1));

    stats::DistributionFit fit;
    if (params.dimensions == 1 && params.discretizations == 1) {
        fit.df = df;
        fit.m_hat = 1.0;
        fit.mode = stats::FitMode::raw;
        fit.n_fit = 0;
    } else if (params.n_contrast > 0) {
        const std::span<const double> contrast_stats{max_ig.ig.data() + m, params.n_contrast};
        fit = stats::fit_effective_tests(contrast_stats, df);
    } else {
        const std::span<const double> all_stats{max_ig.ig.data(), m};
        fit = stats::fit_effective_tests_trimmed(all_stats, df);
    }

    // p-values and the cut are computed for the original variables only
    MdfsResult result;
    result.statistic.assign(max_ig.ig.begin(), max_ig.ig.begin() + m);
    auto pvals = stats::compute_p_values(result.statistic, fit);
    result.p_value = std::move(pvals.p_value);
    result.adjusted_p_value = stats::adjust_p_values(result.p_value, params.adjust_method);
    result.fit = fit;
    result.adjust_method = params.adjust_method;
    for (std::size_t v = 0; v < m; ++v) {
        if (result.adjusted_p_value[v] < params.level) {
            result.relevant_variables.push_back(static_cast<std::uint32_t>(v));
        }
    }

    if (params.track_tuples) {
        result.tuples_tracked = true;
        result.best_tuple.assign(max_ig.best_tuple.begin(), max_ig.best_tuple.begin() + m);
        result.best_discretization.assign(max_ig.best_discretization.begin(),
                                          max_ig.best_discretization.begin() + m);
    }

    result.params = params;
    result.params.seed = seed;
    result.params.range = view.params.range;  // resolved value
    result.seed_used = seed;
    result.contrast_sources.assign(augmented.contrast_source.begin(),
                                   augmented.contrast_source.end());
    result.variable_names.assign(ds.variable_names.begin(), ds.variable_names.end());
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

std::vector<std::uint32_t> relevant_variables(const MdfsResult& result, double level) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::invalid_argument("level must be in (0, 1)");
    }
    std::vector<std::uint32_t> out;
    for (std::size_t v = 0; v < result.adjusted_p_value.size(); ++v) {
        if (result.adjusted_p_value[v] < level) out.push_back(static_cast<std::uint32_t>(v));
    }
    return out;
}

std::vector<std::uint32_t> relevant_variables_ordered(const MdfsResult& result, double level) {
    auto out = relevant_variables(result, level);
    std::stable_sort(out.begin(), out.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (result.p_value[a] != result.p_value[b]) {
            return result.p_value[a] < result.p_value[b];
        }
        return a < b;
    });
    return out;
}

}  // namespace mdfs
