#ifndef MDFS_PIPELINE_HPP
#define MDFS_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdfs/dataset.hpp"
#include "mdfs/engine.hpp"
#include "mdfs/stats.hpp"

namespace mdfs {

struct MdfsParams {
    std::uint32_t dimensions = 1;
    std::uint32_t divisions = 1;
    std::uint32_t discretizations = 1;
    std::optional<double> range;          // auto: 0 when D == 1, else 0.5
    double pseudocount_xi = 0.25;
    std::uint32_t n_contrast = 30;
    std::optional<std::uint64_t> seed;    // unset: drawn from the OS entropy source
    stats::AdjustMethod adjust_method = stats::AdjustMethod::holm;
    double level = 0.05;
    bool track_tuples = false;
    unsigned workers = 1;

    void validate() const;
};

// End-to-end verdict for the original variables; contrast columns are used
// for the null fit and never reported.
struct MdfsResult {
    std::vector<double> statistic;
    std::vector<double> p_value;
    std::vector<double> adjusted_p_value;
    std::vector<std::uint32_t> relevant_variables;  // sorted; adjusted p < level
    stats::DistributionFit fit;
    stats::AdjustMethod adjust_method = stats::AdjustMethod::holm;

    std::vector<std::vector<std::uint32_t>> best_tuple;  // partner indices, when tracked
    std::vector<std::uint32_t> best_discretization;      // when tracked
    bool tuples_tracked = false;

    // Run metadata sufficient to reproduce the run.
    MdfsParams params;                        // with range resolved and seed filled
    std::uint64_t seed_used = 0;
    std::vector<std::uint32_t> contrast_sources;
    std::vector<std::string> variable_names;
    double wall_time_seconds = 0.0;
};

// Runs the canonical sequence: seed, contrast augmentation, discretization,
// max-IG, null fit (contrast statistics when n_contrast > 0, trimmed fit
// otherwise; raw chi-squared only when k == 1 and D == 1), p-values for the
// original variables, adjustment, level cut.
MdfsResult run_mdfs(const Dataset& ds, const MdfsParams& params);

// Recuts the stored adjusted p-values at a new level; no recomputation.
std::vector<std::uint32_t> relevant_variables(const MdfsResult& result, double level);

// Same set ordered by ascending p-value, ties by variable index.
std::vector<std::uint32_t> relevant_variables_ordered(const MdfsResult& result, double level);

}  // namespace mdfs

#endif
