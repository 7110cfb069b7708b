#ifndef MDFS_ENGINE_HPP
#define MDFS_ENGINE_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mdfs/discretization.hpp"

namespace mdfs {

struct EngineParams {
    std::uint32_t dimensions = 1;     // k in 1..5
    double pseudocount_xi = 0.25;     // xi in [0,1]; 0 only for testing paths
    DiscretizationParams disc;
    bool track_tuples = false;
    unsigned workers = 1;

    void validate(std::size_t n_variables) const;
};

// Per-class smoothing mass: beta_d = xi * N_d / min(N0, N1).
struct PseudoCounts {
    double b0 = 0.0;
    double b1 = 0.0;
    double bsum = 0.0;
};

PseudoCounts make_pseudocounts(double xi, std::size_t n0, std::size_t n1);

// Joint class counts over the c^k voxels spanned by a k-tuple of discretized
// variables. Voxel index = sum_j level_j * c^j (first tuple member least
// significant).
struct ContingencyCounts {
    std::uint32_t dims = 0;     // k
    std::uint32_t levels = 0;   // c
    std::array<std::vector<std::uint32_t>, 2> counts;  // [class][voxel]

    std::size_t n_voxels() const { return counts[0].size(); }
};

// Exact joint tally; order of objects does not matter.
ContingencyCounts count_voxels(const std::vector<std::span<const std::uint8_t>>& level_vectors,
                               std::span<const std::uint8_t> decision, std::uint32_t n_levels);

// Sums counts over the axis of tuple member `member`, producing the
// (k-1)-dimensional table of the remaining members.
ContingencyCounts project_out(const ContingencyCounts& counts, std::uint32_t member);

// Count-weighted conditional entropy in nats:
//   CE = -sum_voxel sum_d (N_voxel^d + beta_d) ln p_voxel^d
// with p the pseudocount-smoothed voxel class probability. `beta_scale`
// multiplies the per-voxel pseudocount and is c for tables obtained by
// reducing a smoothed parent table over one axis (see tuple_ig), 1 otherwise.
double conditional_entropy(const ContingencyCounts& counts, double xi,
                           std::size_t n0, std::size_t n1, double beta_scale = 1.0);

// Information gain of each tuple member on the G-statistic scale:
//   ig_i = 2 * (CE(marginal without i) - CE(full tuple)).
// Pseudocounts are applied once to the full k-dimensional table; the
// marginal is that smoothed table reduced over member i's axis, so its
// voxels carry pseudomass c*beta_d. For k = 1 the marginal is the
// zero-dimensional decision table. This makes ig nonnegative for any xi.
std::vector<double> tuple_ig(const ContingencyCounts& full_counts, double xi,
                             std::size_t n0, std::size_t n1);

struct MaxIGResult {
    std::vector<double> ig;   // per variable; max over tuples and discretizations
    // Filled when track_tuples: the k-1 partner indices and the
    // discretization index of the argmax, ties broken by lexicographically
    // smallest tuple, then smallest discretization.
    std::vector<std::vector<std::uint32_t>> best_tuple;
    std::vector<std::uint32_t> best_discretization;
    bool tuples_tracked = false;
    EngineParams run_params;
};

// Exhaustive max over all (k-1)-subsets of partners and all discretizations.
// Output is identical for any worker count.
MaxIGResult compute_max_info_gains(const DiscretizedView& view,
                                   std::span<const std::uint8_t> decision,
                                   const EngineParams& params);

struct TupleRecord {
    std::uint32_t variable = 0;
    std::vector<std::uint32_t> tuple;  // sorted k members, includes variable
    double ig = 0.0;
};

// Every (variable, tuple) pair whose IG (max over discretizations) reaches
// ig_threshold, sorted by (variable, tuple). Requires k >= 2.
std::vector<TupleRecord> compute_interesting_tuples(const DiscretizedView& view,
                                                    std::span<const std::uint8_t> decision,
                                                    const EngineParams& params,
                                                    double ig_threshold);

}  // namespace mdfs

#endif
