#ifndef MDFS_DISCRETIZATION_HPP
#define MDFS_DISCRETIZATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mdfs/dataset.hpp"
#include "mdfs/rng.hpp"

namespace mdfs {

struct DiscretizationParams {
    std::uint32_t divisions = 1;         // cuts per variable; levels c = divisions+1
    std::uint32_t discretizations = 1;   // D
    std::optional<double> range;         // class-share randomness in [0,1]
    std::uint64_t seed = 0;

    std::uint32_t levels() const { return divisions + 1; }

    // Unset range resolves to 0 for a single discretization (deterministic
    // equipotent split) and 0.2 otherwise: a mild perturbation of the class
    // shares diversifies the cuts across discretizations while keeping every
    // level populated.
    double resolved_range() const {
        if (range) return *range;
        return discretizations == 1 ? 0.0 : 0.2;
    }

    void validate() const;  // 1 <= divisions <= 15, discretizations >= 1, range in [0,1]
};

// Level assignments for every (discretization, variable, object) triple,
// values in [0, c). Immutable; safe to share across threads.
struct DiscretizedView {
    std::size_t n_objects = 0;
    std::size_t n_variables = 0;
    std::size_t n_discretizations = 0;
    std::uint32_t n_levels = 0;           // c
    std::vector<std::uint8_t> levels;     // [(t * M + v) * N + o]
    DiscretizationParams params;

    std::span<const std::uint8_t> slice(std::size_t t, std::size_t v) const {
        return {levels.data() + (t * n_variables + v) * n_objects, n_objects};
    }
};

// divisions+1 draws from Uniform(1-range, 1+range); range 0 gives all ones.
std::vector<double> sample_shares(CounterRng& rng, std::uint32_t divisions, double range);

// Converts shares to cut ranks: rank_j = clamp(round(N * cum_j), 2, N) with
// cum_j the normalized partial share sums, then collisions resolved to a
// strictly increasing sequence (bump up, and down from N if needed).
// Ranks are 1-based positions into the ascending-sorted values.
std::vector<std::uint32_t> cut_positions(std::span<const double> shares, std::size_t n_objects);

// Thresholds t_j = sorted(values)[rank_j]; level(v) = |{j : v > t_j}|.
// Ties at a threshold fall into the lower level.
std::vector<std::uint8_t> discretize_variable(std::span<const double> values,
                                              std::span<const std::uint32_t> ranks);

// Discretizes every variable D times. The stream for discretization t of
// variable v is derived from (seed, t, v) alone, so slices are independent
// of D (prefix property), evaluation order and worker count.
DiscretizedView discretize_all(const Dataset& ds, const DiscretizationParams& params,
                               unsigned workers = 1);

}  // namespace mdfs

#endif
