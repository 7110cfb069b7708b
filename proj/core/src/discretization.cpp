#include "mdfs/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdfs/parallel.hpp"

namespace mdfs {

namespace {
constexpr std::uint64_t kTagDiscretize = 0x64697363ULL;
}

void DiscretizationParams::validate() const {
    if (divisions < 1 || divisions > 15) {
        throw std::invalid_argument("divisions must be in 1..15");
    }
    if (discretizations < 1) {
        throw std::invalid_argument("discretizations must be >= 1");
    }
    if (range && (*range < 0.0 || *range > 1.0 || !std::isfinite(*range))) {
        throw std::invalid_argument("range must be in [0, 1]");
    }
}

std::vector<double> sample_shares(CounterRng& rng, std::uint32_t divisions, double range) {
    if (range < 0.0 || range > 1.0) throw std::invalid_argument("range must be in [0, 1]");
    std::vector<double> shares(divisions + 1);
    for (double& s : shares) s = rng.uniform(1.0 - range, 1.0 + range);
    return shares;
}

std::vector<std::uint32_t> cut_positions(std::span<const double> shares, std::size_t n_objects) {
    if (shares.size() < 2) throw std::invalid_argument("need at least 2 shares");
    const std::size_t divisions = shares.size() - 1;
    if (n_objects < divisions + 2) {
        throw std::invalid_argument("too few objects to host " + std::to_string(divisions) +
                                    " distinct cut ranks in [2, N]");
    }

    double total = 0.0;
    for (double s : shares) total += s;

    std::vector<std::uint32_t> ranks(divisions);
    double cum = 0.0;
    for (std::size_t j = 0; j < divisions; ++j) {
        cum += shares[j];
        const long long r = std::llround(static_cast<double>(n_objects) * (cum / total));
        ranks[j] = static_cast<std::uint32_t>(
            std::clamp<long long>(r, 2, static_cast<long long>(n_objects)));
    }

    // collisions: bump upward, then pull back under N from the top
    for (std::size_t j = 1; j < divisions; ++j) {
        if (ranks[j] <= ranks[j - 1]) ranks[j] = ranks[j - 1] + 1;
    }
    if (ranks.back() > n_objects) {
        ranks.back() = static_cast<std::uint32_t>(n_objects);
        for (std::size_t j = divisions - 1; j-- > 0;) {
            if (ranks[j] >= ranks[j + 1]) ranks[j] = ranks[j + 1] - 1;
        }
        if (ranks.front() < 2) {
            throw std::invalid_argument("cut ranks do not fit in [2, N]");
        }
    }
    return ranks;
}

std::vector<std::uint8_t> discretize_variable(std::span<const double> values,
                                              std::span<const std::uint32_t> ranks) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> thresholds(ranks.size());
    for (std::size_t j = 0; j < ranks.size(); ++j) {
        if (ranks[j] < 1 || ranks[j] > sorted.size()) {
            throw std::invalid_argument("cut rank out of range");
        }
        if (j > 0 && ranks[j] <= ranks[j - 1]) {
            throw std::invalid_argument("cut ranks must be strictly increasing");
        }
        thresholds[j] = sorted[ranks[j] - 1];  // ranks are 1-based
    }

    std::vector<std::uint8_t> levels(values.size());
    for (std::size_t o = 0; o < values.size(); ++o) {
        std::uint8_t level = 0;
        for (double t : thresholds) level += values[o] > t ? 1 : 0;
        levels[o] = level;
    }
    return levels;
}

DiscretizedView discretize_all(const Dataset& ds, const DiscretizationParams& params,
                               unsigned workers) {
    params.validate();
    ds.validate();
    const std::size_t n = ds.n_objects;
    const std::size_t m = ds.n_variables;
    const std::size_t d = params.discretizations;
    const double range = params.resolved_range();
    if (n < params.divisions + 2) {
        throw std::invalid_argument("too few objects for the requested divisions");
    }

    DiscretizedView view;
    view.n_objects = n;
    view.n_variables = m;
    view.n_discretizations = d;
    view.n_levels = params.levels();
    view.params = params;
    view.params.range = range;
    view.levels.resize(d * m * n);

    // one sorted copy per variable, shared across discretizations
    std::vector<double> sorted(m * n);
    parallel_chunks(m, workers, [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t v = begin; v < end; ++v) {
            const auto col = ds.column(v);
            std::copy(col.begin(), col.end(), sorted.begin() + v * n);
            std::sort(sorted.begin() + v * n, sorted.begin() + (v + 1) * n);
        }
    });

    parallel_chunks(d * m, workers, [&](unsigned, std::size_t begin, std::size_t end) {
        std::vector<double> thresholds;
        for (std::size_t cell = begin; cell < end; ++cell) {
            const std::size_t t = cell / m;
            const std::size_t v = cell % m;
            CounterRng rng(derive_key(derive_key(derive_key(params.seed, kTagDiscretize), t), v));
            const auto shares = sample_shares(rng, params.divisions, range);
            const auto ranks = cut_positions(shares, n);

            thresholds.resize(ranks.size());
            const double* svals = sorted.data() + v * n;
            for (std::size_t j = 0; j < ranks.size(); ++j) thresholds[j] = svals[ranks[j] - 1];

            const double* col = ds.features.data() + v * n;
            std::uint8_t* out = view.levels.data() + (t * m + v) * n;
            for (std::size_t o = 0; o < n; ++o) {
                std::uint8_t level = 0;
                for (double thr : thresholds) level += col[o] > thr ? 1 : 0;
                out[o] = level;
            }
        }
    });
    return view;
}

}  // namespace mdfs
