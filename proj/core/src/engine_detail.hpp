// Internal engine machinery shared with the test suite: subset combinatorics,
// entropy tables, and the two voxel-counting kernels (bit-vector and radix),
// which must produce identical counts.
#ifndef MDFS_ENGINE_DETAIL_HPP
#define MDFS_ENGINE_DETAIL_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <vector>

#include "mdfs/discretization.hpp"
#include "mdfs/engine.hpp"

namespace mdfs::detail {

inline double xlogx(double z) {
    return z > 0.0 ? z * std::log(z) : 0.0;
}

// CE contribution of one voxel with integer class counts and smoothing mass
// (b0, b1). Shared by the public entropy op and the table builder so both
// produce bit-identical values.
inline double voxel_ce(std::uint32_t c0, std::uint32_t c1, double b0, double b1, double bsum) {
    return xlogx(static_cast<double>(c0 + c1) + bsum) -
           xlogx(static_cast<double>(c0) + b0) -
           xlogx(static_cast<double>(c1) + b1);
}

// xlogx lookup over integer counts 0..N for the full-table smoothing (beta)
// and the reduced-table smoothing (c*beta). Turns CE into three lookups per
// voxel with no log calls in the hot loop.
struct CeTables {
    std::vector<double> full_c0, full_c1, full_tot;
    std::vector<double> marg_c0, marg_c1, marg_tot;

    void build(std::size_t n_objects, const PseudoCounts& b, std::uint32_t n_levels) {
        const double cb0 = b.b0 * static_cast<double>(n_levels);
        const double cb1 = b.b1 * static_cast<double>(n_levels);
        const double cbsum = cb0 + cb1;
        full_c0.resize(n_objects + 1);
        full_c1.resize(n_objects + 1);
        full_tot.resize(n_objects + 1);
        marg_c0.resize(n_objects + 1);
        marg_c1.resize(n_objects + 1);
        marg_tot.resize(n_objects + 1);
        for (std::size_t i = 0; i <= n_objects; ++i) {
            const double x = static_cast<double>(i);
            full_c0[i] = xlogx(x + b.b0);
            full_c1[i] = xlogx(x + b.b1);
            full_tot[i] = xlogx(x + b.bsum);
            marg_c0[i] = xlogx(x + cb0);
            marg_c1[i] = xlogx(x + cb1);
            marg_tot[i] = xlogx(x + cbsum);
        }
    }

    double full_voxel(std::uint32_t n0v, std::uint32_t n1v) const {
        return full_tot[n0v + n1v] - full_c0[n0v] - full_c1[n1v];
    }
    double marg_voxel(std::uint32_t n0v, std::uint32_t n1v) const {
        return marg_tot[n0v + n1v] - marg_c0[n0v] - marg_c1[n1v];
    }
};

// ---- subset combinatorics (colex order) ----

inline std::size_t int_pow(std::uint32_t base, std::uint32_t exp) {
    std::size_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) r *= base;
    return r;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint32_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint32_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;  // exact: r*(n-k+i) is divisible by i at each step
    }
    return r;
}

// rank(S) = sum_i C(S_i, i+1) for ascending members S_0 < S_1 < ...
inline std::uint64_t colex_rank(std::span<const std::uint32_t> members) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        r += binomial(members[i], static_cast<std::uint32_t>(i + 1));
    }
    return r;
}

inline void colex_unrank(std::uint64_t rank, std::uint32_t k, std::uint32_t n_variables,
                         std::uint32_t* out) {
    std::uint32_t upper = n_variables;
    for (std::uint32_t i = k; i-- > 0;) {
        // largest m < upper with C(m, i+1) <= rank; C(m, i+1) = 0 for m <= i,
        // so the descent always terminates
        std::uint32_t m = upper - 1;
        while (binomial(m, i + 1) > rank) --m;
        out[i] = m;
        rank -= binomial(m, i + 1);
        upper = m;
    }
}

// advances ascending members to the colex successor
inline void colex_next(std::uint32_t* members, std::uint32_t k) {
    for (std::uint32_t i = 0; i < k; ++i) {
        if (i + 1 == k || members[i] + 1 < members[i + 1]) {
            ++members[i];
            for (std::uint32_t j = 0; j < i; ++j) members[j] = j;
            return;
        }
    }
}

// ---- bit-vector representation (c == 2 fast path) ----

struct BitPlanes {
    std::size_t words = 0;  // 64-bit words per object vector
    std::size_t n_planes = 0;
    std::vector<std::uint64_t> level1;   // bit set where level == 1, [(t*M+v)*words]
    std::vector<std::uint64_t> level0;   // complement masked to N
    std::vector<std::uint64_t> class1;   // decision plane

    const std::uint64_t* pos(std::size_t t, std::size_t v, std::size_t m) const {
        return level1.data() + (t * m + v) * words;
    }
    const std::uint64_t* neg(std::size_t t, std::size_t v, std::size_t m) const {
        return level0.data() + (t * m + v) * words;
    }

    void build(const DiscretizedView& view, std::span<const std::uint8_t> decision) {
        const std::size_t n = view.n_objects;
        words = (n + 63) / 64;
        n_planes = view.n_discretizations * view.n_variables;
        level1.assign(n_planes * words, 0);
        level0.assign(n_planes * words, 0);
        class1.assign(words, 0);
        for (std::size_t o = 0; o < n; ++o) {
            if (decision[o]) class1[o / 64] |= std::uint64_t{1} << (o % 64);
        }
        for (std::size_t p = 0; p < n_planes; ++p) {
            const std::uint8_t* lv = view.levels.data() + p * n;
            std::uint64_t* out1 = level1.data() + p * words;
            std::uint64_t* out0 = level0.data() + p * words;
            for (std::size_t o = 0; o < n; ++o) {
                const std::uint64_t bit = std::uint64_t{1} << (o % 64);
                (lv[o] ? out1 : out0)[o / 64] |= bit;
            }
        }
    }
};

// Counts the 2^k voxels of a k-tuple by word-wise AND chains and popcount.
// out_c1[voxel] and out_tot[voxel] are overwritten; class-0 counts follow by
// subtraction. Voxel bit j corresponds to tuple member j's level.
inline void count_bits(const std::uint64_t* const* pos, const std::uint64_t* const* neg,
                       std::uint32_t k, const std::uint64_t* class1, std::size_t words,
                       std::uint32_t* out_c1, std::uint32_t* out_tot) {
    const std::uint32_t n_voxels = 1u << k;
    std::memset(out_c1, 0, n_voxels * sizeof(std::uint32_t));
    std::memset(out_tot, 0, n_voxels * sizeof(std::uint32_t));
    for (std::size_t w = 0; w < words; ++w) {
        for (std::uint32_t voxel = 0; voxel < n_voxels; ++voxel) {
            std::uint64_t m = (voxel & 1u ? pos[0] : neg[0])[w];
            for (std::uint32_t j = 1; j < k; ++j) {
                m &= (voxel >> j & 1u ? pos[j] : neg[j])[w];
            }
            out_tot[voxel] += static_cast<std::uint32_t>(std::popcount(m));
            out_c1[voxel] += static_cast<std::uint32_t>(std::popcount(m & class1[w]));
        }
    }
}

// General-c counting: one pass over objects accumulating packed voxel
// indices. Must agree exactly with count_bits for c == 2.
inline void count_radix(const std::uint8_t* const* levels, std::uint32_t k, std::uint32_t c,
                        std::span<const std::uint8_t> decision, std::size_t n_voxels,
                        std::uint32_t* out_c1, std::uint32_t* out_tot) {
    std::memset(out_c1, 0, n_voxels * sizeof(std::uint32_t));
    std::memset(out_tot, 0, n_voxels * sizeof(std::uint32_t));
    const std::size_t n = decision.size();
    for (std::size_t o = 0; o < n; ++o) {
        std::uint32_t idx = levels[0][o];
        std::uint32_t stride = c;
        for (std::uint32_t j = 1; j < k; ++j) {
            idx += levels[j][o] * stride;
            stride *= c;
        }
        out_tot[idx] += 1;
        out_c1[idx] += decision[o];
    }
}

}  // namespace mdfs::detail

#endif
