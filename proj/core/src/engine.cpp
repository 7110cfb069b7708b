#include "mdfs/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "engine_detail.hpp"
#include "mdfs/parallel.hpp"

namespace mdfs {

using detail::BitPlanes;
using detail::CeTables;

namespace {

// Marginal-CE caches larger than this fall back to per-tuple projection.
constexpr std::uint64_t kMargCacheLimit = std::uint64_t{1} << 23;

struct ClassTotals {
    std::size_t n0 = 0;
    std::size_t n1 = 0;
};

ClassTotals class_totals(std::span<const std::uint8_t> decision) {
    ClassTotals t;
    for (std::uint8_t d : decision) {
        if (d > 1) throw std::invalid_argument("decision values must be 0 or 1");
        if (d) ++t.n1; else ++t.n0;
    }
    if (t.n0 == 0 || t.n1 == 0) throw std::invalid_argument("both decision classes must be present");
    return t;
}

// A candidate argmax: ordered by ig descending, then lexicographically
// smallest tuple, then smallest discretization index.
struct Best {
    double ig = -std::numeric_limits<double>::infinity();
    std::uint32_t disc = 0;
    std::array<std::uint32_t, 5> tuple{};  // first k entries meaningful
    std::uint32_t k = 0;

    bool beats(const Best& other) const {
        if (ig != other.ig) return ig > other.ig;
        for (std::uint32_t j = 0; j < k; ++j) {
            if (tuple[j] != other.tuple[j]) return tuple[j] < other.tuple[j];
        }
        return disc < other.disc;
    }
};

struct EngineContext {
    const DiscretizedView& view;
    std::span<const std::uint8_t> decision;
    std::uint32_t k;
    std::uint32_t c;
    std::size_t n, m, d;
    ClassTotals totals;
    PseudoCounts pseudo;
    CeTables tables;
    BitPlanes bits;
    bool use_bits;

    EngineContext(const DiscretizedView& v, std::span<const std::uint8_t> dec,
                  const EngineParams& params)
        : view(v), decision(dec), k(params.dimensions), c(v.n_levels),
          n(v.n_objects), m(v.n_variables), d(v.n_discretizations) {
        if (dec.size() != n) throw std::invalid_argument("decision length mismatch");
        totals = class_totals(dec);
        pseudo = make_pseudocounts(params.pseudocount_xi, totals.n0, totals.n1);
        tables.build(n, pseudo, c);
        use_bits = (c == 2);
        if (use_bits) bits.build(v, dec);
    }

    // CE of the s-tuple `members` at discretization t. Full-table smoothing
    // when marginal == false, reduced-table smoothing (c*beta) otherwise.
    double subset_ce(const std::uint32_t* members, std::uint32_t s, std::size_t t,
                     bool marginal, std::uint32_t* c1_buf, std::uint32_t* tot_buf) const {
        std::size_t n_voxels = 1;
        for (std::uint32_t j = 0; j < s; ++j) n_voxels *= c;

        if (s == 0) {
            c1_buf[0] = static_cast<std::uint32_t>(totals.n1);
            tot_buf[0] = static_cast<std::uint32_t>(n);
        } else if (use_bits) {
            const std::uint64_t* pos[5];
            const std::uint64_t* neg[5];
            for (std::uint32_t j = 0; j < s; ++j) {
                pos[j] = bits.pos(t, members[j], m);
                neg[j] = bits.neg(t, members[j], m);
            }
            detail::count_bits(pos, neg, s, bits.class1.data(), bits.words, c1_buf, tot_buf);
        } else {
            const std::uint8_t* levels[5];
            for (std::uint32_t j = 0; j < s; ++j) {
                levels[j] = view.slice(t, members[j]).data();
            }
            detail::count_radix(levels, s, c, decision, n_voxels, c1_buf, tot_buf);
        }

        double ce = 0.0;
        if (marginal) {
            for (std::size_t w = 0; w < n_voxels; ++w) {
                ce += tables.marg_voxel(tot_buf[w] - c1_buf[w], c1_buf[w]);
            }
        } else {
            for (std::size_t w = 0; w < n_voxels; ++w) {
                ce += tables.full_voxel(tot_buf[w] - c1_buf[w], c1_buf[w]);
            }
        }
        return ce;
    }
};

void merge_best(std::vector<Best>& into, const std::vector<Best>& from) {
    for (std::size_t v = 0; v < into.size(); ++v) {
        if (from[v].beats(into[v])) into[v] = from[v];
    }
}

}  // namespace

PseudoCounts make_pseudocounts(double xi, std::size_t n0, std::size_t n1) {
    if (xi < 0.0 || !std::isfinite(xi)) throw std::invalid_argument("xi must be >= 0");
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("class totals must be positive");
    const double cmin = static_cast<double>(std::min(n0, n1));
    PseudoCounts b;
    b.b0 = xi * static_cast<double>(n0) / cmin;
    b.b1 = xi * static_cast<double>(n1) / cmin;
    b.bsum = b.b0 + b.b1;
    return b;
}

void EngineParams::validate(std::size_t n_variables) const {
    if (dimensions < 1 || dimensions > 5) {
        throw std::invalid_argument("dimensions must be 1..5");
    }
    // xi = 0 disables smoothing; allowed here for oracle comparisons, while
    // the p-value pipeline requires xi > 0
    if (pseudocount_xi < 0.0 || pseudocount_xi > 1.0) {
        throw std::invalid_argument("pseudocount xi must be in [0, 1]");
    }
    disc.validate();
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (n_variables < dimensions) {
        throw std::invalid_argument("dimensions exceed variable count");
    }
}

ContingencyCounts count_voxels(const std::vector<std::span<const std::uint8_t>>& level_vectors,
                               std::span<const std::uint8_t> decision, std::uint32_t n_levels) {
    if (level_vectors.empty() || level_vectors.size() > 5) {
        throw std::invalid_argument("tuple size must be 1..5");
    }
    const std::size_t n = decision.size();
    std::size_t n_voxels = 1;
    for (const auto& lv : level_vectors) {
        if (lv.size() != n) throw std::invalid_argument("level vector length mismatch");
        for (std::uint8_t l : lv) {
            if (l >= n_levels) throw std::invalid_argument("level value out of range");
        }
        n_voxels *= n_levels;
    }

    ContingencyCounts out;
    out.dims = static_cast<std::uint32_t>(level_vectors.size());
    out.levels = n_levels;
    out.counts[0].assign(n_voxels, 0);
    out.counts[1].assign(n_voxels, 0);
    for (std::size_t o = 0; o < n; ++o) {
        if (decision[o] > 1) throw std::invalid_argument("decision values must be 0 or 1");
        std::size_t idx = 0;
        std::size_t stride = 1;
        for (const auto& lv : level_vectors) {
            idx += lv[o] * stride;
            stride *= n_levels;
        }
        ++out.counts[decision[o]][idx];
    }
    return out;
}

ContingencyCounts project_out(const ContingencyCounts& counts, std::uint32_t member) {
    if (member >= counts.dims) throw std::invalid_argument("member out of range");
    const std::uint32_t c = counts.levels;
    std::size_t stride = 1;
    for (std::uint32_t j = 0; j < member; ++j) stride *= c;

    ContingencyCounts out;
    out.dims = counts.dims - 1;
    out.levels = c;
    const std::size_t out_voxels = counts.n_voxels() / c;
    out.counts[0].assign(out_voxels, 0);
    out.counts[1].assign(out_voxels, 0);
    for (int d = 0; d < 2; ++d) {
        for (std::size_t w = 0; w < counts.n_voxels(); ++w) {
            const std::size_t low = w % stride;
            const std::size_t high = w / (stride * c);
            out.counts[d][low + high * stride] += counts.counts[d][w];
        }
    }
    return out;
}

double conditional_entropy(const ContingencyCounts& counts, double xi,
                           std::size_t n0, std::size_t n1, double beta_scale) {
    const PseudoCounts base = make_pseudocounts(xi, n0, n1);
    const double b0 = base.b0 * beta_scale;
    const double b1 = base.b1 * beta_scale;
    const double bsum = b0 + b1;
    double ce = 0.0;
    for (std::size_t w = 0; w < counts.n_voxels(); ++w) {
        ce += detail::voxel_ce(counts.counts[0][w], counts.counts[1][w], b0, b1, bsum);
    }
    return ce;
}

std::vector<double> tuple_ig(const ContingencyCounts& full_counts, double xi,
                             std::size_t n0, std::size_t n1) {
    const double ce_full = conditional_entropy(full_counts, xi, n0, n1, 1.0);
    const double c = static_cast<double>(full_counts.levels);
    std::vector<double> ig(full_counts.dims);
    for (std::uint32_t i = 0; i < full_counts.dims; ++i) {
        const ContingencyCounts marg = project_out(full_counts, i);
        const double ce_marg = conditional_entropy(marg, xi, n0, n1, c);
        ig[i] = 2.0 * (ce_marg - ce_full);
    }
    return ig;
}

MaxIGResult compute_max_info_gains(const DiscretizedView& view,
                                   std::span<const std::uint8_t> decision,
                                   const EngineParams& params) {
    params.validate(view.n_variables);
    EngineContext ctx(view, decision, params);
    const std::uint32_t k = ctx.k;
    const std::size_t m = ctx.m;
    const std::size_t d = ctx.d;

    std::vector<Best> best(m);
    for (auto& b : best) b.k = k;

    if (k == 1) {
        // max over discretizations only; the marginal is the 0-dimensional
        // decision table
        std::uint32_t c1_buf0[1], tot_buf0[1];
        std::uint32_t member0 = 0;
        const double ce0 = ctx.subset_ce(&member0, 0, 0, true, c1_buf0, tot_buf0);

        parallel_chunks(m, params.workers, [&](unsigned, std::size_t begin, std::size_t end) {
            std::vector<std::uint32_t> c1_buf(ctx.c), tot_buf(ctx.c);
            for (std::size_t v = begin; v < end; ++v) {
                Best& b = best[v];
                for (std::size_t t = 0; t < d; ++t) {
                    const std::uint32_t member = static_cast<std::uint32_t>(v);
                    const double ce = ctx.subset_ce(&member, 1, t, false,
                                                    c1_buf.data(), tot_buf.data());
                    const double ig = 2.0 * (ce0 - ce);
                    Best cand;
                    cand.k = 1;
                    cand.ig = ig;
                    cand.disc = static_cast<std::uint32_t>(t);
                    cand.tuple[0] = member;
                    if (cand.beats(b)) b = cand;
                }
            }
        });
    } else {
        const std::uint64_t n_tuples = detail::binomial(m, k);
        const std::uint64_t n_marg = detail::binomial(m, k - 1);

        // marginal CE of every (k-1)-subset per discretization, when it fits
        const bool cache_marginals = n_marg * d <= kMargCacheLimit;
        std::vector<double> marg_ce;
        if (cache_marginals) {
            marg_ce.resize(n_marg * d);
            parallel_chunks(n_marg, params.workers,
                            [&](unsigned, std::size_t begin, std::size_t end) {
                if (begin == end) return;
                std::vector<std::uint32_t> c1_buf(detail::int_pow(ctx.c, k));
                std::vector<std::uint32_t> tot_buf(c1_buf.size());
                std::uint32_t members[5];
                detail::colex_unrank(begin, k - 1, static_cast<std::uint32_t>(m), members);
                for (std::size_t r = begin; r < end; ++r) {
                    for (std::size_t t = 0; t < d; ++t) {
                        marg_ce[t * n_marg + r] = ctx.subset_ce(members, k - 1, t, true,
                                                                c1_buf.data(), tot_buf.data());
                    }
                    detail::colex_next(members, k - 1);
                }
            });
        }

        std::vector<std::vector<Best>> worker_best(params.workers,
                                                   std::vector<Best>(m));
        for (auto& wb : worker_best)
            for (auto& b : wb) b.k = k;

        parallel_chunks(n_tuples, params.workers,
                        [&](unsigned w, std::size_t begin, std::size_t end) {
            if (begin == end) return;
            std::vector<Best>& local = worker_best[w];
            std::vector<std::uint32_t> c1_buf(detail::int_pow(ctx.c, k));
            std::vector<std::uint32_t> tot_buf(c1_buf.size());
            std::vector<std::uint32_t> mc1_buf(c1_buf.size()), mtot_buf(c1_buf.size());
            std::uint32_t members[5];
            std::uint32_t sub_members[5];
            detail::colex_unrank(begin, k, static_cast<std::uint32_t>(m), members);
            for (std::size_t r = begin; r < end; ++r) {
                for (std::size_t t = 0; t < d; ++t) {
                    const double ce_full = ctx.subset_ce(members, k, t, false,
                                                         c1_buf.data(), tot_buf.data());
                    for (std::uint32_t i = 0; i < k; ++i) {
                        double ce_marg;
                        for (std::uint32_t j = 0, s = 0; j < k; ++j) {
                            if (j != i) sub_members[s++] = members[j];
                        }
                        if (cache_marginals) {
                            const std::uint64_t rank =
                                detail::colex_rank({sub_members, k - 1});
                            ce_marg = marg_ce[t * n_marg + rank];
                        } else {
                            ce_marg = ctx.subset_ce(sub_members, k - 1, t, true,
                                                    mc1_buf.data(), mtot_buf.data());
                        }
                        Best cand;
                        cand.k = k;
                        cand.ig = 2.0 * (ce_marg - ce_full);
                        cand.disc = static_cast<std::uint32_t>(t);
                        std::copy(members, members + k, cand.tuple.begin());
                        Best& slot = local[members[i]];
                        if (cand.beats(slot)) slot = cand;
                    }
                }
                detail::colex_next(members, k);
            }
        });
        for (const auto& wb : worker_best) merge_best(best, wb);
    }

    MaxIGResult out;
    out.run_params = params;
    out.tuples_tracked = params.track_tuples;
    out.ig.resize(m);
    for (std::size_t v = 0; v < m; ++v) out.ig[v] = best[v].ig;
    if (params.track_tuples) {
        out.best_discretization.resize(m);
        out.best_tuple.resize(m);
        for (std::size_t v = 0; v < m; ++v) {
            out.best_discretization[v] = best[v].disc;
            out.best_tuple[v].reserve(k - 1);
            for (std::uint32_t j = 0; j < k; ++j) {
                if (best[v].tuple[j] != v) out.best_tuple[v].push_back(best[v].tuple[j]);
            }
        }
    }
    return out;
}

std::vector<TupleRecord> compute_interesting_tuples(const DiscretizedView& view,
                                                    std::span<const std::uint8_t> decision,
                                                    const EngineParams& params,
                                                    double ig_threshold) {
    params.validate(view.n_variables);
    if (params.dimensions < 2) {
        throw std::invalid_argument("interesting tuples require dimensions >= 2");
    }
    EngineContext ctx(view, decision, params);
    const std::uint32_t k = ctx.k;
    const std::size_t m = ctx.m;
    const std::size_t d = ctx.d;
    const std::uint64_t n_tuples = detail::binomial(m, k);
    const std::uint64_t n_marg = detail::binomial(m, k - 1);

    const bool cache_marginals = n_marg * d <= kMargCacheLimit;
    std::vector<double> marg_ce;
    if (cache_marginals) {
        marg_ce.resize(n_marg * d);
        parallel_chunks(n_marg, params.workers, [&](unsigned, std::size_t begin, std::size_t end) {
            if (begin == end) return;
            std::vector<std::uint32_t> c1_buf(detail::int_pow(ctx.c, k));
            std::vector<std::uint32_t> tot_buf(c1_buf.size());
            std::uint32_t members[5];
            detail::colex_unrank(begin, k - 1, static_cast<std::uint32_t>(m), members);
            for (std::size_t r = begin; r < end; ++r) {
                for (std::size_t t = 0; t < d; ++t) {
                    marg_ce[t * n_marg + r] = ctx.subset_ce(members, k - 1, t, true,
                                                            c1_buf.data(), tot_buf.data());
                }
                detail::colex_next(members, k - 1);
            }
        });
    }

    std::vector<std::vector<TupleRecord>> worker_records(params.workers);
    parallel_chunks(n_tuples, params.workers, [&](unsigned w, std::size_t begin, std::size_t end) {
        if (begin == end) return;
        auto& records = worker_records[w];
        std::vector<std::uint32_t> c1_buf(detail::int_pow(ctx.c, k));
        std::vector<std::uint32_t> tot_buf(c1_buf.size());
        std::vector<std::uint32_t> mc1_buf(c1_buf.size()), mtot_buf(c1_buf.size());
        std::uint32_t members[5];
        std::uint32_t sub_members[5];
        double member_max[5];
        detail::colex_unrank(begin, k, static_cast<std::uint32_t>(m), members);
        for (std::size_t r = begin; r < end; ++r) {
            for (std::uint32_t i = 0; i < k; ++i) {
                member_max[i] = -std::numeric_limits<double>::infinity();
            }
            for (std::size_t t = 0; t < d; ++t) {
                const double ce_full = ctx.subset_ce(members, k, t, false,
                                                     c1_buf.data(), tot_buf.data());
                for (std::uint32_t i = 0; i < k; ++i) {
                    double ce_marg;
                    for (std::uint32_t j = 0, s = 0; j < k; ++j) {
                        if (j != i) sub_members[s++] = members[j];
                    }
                    if (cache_marginals) {
                        ce_marg = marg_ce[t * n_marg + detail::colex_rank({sub_members, k - 1})];
                    } else {
                        ce_marg = ctx.subset_ce(sub_members, k - 1, t, true,
                                                mc1_buf.data(), mtot_buf.data());
                    }
                    member_max[i] = std::max(member_max[i], 2.0 * (ce_marg - ce_full));
                }
            }
            for (std::uint32_t i = 0; i < k; ++i) {
                if (member_max[i] >= ig_threshold) {
                    TupleRecord rec;
                    rec.variable = members[i];
                    rec.tuple.assign(members, members + k);
                    rec.ig = member_max[i];
                    records.push_back(std::move(rec));
                }
            }
            detail::colex_next(members, k);
        }
    });

    std::vector<TupleRecord> out;
    for (auto& wr : worker_records) {
        out.insert(out.end(), std::make_move_iterator(wr.begin()),
                   std::make_move_iterator(wr.end()));
    }
    std::sort(out.begin(), out.end(), [](const TupleRecord& a, const TupleRecord& b) {
        if (a.variable != b.variable) return a.variable < b.variable;
        return a.tuple < b.tuple;
    });
    return out;
}

}  // namespace mdfs
