#include "hierrank/ranker.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "hierrank/util.hpp"

namespace hierrank {

ScoredForest make_forest(ClassHierarchy h, int num_objects, std::vector<double> values) {
    if (num_objects < 1) fail("forest_shape", "forest needs at least one object");
    const auto expect = static_cast<std::size_t>(num_objects) *
                        static_cast<std::size_t>(h.num_classes());
    if (values.size() != expect)
        fail("forest_shape", "expected " + std::to_string(expect) + " values, got " +
                                 std::to_string(values.size()));
    for (double v : values)
        if (!std::isfinite(v)) fail("forest_value", "non-finite ranking value");
    return ScoredForest{std::move(h), num_objects, std::move(values)};
}

BlockChain block_partition(std::span<const double> chain_values) {
    BlockChain out;
    out.order.resize(chain_values.size());
    std::iota(out.order.begin(), out.order.end(), std::int64_t{0});

    struct Acc {
        std::int64_t offset;
        std::int64_t size;
        double sum;
        double mean() const { return sum / static_cast<double>(size); }
    };
    std::vector<Acc> stack;
    for (std::size_t i = 0; i < chain_values.size(); ++i) {
        if (!std::isfinite(chain_values[i])) fail("chain_value", "non-finite chain value");
        Acc cur{static_cast<std::int64_t>(i), 1, chain_values[i]};
        while (!stack.empty() && stack.back().mean() <= cur.mean()) {
            cur.offset = stack.back().offset;
            cur.size += stack.back().size;
            cur.sum += stack.back().sum;
            stack.pop_back();
        }
        stack.push_back(cur);
    }
    out.blocks.reserve(stack.size());
    for (const Acc& a : stack) out.blocks.push_back({a.offset, a.size, a.mean()});
    return out;
}

Ranking naive_sort(const ScoredForest& f) {
    Ranking r;
    r.num_objects = f.num_objects;
    r.num_classes = f.hierarchy.num_classes();
    r.order.resize(f.values.size());
    std::iota(r.order.begin(), r.order.end(), std::int64_t{0});
    std::sort(r.order.begin(), r.order.end(), [&](std::int64_t a, std::int64_t b) {
        if (f.values[a] != f.values[b]) return f.values[a] > f.values[b];
        return a < b;
    });
    return r;
}

std::vector<std::pair<int, int>> chain_merge(
    const std::vector<std::vector<double>>& chains) {
    std::size_t total = 0;
    for (const auto& c : chains) {
        for (double v : c)
            if (!std::isfinite(v)) fail("chain_value", "non-finite chain value");
        total += c.size();
    }
    std::vector<std::size_t> off(chains.size(), 0);
    std::vector<std::pair<int, int>> out;
    out.reserve(total);
    while (out.size() < total) {
        int best_chain = -1;
        std::size_t best_len = 0;
        double best_mean = 0;
        // Per chain, the best prefix is the max-mean one (longest on ties);
        // across chains, ties go to larger prefix then lower chain index.
        for (int c = 0; c < static_cast<int>(chains.size()); ++c) {
            if (off[c] >= chains[c].size()) continue;
            double sum = 0, cmean = 0;
            std::size_t clen = 0;
            for (std::size_t j = off[c]; j < chains[c].size(); ++j) {
                sum += chains[c][j];
                const std::size_t len = j - off[c] + 1;
                const double mean = sum / static_cast<double>(len);
                if (clen == 0 || mean > cmean || (mean == cmean && len > clen)) {
                    cmean = mean;
                    clen = len;
                }
            }
            if (best_chain < 0 || cmean > best_mean ||
                (cmean == best_mean && clen > best_len)) {
                best_chain = c;
                best_mean = cmean;
                best_len = clen;
            }
        }
        for (std::size_t j = 0; j < best_len; ++j)
            out.emplace_back(best_chain, static_cast<int>(off[best_chain] + j));
        off[best_chain] += best_len;
    }
    return out;
}

double catch_empirical(const Ranking& r, std::span<const double> values) {
    const auto n = static_cast<std::int64_t>(values.size());
    if (static_cast<std::int64_t>(r.order.size()) != n)
        fail("ranking_size", "ranking and value vector sizes differ");
    std::vector<char> seen(values.size(), 0);
    for (std::int64_t e : r.order) {
        if (e < 0 || e >= n || seen[static_cast<std::size_t>(e)])
            fail("ranking_invalid", "ranking is not a permutation");
        seen[static_cast<std::size_t>(e)] = 1;
    }
    double total = 0;
    for (std::int64_t i = 0; i < n; ++i)
        total += static_cast<double>(n - i) * values[static_cast<std::size_t>(r.order[i])];
    return total;
}

std::pair<Ranking, double> brute_force_optimal(const ScoredForest& f) {
    const int K = f.hierarchy.num_classes();
    const std::int64_t n64 = f.num_events();
    if (n64 > 22) fail("brute_force_too_large", "exhaustive search capped at 22 events");
    const int n = static_cast<int>(n64);

    // Per-event mask of within-object parents; an event is placeable once all
    // its parents are in the placed set.
    std::vector<std::uint32_t> pmask(static_cast<std::size_t>(n), 0);
    for (int m = 0; m < f.num_objects; ++m)
        for (int k = 0; k < K; ++k)
            for (int p : f.hierarchy.parents[static_cast<std::size_t>(k)])
                pmask[static_cast<std::size_t>(m) * K + k] |=
                    std::uint32_t(1) << (m * K + p);

    const std::size_t states = std::size_t(1) << n;
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> dp(states, kNegInf);
    std::vector<std::int8_t> choice(states, -1);
    dp[0] = 0;
    for (std::uint32_t mask = 0; mask < states; ++mask) {
        const double base = dp[mask];
        if (base == kNegInf) continue;
        const double w = static_cast<double>(n - std::popcount(mask));
        for (int e = 0; e < n; ++e) {
            if ((mask >> e) & 1u) continue;
            if (pmask[static_cast<std::size_t>(e)] & ~mask) continue;
            const std::uint32_t next = mask | (std::uint32_t(1) << e);
            const double cand = base + w * f.values[static_cast<std::size_t>(e)];
            if (cand > dp[next]) {
                dp[next] = cand;
                choice[next] = static_cast<std::int8_t>(e);
            }
        }
    }

    Ranking r;
    r.num_objects = f.num_objects;
    r.num_classes = K;
    r.order.resize(static_cast<std::size_t>(n));
    std::uint32_t mask = static_cast<std::uint32_t>(states - 1);
    for (int i = n - 1; i >= 0; --i) {
        const int e = choice[mask];
        r.order[static_cast<std::size_t>(i)] = e;
        mask ^= std::uint32_t(1) << e;
    }
    return {std::move(r), dp[states - 1]};
}

}  // namespace hierrank
