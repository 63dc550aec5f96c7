// Reference ranking path: literal greedy max-mean-prefix merges. Quadratic-ish
// and allocation-happy on purpose; the fast path is checked against it.

#include <cstdint>
#include <utility>
#include <vector>

#include "hierrank/ranker.hpp"
#include "hierrank/util.hpp"

namespace hierrank {
namespace {

// Merge event chains by repeatedly extracting the best max-mean prefix.
// Cross-chain ties: longer prefix, then smaller head event id.
std::vector<std::int64_t> merge_event_chains(
    const std::vector<std::vector<std::int64_t>>& chains,
    const std::vector<double>& values) {
    std::size_t total = 0;
    for (const auto& c : chains) total += c.size();
    std::vector<std::size_t> off(chains.size(), 0);
    std::vector<std::int64_t> out;
    out.reserve(total);
    while (out.size() < total) {
        int best_chain = -1;
        std::size_t best_len = 0;
        double best_mean = 0;
        std::int64_t best_head = 0;
        for (int c = 0; c < static_cast<int>(chains.size()); ++c) {
            if (off[c] >= chains[c].size()) continue;
            double sum = 0, cmean = 0;
            std::size_t clen = 0;
            for (std::size_t j = off[c]; j < chains[c].size(); ++j) {
                sum += values[static_cast<std::size_t>(chains[c][j])];
                const std::size_t len = j - off[c] + 1;
                const double mean = sum / static_cast<double>(len);
                if (clen == 0 || mean > cmean || (mean == cmean && len > clen)) {
                    cmean = mean;
                    clen = len;
                }
            }
            const std::int64_t head = chains[c][off[c]];
            if (best_chain < 0 || cmean > best_mean ||
                (cmean == best_mean &&
                 (clen > best_len || (clen == best_len && head < best_head)))) {
                best_chain = c;
                best_len = clen;
                best_mean = cmean;
                best_head = head;
            }
        }
        for (std::size_t j = 0; j < best_len; ++j)
            out.push_back(chains[best_chain][off[best_chain] + j]);
        off[best_chain] += best_len;
    }
    return out;
}

std::vector<std::int64_t> rank_subtree_ref(const ClassHierarchy& h, int m,
                                           const std::vector<double>& values,
                                           int cls) {
    const auto& ch = h.children[static_cast<std::size_t>(cls)];
    std::vector<std::int64_t> merged;
    if (ch.size() == 1) {
        merged = rank_subtree_ref(h, m, values, ch[0]);
    } else if (ch.size() > 1) {
        std::vector<std::vector<std::int64_t>> subs;
        subs.reserve(ch.size());
        for (int c : ch) subs.push_back(rank_subtree_ref(h, m, values, c));
        merged = merge_event_chains(subs, values);
    }
    std::vector<std::int64_t> chain;
    chain.reserve(merged.size() + 1);
    chain.push_back(static_cast<std::int64_t>(m) * h.num_classes() + cls);
    chain.insert(chain.end(), merged.begin(), merged.end());
    return chain;
}

}  // namespace

Ranking hier_rank_tree(const ScoredForest& f) {
    if (f.hierarchy.mode != HierarchyMode::tree)
        fail("hierarchy_mode", "hier_rank_tree requires a tree hierarchy");
    const int K = f.hierarchy.num_classes();
    std::vector<int> root_ids;
    for (int k = 0; k < K; ++k)
        if (f.hierarchy.is_root(k)) root_ids.push_back(k);

    std::vector<std::vector<std::int64_t>> chains;
    chains.reserve(static_cast<std::size_t>(f.num_objects) * root_ids.size());
    for (int m = 0; m < f.num_objects; ++m)
        for (int rt : root_ids)
            chains.push_back(rank_subtree_ref(f.hierarchy, m, f.values, rt));

    Ranking r;
    r.num_objects = f.num_objects;
    r.num_classes = K;
    r.order = merge_event_chains(chains, f.values);
    return r;
}

}  // namespace hierrank
