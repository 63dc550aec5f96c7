#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

#include "hierrank/ranker.hpp"
#include "hierrank/util.hpp"
#include "ranker_blocks.hpp"

namespace hierrank::detail {

Seq merge_sibling_seqs(std::vector<Seq>&& seqs) {
    std::size_t total = 0;
    for (const Seq& s : seqs) total += s.size();
    Seq out;
    out.reserve(total);
    std::vector<std::size_t> front(seqs.size(), 0);
    // Sequences are worst-first, so repeatedly emitting the globally worst
    // front yields the worst-first interleave of all siblings.
    for (std::size_t picked = 0; picked < total; ++picked) {
        int worst = -1;
        for (int i = 0; i < static_cast<int>(seqs.size()); ++i) {
            if (front[i] >= seqs[i].size()) continue;
            if (worst < 0 || ranks_before(seqs[worst][front[worst]], seqs[i][front[i]]))
                worst = i;
        }
        out.push_back(seqs[worst][front[worst]]);
        ++front[worst];
    }
    return out;
}

Seq rank_subtree_blocks(const ClassHierarchy& h, int m,
                        std::span<const double> values, int cls,
                        BlockPool& pool) {
    const auto& ch = h.children[static_cast<std::size_t>(cls)];
    Seq seq;
    if (ch.size() == 1) {
        seq = rank_subtree_blocks(h, m, values, ch[0], pool);
    } else if (ch.size() > 1) {
        std::vector<Seq> subs;
        subs.reserve(ch.size());
        for (int c : ch) subs.push_back(rank_subtree_blocks(h, m, values, c, pool));
        seq = merge_sibling_seqs(std::move(subs));
    }
    const std::int64_t ev = static_cast<std::int64_t>(m) * h.num_classes() + cls;
    cascade_prepend(pool, seq, singleton(pool, ev, values[static_cast<std::size_t>(ev)]));
    return seq;
}

Ranking merge_root_seqs(std::vector<Seq>&& seqs, const BlockPool& pool,
                        int num_objects, int num_classes) {
    Ranking r;
    r.num_objects = num_objects;
    r.num_classes = num_classes;
    std::size_t total = 0;
    for (const Seq& s : seqs)
        for (const FBlock& b : s) total += static_cast<std::size_t>(b.size);
    r.order.reserve(total);

    struct Entry {
        double mean;
        std::int64_t size;
        std::int64_t head;
        int seq;
    };
    auto ranks_after = [](const Entry& a, const Entry& b) {
        if (a.mean != b.mean) return a.mean < b.mean;
        if (a.size != b.size) return a.size < b.size;
        return a.head > b.head;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(ranks_after)> pq(ranks_after);
    auto push_back_of = [&](int i) {
        const FBlock& b = seqs[static_cast<std::size_t>(i)].back();
        pq.push(Entry{b.mean(), b.size, b.head, i});
    };
    for (int i = 0; i < static_cast<int>(seqs.size()); ++i)
        if (!seqs[static_cast<std::size_t>(i)].empty()) push_back_of(i);

    while (!pq.empty()) {
        const int i = pq.top().seq;
        pq.pop();
        Seq& s = seqs[static_cast<std::size_t>(i)];
        for (int seg = s.back().first; seg != -1; seg = pool.next[static_cast<std::size_t>(seg)])
            r.order.push_back(pool.event[static_cast<std::size_t>(seg)]);
        s.pop_back();
        if (!s.empty()) push_back_of(i);
    }
    return r;
}

}  // namespace hierrank::detail

namespace hierrank {

Ranking hier_rank_fast(const ScoredForest& f) {
    if (f.hierarchy.mode != HierarchyMode::tree)
        fail("hierarchy_mode", "hier_rank_fast requires a tree hierarchy");
    const int K = f.hierarchy.num_classes();
    std::vector<int> root_ids;
    for (int k = 0; k < K; ++k)
        if (f.hierarchy.is_root(k)) root_ids.push_back(k);

    detail::BlockPool pool;
    pool.event.reserve(static_cast<std::size_t>(f.num_events()));
    pool.next.reserve(static_cast<std::size_t>(f.num_events()));

    std::vector<detail::Seq> roots;
    roots.reserve(static_cast<std::size_t>(f.num_objects) * root_ids.size());
    for (int m = 0; m < f.num_objects; ++m)
        for (int rt : root_ids)
            roots.push_back(detail::rank_subtree_blocks(f.hierarchy, m, f.values, rt, pool));
    return detail::merge_root_seqs(std::move(roots), pool, f.num_objects, K);
}

}  // namespace hierrank
