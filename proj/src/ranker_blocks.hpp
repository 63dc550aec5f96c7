#pragma once

// Internals shared by the fast ranker and the DAG greedy path. Blocks live in
// a pool of singly-linked event segments so concatenation is O(1); a
// subtree's blocks sit in a vector ordered worst-first (best block at the
// back), which makes the upstream prepend an amortized pop/merge cascade.

#include <cstdint>
#include <span>
#include <vector>

#include "hierrank/hierarchy.hpp"

namespace hierrank::detail {

struct BlockPool {
    std::vector<std::int64_t> event;
    std::vector<int> next;  // -1 terminates

    int add(std::int64_t ev) {
        event.push_back(ev);
        next.push_back(-1);
        return static_cast<int>(event.size()) - 1;
    }
};

struct FBlock {
    double sum = 0;
    std::int64_t size = 0;
    std::int64_t head = 0;  // flat id of first event; deterministic tie-break
    int first = -1;         // pool segment indices
    int last = -1;

    double mean() const { return sum / static_cast<double>(size); }
};

// Ranks-before: mean desc, then size desc, then head asc.
inline bool ranks_before(const FBlock& a, const FBlock& b) {
    if (a.mean() != b.mean()) return a.mean() > b.mean();
    if (a.size != b.size) return a.size > b.size;
    return a.head < b.head;
}

inline FBlock singleton(BlockPool& pool, std::int64_t ev, double value) {
    int seg = pool.add(ev);
    return FBlock{value, 1, ev, seg, seg};
}

// a followed by b; both consumed.
inline FBlock concat(BlockPool& pool, FBlock a, const FBlock& b) {
    pool.next[a.last] = b.first;
    a.last = b.last;
    a.sum += b.sum;
    a.size += b.size;
    return a;
}

// Worst-first block list for one (object, subtree) chain.
using Seq = std::vector<FBlock>;

// Prepend blk to the chain represented by seq, restoring strictly decreasing
// means by merging while the prefix mean does not exceed the next block's.
inline void cascade_prepend(BlockPool& pool, Seq& seq, FBlock blk) {
    while (!seq.empty() && blk.mean() <= seq.back().mean()) {
        blk = concat(pool, blk, seq.back());
        seq.pop_back();
    }
    seq.push_back(blk);
}

// Interleave sibling chains by repeatedly taking the globally worst front
// (fronts are the worst blocks), producing one worst-first sequence.
Seq merge_sibling_seqs(std::vector<Seq>&& seqs);

// Blocks for the subtree rooted at cls, for object m.
Seq rank_subtree_blocks(const ClassHierarchy& h, int m,
                        std::span<const double> values, int cls,
                        BlockPool& pool);

// Heap merge of all root sequences into the final ranking.
Ranking merge_root_seqs(std::vector<Seq>&& seqs, const BlockPool& pool,
                        int num_objects, int num_classes);

}  // namespace hierrank::detail
