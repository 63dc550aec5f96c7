#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hierrank/hierarchy.hpp"

namespace hierrank {

// The ranking problem instance: M objects over one hierarchy, one value per
// event (raw classifier score or m̂LPR). Rankings must place each event after
// its within-object ancestors; the algorithms maximize
//   CATCH = Σ_i (n-i+1) · value(π_i)   (1-based rank i)
// subject to that constraint.
struct ScoredForest {
    ClassHierarchy hierarchy;
    int num_objects = 0;
    std::vector<double> values;  // M*K

    std::int64_t num_events() const {
        return static_cast<std::int64_t>(num_objects) * hierarchy.num_classes();
    }
};

// Validates shapes and finiteness.
ScoredForest make_forest(ClassHierarchy h, int num_objects, std::vector<double> values);

// A chain partitioned into maximal segments ("blocks") of strictly decreasing
// means: each block is the longest max-mean prefix of what follows it.
struct BlockChain {
    struct Span {
        std::int64_t offset;  // into order
        std::int64_t size;
        double mean;
    };
    std::vector<std::int64_t> order;  // chain members in chain order
    std::vector<Span> blocks;         // consecutive slices of order
};

// The breaking-point partition of one chain (order = positions 0..L-1).
BlockChain block_partition(std::span<const double> chain_values);

// Descending by value, ties by ascending flat event id.
Ranking naive_sort(const ScoredForest& f);

// Reference greedy merge: repeatedly extract the max-mean prefix sub-chain
// (ties: longer, then lower chain index) and append it. Returns
// (chain, offset) pairs in emission order.
std::vector<std::pair<int, int>> chain_merge(
    const std::vector<std::vector<double>>& chains);

// Reference ranking: bottom-up chain merges at every junction, then a final
// merge across roots and objects. O(n^2)-ish; kept as the oracle.
Ranking hier_rank_tree(const ScoredForest& f);

// Fast ranking: per-chain block partitions, k-way block merges, and upstream
// agglomeration. Same CATCH as hier_rank_tree; identical ordering on
// tie-free inputs under the shared tie-break.
Ranking hier_rank_fast(const ScoredForest& f);

// Supernode condensation: repeatedly take the max-mean supernode; emit it if
// its parent is gone, else condense parent+supernode. CATCH-equivalent to
// hier_rank_tree.
Ranking cssa_rank(const ScoredForest& f);

enum class DagConstraint { and_semantics, or_semantics };

// DAG-mode ranking. While the number of single-parent reductions fits the
// budget, enumerates them, ranks each reduction with hier_rank_fast, and
// returns the max-CATCH ranking satisfying the constraint (OR: any reduction;
// AND: every parent before the child). Over budget: AND falls back to the
// greedy min-parent rewiring strategy; OR is an error.
Ranking hier_rank_dag(const ScoredForest& f, DagConstraint constraint,
                      std::int64_t budget = std::int64_t(1) << 20);

// Σ_i (n-i+1) · values(π_i), 1-based rank i.
double catch_empirical(const Ranking& r, std::span<const double> values);

// Exact maximizer by dynamic programming over topological prefixes.
// Exponential state space; guarded to tiny inputs.
std::pair<Ranking, double> brute_force_optimal(const ScoredForest& f);

}  // namespace hierrank
