// DAG-constrained ranking. Small instances: enumerate single-parent
// reductions, rank each as a tree, keep the best admissible one. Large AND
// instances: transitively reduce the class DAG, then per object repeatedly
// rewire multi-parent classes onto their lowest-valued parent until a tree
// remains, and rank that.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "hierrank/ranker.hpp"
#include "hierrank/util.hpp"
#include "ranker_blocks.hpp"

namespace hierrank {
namespace {

ClassHierarchy tree_from_parents(const std::vector<std::string>& names,
                                 const std::vector<std::vector<int>>& pa) {
    std::vector<EdgeRow> rows;
    rows.reserve(names.size() * 2);
    for (std::size_t k = 0; k < names.size(); ++k)
        rows.emplace_back("", names[k]);  // declare in id order
    for (std::size_t k = 0; k < names.size(); ++k)
        for (int p : pa[k]) rows.emplace_back(names[static_cast<std::size_t>(p)], names[k]);
    return load_hierarchy(rows, HierarchyMode::tree);
}

bool acyclic(const std::vector<std::vector<int>>& pa) {
    const int K = static_cast<int>(pa.size());
    std::vector<int> indeg(pa.size(), 0);
    std::vector<std::vector<int>> ch(pa.size());
    for (int k = 0; k < K; ++k)
        for (int p : pa[static_cast<std::size_t>(k)]) {
            ++indeg[static_cast<std::size_t>(k)];
            ch[static_cast<std::size_t>(p)].push_back(k);
        }
    std::vector<int> queue;
    for (int k = 0; k < K; ++k)
        if (indeg[static_cast<std::size_t>(k)] == 0) queue.push_back(k);
    int seen = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        ++seen;
        for (int c : ch[static_cast<std::size_t>(queue[i])])
            if (--indeg[static_cast<std::size_t>(c)] == 0) queue.push_back(c);
    }
    return seen == K;
}

// Drop every edge (p, k) for which p still reaches k through another child.
std::vector<std::vector<int>> transitive_reduction(const ClassHierarchy& h) {
    const int K = h.num_classes();
    std::vector<std::vector<char>> reach(static_cast<std::size_t>(K),
                                         std::vector<char>(static_cast<std::size_t>(K), 0));
    // Process in reverse topological order so child closures are ready.
    for (auto it = h.topo.rbegin(); it != h.topo.rend(); ++it) {
        const int v = *it;
        for (int c : h.children[static_cast<std::size_t>(v)]) {
            reach[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)] = 1;
            for (int t = 0; t < K; ++t)
                if (reach[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)])
                    reach[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)] = 1;
        }
    }
    std::vector<std::vector<int>> pa(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        for (int p : h.parents[static_cast<std::size_t>(k)]) {
            bool redundant = false;
            for (int c : h.children[static_cast<std::size_t>(p)])
                if (c != k && reach[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)]) {
                    redundant = true;
                    break;
                }
            if (!redundant) pa[static_cast<std::size_t>(k)].push_back(p);
        }
    }
    return pa;
}

Ranking rank_greedy_and(const ScoredForest& f) {
    const ClassHierarchy& h = f.hierarchy;
    const int K = h.num_classes();
    const auto reduced = transitive_reduction(h);

    detail::BlockPool pool;
    pool.event.reserve(static_cast<std::size_t>(f.num_events()));
    pool.next.reserve(static_cast<std::size_t>(f.num_events()));
    std::vector<detail::Seq> seqs;

    const int cap = K * K + 100;
    for (int m = 0; m < f.num_objects; ++m) {
        auto pa = reduced;
        for (int iter = 0;; ++iter) {
            int best_p = -1, best_v = -1;
            double best_score = 0;
            for (int v = 0; v < K; ++v) {
                if (pa[static_cast<std::size_t>(v)].size() < 2) continue;
                for (int p : pa[static_cast<std::size_t>(v)]) {
                    const double s =
                        f.values[static_cast<std::size_t>(m) * K + static_cast<std::size_t>(p)];
                    if (best_p < 0 || s < best_score ||
                        (s == best_score && (p < best_p || (p == best_p && v < best_v)))) {
                        best_p = p;
                        best_v = v;
                        best_score = s;
                    }
                }
            }
            if (best_p < 0) break;  // all classes single-parent: tree reached
            if (iter >= cap) fail("dag_rewire_stuck", "parent rewiring did not converge");

            // Rewiring is only safe when v's parents are pairwise unordered;
            // earlier rewires can reintroduce shortcut edges, so first drop
            // any direct edge still implied through another parent of v.
            std::vector<std::vector<int>> ch(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k)
                for (int p : pa[static_cast<std::size_t>(k)])
                    ch[static_cast<std::size_t>(p)].push_back(k);
            auto& pv = pa[static_cast<std::size_t>(best_v)];
            std::vector<int> kept;
            for (int q : pv) {
                std::vector<char> seen(static_cast<std::size_t>(K), 0);
                std::vector<int> stack = {q};
                seen[static_cast<std::size_t>(q)] = 1;
                while (!stack.empty()) {
                    const int x = stack.back();
                    stack.pop_back();
                    for (int c : ch[static_cast<std::size_t>(x)])
                        if (!seen[static_cast<std::size_t>(c)]) {
                            seen[static_cast<std::size_t>(c)] = 1;
                            stack.push_back(c);
                        }
                }
                bool redundant = false;
                for (int q2 : pv)
                    if (q2 != q && seen[static_cast<std::size_t>(q2)]) {
                        redundant = true;
                        break;
                    }
                if (!redundant) kept.push_back(q);
            }
            if (kept.size() < pv.size()) {
                pv = std::move(kept);  // progress: redundant edges removed
                continue;
            }

            // v keeps only its weakest parent u; u inherits v's other parents.
            auto& pu = pa[static_cast<std::size_t>(best_p)];
            for (int p : pv)
                if (p != best_p && !std::count(pu.begin(), pu.end(), p)) pu.push_back(p);
            std::sort(pu.begin(), pu.end());
            pv.assign(1, best_p);
            if (!acyclic(pa)) fail("dag_rewire_cycle", "parent rewiring produced a cycle");
        }
        const ClassHierarchy tree = tree_from_parents(h.names, pa);
        for (int k = 0; k < K; ++k)
            if (tree.is_root(k))
                seqs.push_back(detail::rank_subtree_blocks(tree, m, f.values, k, pool));
    }
    Ranking r = detail::merge_root_seqs(std::move(seqs), pool, f.num_objects, K);
    if (!is_topological(r, h, f.num_objects))
        fail("dag_and_infeasible", "greedy rewiring produced a non-topological ranking");
    return r;
}

}  // namespace

Ranking hier_rank_dag(const ScoredForest& f, DagConstraint constraint,
                      std::int64_t budget) {
    if (f.hierarchy.mode != HierarchyMode::dag)
        fail("hierarchy_mode", "hier_rank_dag requires a dag-mode hierarchy");
    if (budget < 1) fail("dag_budget", "reduction budget must be positive");
    const ClassHierarchy& h = f.hierarchy;
    const int K = h.num_classes();

    std::vector<int> multi;  // classes with a parent choice to make
    std::int64_t combos = 1;
    for (int k = 0; k < K; ++k) {
        const auto np = static_cast<std::int64_t>(h.parents[static_cast<std::size_t>(k)].size());
        if (np < 2) continue;
        multi.push_back(k);
        if (combos <= budget) combos *= np;
    }

    if (combos > budget) {
        if (constraint == DagConstraint::or_semantics)
            fail("dag_budget", "reduction enumeration exceeds budget; OR semantics has no greedy fallback");
        return rank_greedy_and(f);
    }

    std::vector<std::size_t> choice(multi.size(), 0);
    Ranking best;
    double best_catch = 0;
    bool have_best = false;
    for (std::int64_t c = 0; c < combos; ++c) {
        std::vector<std::vector<int>> pa(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) pa[static_cast<std::size_t>(k)] = h.parents[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < multi.size(); ++i) {
            const int v = multi[i];
            pa[static_cast<std::size_t>(v)].assign(
                1, h.parents[static_cast<std::size_t>(v)][choice[i]]);
        }
        const ClassHierarchy tree = tree_from_parents(h.names, pa);
        Ranking r = hier_rank_fast(make_forest(tree, f.num_objects, f.values));
        const bool ok = constraint == DagConstraint::or_semantics ||
                        is_topological(r, h, f.num_objects);
        if (ok) {
            const double cc = catch_empirical(r, f.values);
            if (!have_best || cc > best_catch) {
                best = std::move(r);
                best_catch = cc;
                have_best = true;
            }
        }
        // mixed-radix increment over the parent choices
        for (std::size_t i = 0; i < multi.size(); ++i) {
            if (++choice[i] < h.parents[static_cast<std::size_t>(multi[i])].size()) break;
            choice[i] = 0;
        }
    }
    if (have_best) return best;
    if (constraint == DagConstraint::and_semantics) return rank_greedy_and(f);
    fail("dag_or_infeasible", "no single-parent reduction available");
}

}  // namespace hierrank
