#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "hierrank/hierarchy.hpp"
#include "hierrank/ranker.hpp"
#include "hierrank/rng.hpp"
#include "hierrank/util.hpp"

using namespace hierrank;

namespace {

std::string err_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

ClassHierarchy tree_of(const std::vector<int>& parent, HierarchyMode mode = HierarchyMode::tree) {
    std::vector<EdgeRow> rows;
    for (std::size_t k = 0; k < parent.size(); ++k)
        rows.push_back({"", "N" + std::to_string(k)});
    for (std::size_t k = 0; k < parent.size(); ++k)
        if (parent[k] >= 0)
            rows.push_back({"N" + std::to_string(parent[k]), "N" + std::to_string(k)});
    return load_hierarchy(rows, mode);
}

ScoredForest random_forest(int K, int M, std::uint64_t seed, bool tied = false) {
    Rng rng(seed);
    std::vector<int> parent(K, -1);
    for (int k = 1; k < K; ++k)
        parent[k] = rng.bernoulli(0.2) ? -1 : static_cast<int>(rng.next() % k);
    auto h = tree_of(parent);
    std::vector<double> vals(static_cast<std::size_t>(K) * M);
    for (auto& v : vals)
        v = tied ? static_cast<double>(rng.next() % 5) / 4.0 : rng.uniform();
    return make_forest(std::move(h), M, std::move(vals));
}

// Exhaustive oracle: try every permutation, keep the best topological one.
double best_catch_by_permutation(const ScoredForest& f) {
    const int n = static_cast<int>(f.num_events());
    Ranking r;
    r.num_objects = f.num_objects;
    r.num_classes = f.hierarchy.num_classes();
    r.order.resize(n);
    std::iota(r.order.begin(), r.order.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
        if (!is_topological(r, f.hierarchy, f.num_objects)) continue;
        best = std::max(best, catch_empirical(r, f.values));
    } while (std::next_permutation(r.order.begin(), r.order.end()));
    return best;
}

}  // namespace

TEST_CASE("make_forest validation") {
    auto h = tree_of({-1, 0});
    CHECK(err_code([&] { make_forest(h, 0, {}); }) == "forest_shape");
    CHECK(err_code([&] { make_forest(h, 2, {1.0, 2.0, 3.0}); }) == "forest_shape");
    CHECK(err_code([&] {
              make_forest(h, 1, {1.0, std::numeric_limits<double>::quiet_NaN()});
          }) == "forest_value");
    auto f = make_forest(h, 2, {1, 2, 3, 4});
    CHECK(f.num_events() == 4);
}

TEST_CASE("block partition of a worked chain") {
    auto bc = block_partition(std::vector<double>{2, 6, 1, 5});
    CHECK(bc.order == std::vector<std::int64_t>{0, 1, 2, 3});
    REQUIRE(bc.blocks.size() == 2);
    CHECK(bc.blocks[0].offset == 0);
    CHECK(bc.blocks[0].size == 2);
    CHECK(bc.blocks[0].mean == doctest::Approx(4.0));
    CHECK(bc.blocks[1].offset == 2);
    CHECK(bc.blocks[1].size == 2);
    CHECK(bc.blocks[1].mean == doctest::Approx(3.0));
}

TEST_CASE("block partition shapes") {
    CHECK(block_partition(std::vector<double>{}).blocks.empty());

    auto single = block_partition(std::vector<double>{7});
    REQUIRE(single.blocks.size() == 1);
    CHECK(single.blocks[0].mean == 7);

    // strictly increasing chain collapses to one block
    auto inc = block_partition(std::vector<double>{1, 2, 3});
    REQUIRE(inc.blocks.size() == 1);
    CHECK(inc.blocks[0].size == 3);
    CHECK(inc.blocks[0].mean == doctest::Approx(2.0));

    // strictly decreasing chain stays fully split
    auto dec = block_partition(std::vector<double>{3, 2, 1});
    CHECK(dec.blocks.size() == 3);

    // block means decrease strictly on random chains
    Rng rng(17);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> vals(1 + rng.next() % 12);
        for (auto& v : vals) v = rng.uniform();
        auto bc = block_partition(vals);
        std::int64_t covered = 0;
        for (std::size_t i = 0; i < bc.blocks.size(); ++i) {
            covered += bc.blocks[i].size;
            if (i) CHECK(bc.blocks[i].mean < bc.blocks[i - 1].mean);
            // the block really is the max-mean prefix of its suffix
            double run = 0, best = -1;
            for (std::int64_t j = 0; j < bc.blocks[i].size; ++j) {
                run += vals[bc.blocks[i].offset + j];
                best = std::max(best, run / (j + 1));
            }
            CHECK(bc.blocks[i].mean == doctest::Approx(best));
        }
        CHECK(covered == static_cast<std::int64_t>(vals.size()));
    }

    CHECK(err_code([&] {
              block_partition(std::vector<double>{1.0, std::nan("")});
          }) == "chain_value");
}

TEST_CASE("chain merge worked example") {
    // two chains: (0.8, 0.1) and (0.3, 0.9) interleave as
    // first(0), first(1), second(1), second(0)
    auto out = chain_merge({{0.8, 0.1}, {0.3, 0.9}});
    std::vector<std::pair<int, int>> want = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(out == want);
}

TEST_CASE("chain merge tie-breaks") {
    // equal best-prefix means (1.0 each): the longer prefix goes first
    auto longer = chain_merge({{1.0}, {0.5, 1.5}});
    std::vector<std::pair<int, int>> want_longer = {{1, 0}, {1, 1}, {0, 0}};
    CHECK(longer == want_longer);
    // equal mean and length: lower chain index first
    auto lower = chain_merge({{2.0}, {2.0}});
    std::vector<std::pair<int, int>> want_lower = {{0, 0}, {1, 0}};
    CHECK(lower == want_lower);
}

TEST_CASE("reference ranking on the two-child example") {
    // A -> {B, C}, values A=3, B=3.6, C=4; merged order is A, C, B
    auto h = load_hierarchy({{"A", "B"}, {"A", "C"}}, HierarchyMode::tree);
    auto f = make_forest(h, 1, {3.0, 3.6, 4.0});
    auto r = hier_rank_tree(f);
    CHECK(r.order == std::vector<std::int64_t>{0, 2, 1});
    CHECK(catch_empirical(r, f.values) ==
          doctest::Approx(3 * 3.0 + 2 * 4.0 + 1 * 3.6));
    CHECK(is_topological(r, h, 1));
}

TEST_CASE("an increasing chain is emitted whole") {
    auto h = tree_of({-1, 0, 1});
    auto f = make_forest(h, 1, {1.0, 2.0, 3.0});
    for (auto* fn : {&hier_rank_tree, &hier_rank_fast, &cssa_rank}) {
        auto r = (*fn)(f);
        CHECK(r.order == std::vector<std::int64_t>{0, 1, 2});
    }
}

TEST_CASE("naive sort orders by value with flat-id ties") {
    auto h = tree_of({-1, -1});
    auto f = make_forest(h, 2, {0.5, 0.9, 0.5, 0.1});
    auto r = naive_sort(f);
    CHECK(r.order == std::vector<std::int64_t>{1, 0, 2, 3});
}

TEST_CASE("mode guards") {
    auto dag = tree_of({-1, 0}, HierarchyMode::dag);
    auto fd = make_forest(dag, 1, {1.0, 0.5});
    CHECK(err_code([&] { hier_rank_tree(fd); }) == "hierarchy_mode");
    CHECK(err_code([&] { hier_rank_fast(fd); }) == "hierarchy_mode");
    CHECK(err_code([&] { cssa_rank(fd); }) == "hierarchy_mode");

    auto tree = tree_of({-1, 0});
    auto ft = make_forest(tree, 1, {1.0, 0.5});
    CHECK(err_code([&] { hier_rank_dag(ft, DagConstraint::and_semantics); }) ==
          "hierarchy_mode");
}

TEST_CASE("fast ranking equals the reference on tie-free forests") {
    Rng rng(4242);
    for (int t = 0; t < 40; ++t) {
        const int K = 1 + static_cast<int>(rng.next() % 12);
        const int M = 1 + static_cast<int>(rng.next() % 20);
        auto f = random_forest(K, M, 1000 + t);
        auto ref = hier_rank_tree(f);
        auto fast = hier_rank_fast(f);
        CHECK(ref.order == fast.order);
        CHECK(is_topological(ref, f.hierarchy, M));
        CHECK(std::abs(catch_empirical(ref, f.values) -
                       catch_empirical(fast, f.values)) <= 1e-9);
    }
}

TEST_CASE("tied values keep CATCH equal across implementations") {
    Rng rng(777);
    for (int t = 0; t < 30; ++t) {
        const int K = 1 + static_cast<int>(rng.next() % 10);
        const int M = 1 + static_cast<int>(rng.next() % 12);
        auto f = random_forest(K, M, 2000 + t, /*tied=*/true);
        auto ref = hier_rank_tree(f);
        auto fast = hier_rank_fast(f);
        auto cssa = cssa_rank(f);
        const double c0 = catch_empirical(ref, f.values);
        CHECK(std::abs(catch_empirical(fast, f.values) - c0) <= 1e-9);
        CHECK(std::abs(catch_empirical(cssa, f.values) - c0) <= 1e-9);
        CHECK(is_topological(fast, f.hierarchy, M));
        CHECK(is_topological(cssa, f.hierarchy, M));
    }
}

TEST_CASE("cssa matches the reference CATCH on tie-free forests") {
    for (int t = 0; t < 30; ++t) {
        auto f = random_forest(2 + t % 9, 1 + t % 7, 3000 + t);
        auto ref = hier_rank_tree(f);
        auto cssa = cssa_rank(f);
        CHECK(std::abs(catch_empirical(ref, f.values) -
                       catch_empirical(cssa, f.values)) <= 1e-9);
        CHECK(is_topological(cssa, f.hierarchy, f.num_objects));
    }
}

TEST_CASE("dynamic program agrees with permutation search") {
    Rng rng(555);
    for (int t = 0; t < 12; ++t) {
        const int K = 2 + static_cast<int>(rng.next() % 2);  // 2..3
        const int M = 1 + static_cast<int>(rng.next() % 2);  // 1..2
        auto f = random_forest(K, M, 4000 + t);
        auto [r, value] = brute_force_optimal(f);
        CHECK(is_topological(r, f.hierarchy, M));
        CHECK(catch_empirical(r, f.values) == doctest::Approx(value).epsilon(1e-12));
        CHECK(value == doctest::Approx(best_catch_by_permutation(f)).epsilon(1e-12));
        // the greedy rankers achieve the optimum
        CHECK(catch_empirical(hier_rank_tree(f), f.values) ==
              doctest::Approx(value).epsilon(1e-9));
    }

    auto wide = tree_of(std::vector<int>(23, -1));  // 23 isolated roots
    auto big = make_forest(wide, 1, std::vector<double>(23, 0.5));
    CHECK(err_code([&] { brute_force_optimal(big); }) == "brute_force_too_large");
}

TEST_CASE("catch_empirical weights and errors") {
    auto h = tree_of({-1, 0});
    auto f = make_forest(h, 1, {0.25, 0.5});
    Ranking r;
    r.num_objects = 1;
    r.num_classes = 2;
    r.order = {0, 1};
    CHECK(catch_empirical(r, f.values) == doctest::Approx(2 * 0.25 + 1 * 0.5));
    r.order = {0};
    CHECK(err_code([&] { catch_empirical(r, f.values); }) == "ranking_size");
    r.order = {0, 0};
    CHECK(err_code([&] { catch_empirical(r, f.values); }) == "ranking_invalid");
}

TEST_CASE("dag ranking on a diamond") {
    // A -> C <- B; C needs both parents under AND, its best parent under OR
    auto h = load_hierarchy({{"A", "C"}, {"B", "C"}}, HierarchyMode::dag);
    const int A = h.id_of.at("A"), C = h.id_of.at("C"), B = h.id_of.at("B");
    REQUIRE(A == 0);
    REQUIRE(C == 1);
    REQUIRE(B == 2);
    auto f = make_forest(h, 1, {0.9, 0.8, 0.1});  // A=0.9, C=0.8, B=0.1

    auto or_rank = hier_rank_dag(f, DagConstraint::or_semantics);
    CHECK(or_rank.order == std::vector<std::int64_t>{A, C, B});

    auto and_rank = hier_rank_dag(f, DagConstraint::and_semantics);
    CHECK(and_rank.order == std::vector<std::int64_t>{A, B, C});
    CHECK(is_topological(and_rank, h, 1));

    // AND falls back to greedy rewiring when the budget is too small
    auto greedy = hier_rank_dag(f, DagConstraint::and_semantics, 1);
    CHECK(is_topological(greedy, h, 1));
    CHECK(greedy.order == std::vector<std::int64_t>{A, B, C});

    CHECK(err_code([&] { hier_rank_dag(f, DagConstraint::or_semantics, 1); }) ==
          "dag_budget");
    CHECK(err_code([&] { hier_rank_dag(f, DagConstraint::or_semantics, 0); }) ==
          "dag_budget");
}

TEST_CASE("dag ranking reduces to the tree ranking on tree-shaped dags") {
    for (int t = 0; t < 10; ++t) {
        Rng rng(6000 + t);
        const int K = 2 + static_cast<int>(rng.next() % 8);
        std::vector<int> parent(K, -1);
        for (int k = 1; k < K; ++k)
            parent[k] = rng.bernoulli(0.2) ? -1 : static_cast<int>(rng.next() % k);
        const int M = 1 + static_cast<int>(rng.next() % 5);
        std::vector<double> vals(static_cast<std::size_t>(K) * M);
        for (auto& v : vals) v = rng.uniform();

        auto fd = make_forest(tree_of(parent, HierarchyMode::dag), M, vals);
        auto ft = make_forest(tree_of(parent), M, vals);
        auto want = hier_rank_fast(ft).order;
        CHECK(hier_rank_dag(fd, DagConstraint::and_semantics).order == want);
        CHECK(hier_rank_dag(fd, DagConstraint::or_semantics).order == want);
    }
}

TEST_CASE("dag AND ranking stays topological on random dags") {
    Rng rng(8100);
    for (int t = 0; t < 20; ++t) {
        const int K = 3 + static_cast<int>(rng.next() % 6);
        std::vector<EdgeRow> rows;
        for (int k = 0; k < K; ++k) rows.push_back({"", "N" + std::to_string(k)});
        for (int k = 1; k < K; ++k) {
            int nparents = 1 + static_cast<int>(rng.next() % 2);
            std::vector<int> ps;
            for (int j = 0; j < nparents; ++j) {
                int p = static_cast<int>(rng.next() % k);
                if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
            }
            for (int p : ps)
                rows.push_back({"N" + std::to_string(p), "N" + std::to_string(k)});
        }
        auto h = load_hierarchy(rows, HierarchyMode::dag);
        const int M = 1 + static_cast<int>(rng.next() % 4);
        std::vector<double> vals(static_cast<std::size_t>(K) * M);
        for (auto& v : vals) v = rng.uniform();
        auto f = make_forest(h, M, vals);

        auto enumerated = hier_rank_dag(f, DagConstraint::and_semantics);
        CHECK(is_topological(enumerated, h, M));
        auto greedy = hier_rank_dag(f, DagConstraint::and_semantics, 1);
        CHECK(is_topological(greedy, h, M));
        // enumeration never does worse than the greedy fallback
        CHECK(catch_empirical(enumerated, f.values) >=
              catch_empirical(greedy, f.values) - 1e-9);

        auto orr = hier_rank_dag(f, DagConstraint::or_semantics);
        CHECK(orr.size() == f.num_events());
    }
}
