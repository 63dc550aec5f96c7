#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "hierrank/hierarchy.hpp"
#include "hierrank/metrics.hpp"
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

Ranking identity_ranking(int n) {
    Ranking r;
    r.num_objects = n;
    r.num_classes = 1;
    r.order.resize(n);
    std::iota(r.order.begin(), r.order.end(), 0);
    return r;
}

}  // namespace

TEST_CASE("hit curve on a hand example") {
    // ranked labels: 1, 0, 1
    auto r = identity_ranking(3);
    std::vector<std::uint8_t> labels = {1, 0, 1};
    auto hc = hit_curve(r, labels);
    CHECK(hc.total_positives == 2);
    CHECK(hc.hits == std::vector<std::int64_t>{1, 1, 2});
    CHECK(hc.auc == 3 * 1 + 2 * 0 + 1 * 1);  // == 4, exactly

    // all positives up front
    std::vector<std::uint8_t> perfect = {1, 1, 1};
    CHECK(hit_curve(r, perfect).auc == 6);
}

TEST_CASE("auc equals the labels' own CATCH bit for bit") {
    Rng rng(31);
    auto h = load_hierarchy({{"A", "B"}}, HierarchyMode::tree);
    for (int t = 0; t < 20; ++t) {
        const int M = 5 + static_cast<int>(rng.next() % 40);
        std::vector<double> vals(static_cast<std::size_t>(M) * 2);
        for (auto& v : vals) v = rng.uniform();
        auto f = make_forest(h, M, vals);
        auto r = hier_rank_fast(f);
        std::vector<std::uint8_t> labels(vals.size());
        std::vector<double> label_vals(vals.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            labels[i] = rng.bernoulli(0.3);
            label_vals[i] = labels[i];
        }
        auto hc = hit_curve(r, labels);
        CHECK(hc.auc == catch_empirical(r, label_vals));  // integers in double form
        CHECK(hc.hits.back() == hc.total_positives);
    }
}

TEST_CASE("hit curve validation") {
    auto r = identity_ranking(2);
    std::vector<std::uint8_t> short_labels = {1};
    CHECK(err_code([&] { hit_curve(r, short_labels); }) == "ranking_size");
    std::vector<std::uint8_t> bad = {2, 0};
    CHECK(err_code([&] { hit_curve(r, bad); }) == "label_value");
    auto broken = r;
    broken.order = {0, 0};
    std::vector<std::uint8_t> ok = {1, 0};
    CHECK(err_code([&] { hit_curve(broken, ok); }) == "ranking_invalid");
}

TEST_CASE("precision and recall at depth") {
    auto r = identity_ranking(10);
    std::vector<std::uint8_t> labels = {1, 1, 0, 1, 0, 0, 0, 0, 0, 0};

    auto full = precision_recall_at(r, labels, 1.0);
    CHECK(full.depth == 10);
    CHECK(full.recall == 1.0);
    CHECK(full.precision == doctest::Approx(0.3));  // prevalence at kappa = 1

    auto top2 = precision_recall_at(r, labels, 0.2);
    CHECK(top2.depth == 2);
    CHECK(top2.precision == 1.0);
    CHECK(top2.recall == doctest::Approx(2.0 / 3.0));

    // exact products must not creep up to the next integer
    auto nudged = precision_recall_at(r, labels, 0.5);
    CHECK(nudged.depth == 5);
    auto frac = precision_recall_at(r, labels, 0.55);
    CHECK(frac.depth == 6);  // ceil(5.5)

    CHECK(err_code([&] { precision_recall_at(r, labels, 0.0); }) == "kappa_range");
    CHECK(err_code([&] { precision_recall_at(r, labels, 1.5); }) == "kappa_range");
    std::vector<std::uint8_t> none(10, 0);
    CHECK(err_code([&] { precision_recall_at(r, none, 0.5); }) == "no_positives");

    auto curve = pr_curve(r, labels);
    REQUIRE(curve.size() == 10);
    CHECK(curve[0].depth == 1);
    CHECK(curve[0].precision == 1.0);
    CHECK(curve[9].recall == 1.0);
    for (std::size_t i = 0; i < curve.size(); ++i)
        CHECK(curve[i].depth == static_cast<std::int64_t>(i) + 1);
}

TEST_CASE("perfect ranking at kappa equal to prevalence") {
    const int n = 40;
    auto r = identity_ranking(n);
    std::vector<std::uint8_t> labels(n, 0);
    for (int i = 0; i < 10; ++i) labels[i] = 1;  // prevalence 0.25
    auto pr = precision_recall_at(r, labels, 0.25);
    CHECK(pr.depth == 10);
    CHECK(pr.precision == 1.0);
    CHECK(pr.recall == 1.0);
}

TEST_CASE("fdp and f1 at a cutoff") {
    auto r = identity_ranking(4);
    std::vector<std::uint8_t> labels = {1, 0, 1, 0};

    auto at2 = fdp_f1_at(r, labels, 2);
    CHECK(at2.cutoff == 2);
    CHECK(at2.fdp == doctest::Approx(0.5));
    CHECK(at2.precision == doctest::Approx(0.5));
    CHECK(at2.recall == doctest::Approx(0.5));
    CHECK(at2.f1 == doctest::Approx(0.5));

    auto at0 = fdp_f1_at(r, labels, 0);
    CHECK(at0.fdp == 0.0);  // zero discoveries make zero false ones
    CHECK(at0.precision == 0.0);
    CHECK(at0.f1 == 0.0);

    auto at4 = fdp_f1_at(r, labels, 4);
    CHECK(at4.recall == 1.0);
    CHECK(at4.f1 == doctest::Approx(2.0 * 0.5 * 1.0 / 1.5));

    CHECK(err_code([&] { fdp_f1_at(r, labels, -1); }) == "cutoff_range");
    CHECK(err_code([&] { fdp_f1_at(r, labels, 5); }) == "cutoff_range");
}

TEST_CASE("target-FDR cutoff selection") {
    auto r = identity_ranking(6);
    std::vector<std::uint8_t> labels = {1, 1, 0, 1, 0, 0};

    // fdp by depth: 0, 0, 1/3, 1/4, 2/5, 1/2
    auto d = select_cutoff(r, labels, CutoffObjective::target_fdr, 0.30);
    CHECK(d.objective == CutoffObjective::target_fdr);
    CHECK(d.cutoff_rank == 4);  // largest depth with fdp <= 0.30
    CHECK(d.achieved == doctest::Approx(0.25));
    CHECK(d.n_validation == 6);
    CHECK(!d.warning);

    // the largest qualifying cutoff wins even when a smaller one dips lower
    auto loose = select_cutoff(r, labels, CutoffObjective::target_fdr, 0.45);
    CHECK(loose.cutoff_rank == 5);

    // alpha = 0 with a clean prefix keeps the prefix
    auto strict = select_cutoff(r, labels, CutoffObjective::target_fdr, 0.0);
    CHECK(strict.cutoff_rank == 2);
    CHECK(strict.achieved == 0.0);

    // alpha = 0 with a false positive at rank 1 forces zero discoveries
    std::vector<std::uint8_t> fp_first = {0, 1, 1, 1, 1, 1};
    auto zero = select_cutoff(r, fp_first, CutoffObjective::target_fdr, 0.0);
    CHECK(zero.cutoff_rank == 0);
    CHECK(zero.warning);
    CHECK(!zero.warning_message.empty());

    CHECK(err_code([&] {
              select_cutoff(r, labels, CutoffObjective::target_fdr, 1.0);
          }) == "alpha_range");
    CHECK(err_code([&] {
              select_cutoff(r, labels, CutoffObjective::target_fdr, -0.1);
          }) == "alpha_range");
}

TEST_CASE("max-F1 cutoff selection") {
    auto r = identity_ranking(5);
    std::vector<std::uint8_t> labels = {1, 1, 0, 0, 0};
    auto d = select_cutoff(r, labels, CutoffObjective::max_f1);
    CHECK(d.objective == CutoffObjective::max_f1);
    CHECK(d.cutoff_rank == 2);  // F1 = 1 there
    CHECK(d.achieved == doctest::Approx(1.0));

    // ties resolve to the smallest cutoff: depths 1 and 4 both reach F1 = 2/3
    std::vector<std::uint8_t> tied = {1, 0, 0, 1};
    auto r4 = identity_ranking(4);
    auto t = select_cutoff(r4, tied, CutoffObjective::max_f1);
    CHECK(t.achieved == doctest::Approx(2.0 / 3.0));
    CHECK(t.cutoff_rank == 1);

    // no positives anywhere: F1 is identically zero
    std::vector<std::uint8_t> none(5, 0);
    auto z = select_cutoff(r, none, CutoffObjective::max_f1);
    CHECK(z.cutoff_rank == 0);
    CHECK(z.warning);
}

TEST_CASE("cutoff transfer by rank proportion") {
    CutoffDecision d;
    d.cutoff_rank = 10;
    d.n_validation = 100;
    CHECK(scaled_cutoff(d, 100) == 10);
    CHECK(scaled_cutoff(d, 50) == 5);
    CHECK(scaled_cutoff(d, 1000) == 100);
    CHECK(scaled_cutoff(d, 5) == 1);   // round(0.5) away from zero
    CHECK(scaled_cutoff(d, 0) == 0);
    d.cutoff_rank = 100;
    CHECK(scaled_cutoff(d, 7) == 7);  // clamped to n_test

    CutoffDecision blank;
    CHECK(err_code([&] { scaled_cutoff(blank, 10); }) == "cutoff_decision");
}

TEST_CASE("apply_cutoff flags the ranked prefix") {
    CutoffDecision d;
    d.cutoff_rank = 2;
    d.n_validation = 4;
    Ranking test;
    test.num_objects = 2;
    test.num_classes = 2;
    test.order = {3, 1, 0, 2};
    auto flags = apply_cutoff(d, test);
    REQUIRE(flags.size() == 4);
    CHECK(flags[3] == 1);
    CHECK(flags[1] == 1);
    CHECK(flags[0] == 0);
    CHECK(flags[2] == 0);
}

TEST_CASE("prefix decisions inherit the topological guarantee") {
    // every prefix of a topological ranking is ancestor-closed within objects
    Rng rng(92);
    auto h = load_hierarchy({{"A", "B"}, {"B", "C"}, {"A", "D"}}, HierarchyMode::tree);
    const int M = 6, K = 4;
    std::vector<double> vals(M * K);
    for (auto& v : vals) v = rng.uniform();
    auto f = make_forest(h, M, vals);
    auto r = hier_rank_fast(f);
    REQUIRE(is_topological(r, h, M));
    for (std::int64_t cut = 0; cut <= r.size(); cut += 5) {
        CutoffDecision d;
        d.cutoff_rank = cut;
        d.n_validation = r.size();
        auto flags = apply_cutoff(d, r);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k) {
                const int p = h.parent_of(k);
                if (p >= 0 && flags[m * K + k] == 1) CHECK(flags[m * K + p] == 1);
            }
    }
}
