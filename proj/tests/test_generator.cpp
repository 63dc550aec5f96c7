#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "hierrank/generative_model.hpp"
#include "hierrank/hierarchy.hpp"
#include "hierrank/rng.hpp"
#include "hierrank/util.hpp"

using namespace hierrank;

TEST_CASE("benchmark forest shape") {
    auto h = benchmark_hierarchy();
    REQUIRE(h.num_classes() == 25);
    int roots = 0, edges = 0;
    for (int k = 0; k < h.num_classes(); ++k) {
        roots += h.is_root(k);
        edges += static_cast<int>(h.parents[k].size());
    }
    CHECK(roots == 2);
    CHECK(edges == 23);
    CHECK(h.is_root(h.id_of.at("A")));
    CHECK(h.is_root(h.id_of.at("Q")));
    CHECK(h.parent_of(h.id_of.at("Y")) == h.id_of.at("V"));
    auto quality = benchmark_quality();
    REQUIRE(quality.size() == 25);
    CHECK(quality[h.id_of.at("A")] == "high");
    CHECK(quality[h.id_of.at("C")] == "low");
}

TEST_CASE("shipped CSV copies match the built-ins") {
    // data/ is the on-disk form of the same benchmark; keep them in sync.
    auto built = benchmark_hierarchy();
    auto loaded = load_hierarchy_file("data/benchmark_hierarchy.csv", HierarchyMode::tree);
    REQUIRE(loaded.num_classes() == built.num_classes());
    CHECK(loaded.names == built.names);
    CHECK(loaded.parents == built.parents);

    auto quality = benchmark_quality();
    std::ifstream in("data/benchmark_quality.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "class,quality");
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const int id = built.id_of.at(line.substr(0, comma));
        CHECK(quality[id] == line.substr(comma + 1));
        ++rows;
    }
    CHECK(rows == 25);
}

TEST_CASE("quality tiers map to the documented beta families") {
    ScoreDist pos, neg;
    quality_dists("high", pos, neg);
    CHECK(pos.a == 3.5);
    CHECK(pos.b == 2.0);
    CHECK(neg.a == 2.0);
    CHECK(neg.b == 3.5);
    quality_dists("medium", pos, neg);
    CHECK(pos.b == 5.5);
    CHECK(neg.a == 5.5);
    quality_dists("low", pos, neg);
    CHECK(pos.b == 4.0);
    CHECK(neg.a == 4.0);
    // medium-quality positives really do sit below negatives on average
    CHECK(pos.mean() < neg.mean());
    CHECK_THROWS_AS(quality_dists("excellent", pos, neg), Error);
}

TEST_CASE("chain model") {
    auto m = chain_model(4, 11);
    REQUIRE(m.hierarchy.num_classes() == 4);
    CHECK(m.hierarchy.names == std::vector<std::string>{"C1", "C2", "C3", "C4"});
    for (int k = 1; k < 4; ++k) CHECK(m.hierarchy.parent_of(k) == k - 1);
    CHECK(m.quality == std::vector<std::string>(4, "high"));
    m.validate();
    CHECK_THROWS_AS(chain_model(0, 1), Error);
}

TEST_CASE("model_from_quality enforces the prevalence floor") {
    auto m = benchmark_model(27);
    auto prev = analytic_prevalence(m);
    REQUIRE(prev.size() == 25);
    for (double p : prev) {
        CHECK(p >= 0.003);
        CHECK(p <= 1.0);
    }
    // analytic prevalence is prob[k] times the parent's prevalence
    const auto& h = m.hierarchy;
    for (int k = 0; k < h.num_classes(); ++k) {
        const int p = h.parent_of(k);
        const double want = p < 0 ? m.prob[k] : m.prob[k] * prev[p];
        CHECK(prev[k] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("simulate is deterministic and shaped right") {
    auto model = chain_model(5, 3);
    auto t1 = simulate(model, 300, 99);
    auto t2 = simulate(model, 300, 99);
    CHECK(t1.scores == t2.scores);  // bitwise, not approx
    CHECK(t1.labels == t2.labels);
    CHECK(t1.num_objects == 300);
    CHECK(t1.class_names == model.hierarchy.names);
    CHECK(t1.scores.size() == 1500);
    CHECK(t1.labels.size() == 1500);
    for (double s : t1.scores) {
        CHECK(s > 0.0);
        CHECK(s < 1.0);
    }

    auto t3 = simulate(model, 300, 100);
    CHECK(t1.scores != t3.scores);
}

TEST_CASE("sampled labels respect the hierarchy") {
    auto model = benchmark_model(27);
    const int M = 2000;
    auto labels = sample_labels(model, M, 7);
    const auto& h = model.hierarchy;
    const int K = h.num_classes();
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k) {
            const int p = h.parent_of(k);
            if (p >= 0 && labels[m * K + k] == 1) REQUIRE(labels[m * K + p] == 1);
        }
}

TEST_CASE("realized prevalence tracks the analytic value") {
    auto model = benchmark_model(27);
    auto prev = analytic_prevalence(model);
    const int M = 20000;
    auto labels = sample_labels(model, M, 41);
    const int K = model.hierarchy.num_classes();
    for (int k = 0; k < K; ++k) {
        std::int64_t pos = 0;
        for (int m = 0; m < M; ++m) pos += labels[m * K + k];
        const double hat = static_cast<double>(pos) / M;
        const double sd = std::sqrt(prev[k] * (1 - prev[k]) / M);
        CHECK(std::abs(hat - prev[k]) < 5 * sd + 1e-9);
    }
}

TEST_CASE("exact_lpr is the two-density posterior") {
    auto model = chain_model(3, 5);
    const double s = 0.62;
    for (int k = 0; k < 3; ++k) {
        auto prev = analytic_prevalence(model);
        const double tau = prev[k];
        const double f1 = model.pos[k].pdf(s);
        const double f0 = model.neg[k].pdf(s);
        const double want = tau * f1 / (tau * f1 + (1 - tau) * f0);
        CHECK(exact_lpr(model, k, s) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("exact mLPR agrees with Bayes on a single class") {
    // K = 1: the joint posterior collapses to the single-class one.
    ClassHierarchy h = load_hierarchy({{"", "solo"}}, HierarchyMode::tree);
    GenerativeModel model;
    model.hierarchy = h;
    model.prob = {0.3};
    model.pos = {beta_dist(4.0, 2.0)};
    model.neg = {beta_dist(2.0, 4.0)};
    model.validate();
    EventTable t;
    t.num_objects = 3;
    t.class_names = h.names;
    t.scores = {0.2, 0.5, 0.9};
    auto got = exact_mlpr(model, t);
    REQUIRE(got.size() == 3);
    for (int m = 0; m < 3; ++m)
        CHECK(got[m] == doctest::Approx(exact_lpr(model, 0, t.scores[m])).epsilon(1e-12));
}

TEST_CASE("exact mLPR never exceeds the ancestor's") {
    auto model = chain_model(6, 21);
    auto scores = simulate(model, 50, 22);
    auto vals = exact_mlpr(model, scores);
    const int K = 6;
    for (int m = 0; m < 50; ++m)
        for (int k = 1; k < K; ++k)
            CHECK(vals[m * K + k] <= vals[m * K + k - 1] + 1e-12);
}

TEST_CASE("model validation catches shape and range issues") {
    auto model = chain_model(3, 1);
    auto broken = model;
    broken.prob.pop_back();
    CHECK_THROWS_AS(broken.validate(), Error);
    broken = model;
    broken.prob[1] = 1.5;
    CHECK_THROWS_AS(broken.validate(), Error);
}
