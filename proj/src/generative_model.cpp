#include "hierrank/generative_model.hpp"

#include <cmath>
#include <limits>

#include "hierrank/message_passing.hpp"
#include "hierrank/util.hpp"

namespace hierrank {

namespace {

constexpr std::uint64_t kSaltModel = 0x6d6f64656cull;
constexpr std::uint64_t kSaltLabels = 0x6c6162656cull;
constexpr std::uint64_t kSaltScores = 0x73636f7265ull;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

void GenerativeModel::validate() const {
    const int K = hierarchy.num_classes();
    if (static_cast<int>(prob.size()) != K ||
        static_cast<int>(pos.size()) != K || static_cast<int>(neg.size()) != K)
        fail("model_shape", "model arrays do not match the hierarchy size");
    for (int k = 0; k < K; ++k) {
        if (!(prob[k] >= 0.0 && prob[k] <= 1.0))
            fail("model_prob_range", "probability out of [0,1] for class " + hierarchy.names[k]);
        pos[k].validate();
        neg[k].validate();
    }
}

std::vector<std::uint8_t> sample_labels(const GenerativeModel& model, int num_objects,
                                        std::uint64_t seed) {
    model.validate();
    const ClassHierarchy& h = model.hierarchy;
    const int K = h.num_classes();
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(num_objects) * K);
    std::uint64_t stage = derived_seed(seed, kSaltLabels);
    for (int m = 0; m < num_objects; ++m) {
        Rng rng(derived_seed(stage, static_cast<std::uint64_t>(m)));
        std::uint8_t* row = &labels[static_cast<std::size_t>(m) * K];
        for (int k : h.topo) {
            bool gate = true;
            for (int p : h.parents[k]) gate = gate && row[p] == 1;
            row[k] = (gate && rng.bernoulli(model.prob[k])) ? 1 : 0;
        }
    }
    return labels;
}

std::vector<double> sample_scores(const GenerativeModel& model,
                                  const std::vector<std::uint8_t>& labels,
                                  int num_objects, std::uint64_t seed) {
    model.validate();
    const int K = model.hierarchy.num_classes();
    if (labels.size() != static_cast<std::size_t>(num_objects) * K)
        fail("labels_shape", "label matrix does not match object count");
    std::vector<double> scores(labels.size());
    std::uint64_t stage = derived_seed(seed, kSaltScores);
    for (int m = 0; m < num_objects; ++m) {
        Rng rng(derived_seed(stage, static_cast<std::uint64_t>(m)));
        std::size_t base = static_cast<std::size_t>(m) * K;
        for (int k = 0; k < K; ++k) {
            const ScoreDist& d = labels[base + k] ? model.pos[k] : model.neg[k];
            scores[base + k] = d.sample(rng);
        }
    }
    return scores;
}

EventTable simulate(const GenerativeModel& model, int num_objects, std::uint64_t seed) {
    EventTable t;
    t.num_objects = num_objects;
    t.class_names = model.hierarchy.names;
    t.labels = sample_labels(model, num_objects, seed);
    t.scores = sample_scores(model, t.labels, num_objects, seed);
    return t;
}

std::vector<double> analytic_prevalence(const GenerativeModel& model) {
    const ClassHierarchy& h = model.hierarchy;
    if (h.mode != HierarchyMode::tree)
        fail("hierarchy_mode", "analytic prevalence requires a tree/forest hierarchy");
    std::vector<double> tau(h.num_classes());
    for (int k : h.topo) {
        int p = h.parent_of(k);
        tau[k] = model.prob[k] * (p == -1 ? 1.0 : tau[p]);
    }
    return tau;
}

ClassHierarchy benchmark_hierarchy() {
    static const std::vector<EdgeRow> edges = {
        {"A", "B"}, {"A", "C"}, {"A", "D"},
        {"B", "E"}, {"B", "F"},
        {"C", "G"},
        {"D", "H"}, {"D", "I"},
        {"E", "J"}, {"E", "K"},
        {"F", "L"},
        {"G", "M"},
        {"H", "N"},
        {"I", "O"},
        {"J", "P"},
        {"Q", "R"}, {"Q", "S"},
        {"R", "T"}, {"R", "U"},
        {"S", "V"},
        {"T", "W"},
        {"U", "X"},
        {"V", "Y"},
    };
    return load_hierarchy(edges, HierarchyMode::tree);
}

std::vector<std::string> benchmark_quality() {
    // Aligned to benchmark_hierarchy() class ids (A..P, Q..Y interned in edge
    // order). Mirrors data/benchmark_quality.csv; a test keeps them in sync.
    ClassHierarchy h = benchmark_hierarchy();
    std::vector<std::string> q(h.num_classes());
    auto set = [&](const char* name, const char* tier) { q[h.id_of.at(name)] = tier; };
    set("A", "high");   set("B", "medium"); set("C", "low");    set("D", "medium");
    set("E", "high");   set("F", "medium"); set("G", "high");   set("H", "low");
    set("I", "low");    set("J", "medium"); set("K", "low");    set("L", "low");
    set("M", "medium"); set("N", "high");   set("O", "medium"); set("P", "high");
    set("Q", "high");   set("R", "medium"); set("S", "low");    set("T", "low");
    set("U", "high");   set("V", "medium"); set("W", "low");    set("X", "medium");
    set("Y", "high");
    return q;
}

void quality_dists(const std::string& quality, ScoreDist& pos, ScoreDist& neg) {
    double eta;
    if (quality == "high") eta = 2.0;
    else if (quality == "medium") eta = 5.5;
    else if (quality == "low") eta = 4.0;
    else fail("bad_quality", "unknown node quality: " + quality);
    pos = beta_dist(3.5, eta);
    neg = beta_dist(eta, 3.5);
}

GenerativeModel model_from_quality(const ClassHierarchy& h,
                                   const std::vector<std::string>& quality,
                                   std::uint64_t seed, double min_prevalence,
                                   int max_attempts) {
    const int K = h.num_classes();
    if (static_cast<int>(quality.size()) != K)
        fail("model_shape", "quality map does not match the hierarchy size");
    GenerativeModel model;
    model.hierarchy = h;
    model.quality = quality;
    model.pos.resize(K);
    model.neg.resize(K);
    for (int k = 0; k < K; ++k) quality_dists(quality[k], model.pos[k], model.neg[k]);

    std::uint64_t stage = derived_seed(seed, kSaltModel);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng(derived_seed(stage, static_cast<std::uint64_t>(attempt)));
        model.prob.assign(K, 0.0);
        for (int k : h.topo) model.prob[k] = rng.uniform();
        std::vector<double> tau = analytic_prevalence(model);
        bool ok = true;
        for (double t : tau) ok = ok && t >= min_prevalence;
        if (ok) return model;
    }
    fail("prevalence_rejection_budget",
         "no probability draw met the minimum prevalence after " +
             std::to_string(max_attempts) + " attempts");
}

GenerativeModel benchmark_model(std::uint64_t seed) {
    return model_from_quality(benchmark_hierarchy(), benchmark_quality(), seed);
}

GenerativeModel chain_model(int K, std::uint64_t seed) {
    if (K < 1) fail("bad_config", "chain length must be >= 1");
    std::vector<EdgeRow> rows;
    if (K == 1) {
        rows.push_back({"", "C1"});
    } else {
        for (int k = 1; k < K; ++k)
            rows.push_back({"C" + std::to_string(k), "C" + std::to_string(k + 1)});
    }
    ClassHierarchy h = load_hierarchy(rows, HierarchyMode::tree);
    return model_from_quality(h, std::vector<std::string>(K, "high"), seed);
}

std::vector<double> exact_mlpr(const GenerativeModel& model, const EventTable& scores,
                               int threads) {
    model.validate();
    const ClassHierarchy& h = model.hierarchy;
    if (h.mode != HierarchyMode::tree)
        fail("hierarchy_mode", "exact mLPR is defined here for tree hierarchies only");
    const int K = h.num_classes();
    if (scores.num_classes() != K)
        fail("table_shape", "score table does not match the hierarchy");

    std::vector<double> out(scores.scores.size());
    parallel_for(static_cast<std::size_t>(scores.num_objects), threads,
                 [&](std::size_t mb, std::size_t me) {
        TreeLogPotentials pot(K);
        for (std::size_t m = mb; m < me; ++m) {
            for (int k = 0; k < K; ++k) {
                double s = scores.score(static_cast<int>(m), k);
                double l1 = model.pos[k].log_pdf(s);
                double l0 = model.neg[k].log_pdf(s);
                double p = model.prob[k];
                double lp1 = p > 0.0 ? std::log(p) : kNegInf;
                double lp0 = p < 1.0 ? std::log1p(-p) : kNegInf;
                if (h.is_root(k)) {
                    pot.root[k] = {l0 + lp0, l1 + lp1};
                } else {
                    pot.edge[k] = {l0, kNegInf,       // parent negative
                                   l0 + lp0, l1 + lp1};  // parent positive
                }
            }
            std::vector<double> post = tree_posterior(h, pot);
            for (int k = 0; k < K; ++k)
                out[m * K + k] = post[k];
        }
    });
    return out;
}

double exact_lpr(const GenerativeModel& model, int k, double s) {
    model.validate();
    std::vector<double> tau = analytic_prevalence(model);
    double t = tau[k];
    double f1 = model.pos[k].pdf(s);
    double f0 = model.neg[k].pdf(s);
    double denom = t * f1 + (1.0 - t) * f0;
    if (denom <= 0.0) return t;
    return t * f1 / denom;
}

}  // namespace hierrank
