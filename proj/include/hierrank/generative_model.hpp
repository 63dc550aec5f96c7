#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hierrank/distributions.hpp"
#include "hierrank/event_table.hpp"
#include "hierrank/hierarchy.hpp"

namespace hierrank {

// Ground-truth label/score model over a hierarchy:
//   - labels propagate top-down: roots are Bernoulli(prob[k]); a non-root is
//     Bernoulli(prob[k]) when all parents are positive and 0 otherwise
//     (the structural zero is never stored, it is the sampling rule);
//   - scores are class-conditionally independent draws from pos[k] / neg[k].
struct GenerativeModel {
    ClassHierarchy hierarchy;
    // prob[k] is P(Y=1) for roots and P(Y=1 | parents all 1) otherwise.
    std::vector<double> prob;
    std::vector<ScoreDist> pos, neg;
    std::vector<std::string> quality;  // informational tags, may be empty

    void validate() const;
};

// Deterministic given (model, seed); per-object streams derived from
// (seed, stage, object), so parallel generation is schedule-independent.
std::vector<std::uint8_t> sample_labels(const GenerativeModel& model, int num_objects,
                                        std::uint64_t seed);
std::vector<double> sample_scores(const GenerativeModel& model,
                                  const std::vector<std::uint8_t>& labels,
                                  int num_objects, std::uint64_t seed);
EventTable simulate(const GenerativeModel& model, int num_objects, std::uint64_t seed);

// Model-implied P(Y_k = 1); tree/forest mode only.
std::vector<double> analytic_prevalence(const GenerativeModel& model);

// The 25-class two-root benchmark forest and its node-quality map. The same
// content ships as data/benchmark_hierarchy.csv + data/benchmark_quality.csv.
ClassHierarchy benchmark_hierarchy();
std::vector<std::string> benchmark_quality();

// Score families per quality tier: high (3.5, 2), medium (3.5, 5.5),
// low (3.5, 4) for positives, parameters mirrored for negatives. Note the
// medium/low tiers score positives BELOW negatives on average; only the
// absolute separation defines quality.
void quality_dists(const std::string& quality, ScoreDist& pos, ScoreDist& neg);

// Draws root/conditional probabilities U(0,1), rejecting redraws until every
// class's analytic prevalence is >= min_prevalence (default 0.003, i.e. at
// least ~150 expected positives per 50k objects). Errors after max_attempts.
GenerativeModel model_from_quality(const ClassHierarchy& h,
                                   const std::vector<std::string>& quality,
                                   std::uint64_t seed,
                                   double min_prevalence = 0.003,
                                   int max_attempts = 10000);

// model_from_quality on the benchmark forest.
GenerativeModel benchmark_model(std::uint64_t seed);

// Toy chain C1 -> ... -> CK, all high quality.
GenerativeModel chain_model(int K, std::uint64_t seed);

// Exact mLPR = P(Y_i = 1 | all scores of the object) via sum-product with the
// model's true densities. Tree mode only. Returns an M×K matrix.
std::vector<double> exact_mlpr(const GenerativeModel& model, const EventTable& scores,
                               int threads = 1);

// Single-class posterior P(Y_k=1 | S_k = s): tau*f1 / (tau*f1 + (1-tau)*f0).
double exact_lpr(const GenerativeModel& model, int k, double s);

}  // namespace hierrank
