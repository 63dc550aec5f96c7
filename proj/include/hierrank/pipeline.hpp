#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hierrank/io.hpp"
#include "hierrank/ranker.hpp"

namespace hierrank {

// One end-to-end run: (simulate | load) -> split -> fit -> estimate -> rank
// validation and test -> select cutoff on validation -> apply to test.
// Splits are contiguous row ranges in input order.
struct PipelineConfig {
    // Data: either simulate (scores_path empty) or load these three files.
    std::string scores_path, labels_path, hierarchy_path;
    std::string dataset = "benchmark";  // simulation shape: benchmark | chain:K
    int samples = 60000;

    double split_train = 5.0 / 6.0;
    double split_validation = 1.0 / 12.0;
    double split_test = 1.0 / 12.0;

    std::string variant = "full";            // indpt | nbh | full | gaussian
    std::string algorithm = "hierrank-fast"; // naive | hierrank | hierrank-fast |
                                             // cssa | dag-and | dag-or
    std::string objective = "target_fdr";    // target_fdr | max_f1
    double alpha = 0.1;

    double bandwidth = 0;  // 0 -> fit default
    bool allow_degenerate = false;
    std::vector<double> kappas = {0.05, 0.1, 0.2, 0.3, 0.5};
    std::int64_t dag_budget = std::int64_t(1) << 20;

    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;  // artifact directory, required
};

struct PipelineResult {
    io::EvalReport report;
    double validation_catch = 0;
    double test_catch = 0;
    int n_train = 0, n_validation = 0, n_test = 0;
};

PipelineResult run_pipeline(const PipelineConfig& cfg);

// Dispatch by CLI algorithm name.
Ranking run_algorithm(const std::string& algorithm, const ScoredForest& f,
                      std::int64_t dag_budget);

// Per-event ranking statistic for a variant ("raw" passes scores through;
// the others need the fitted model).
std::vector<double> estimate_values(const std::string& variant,
                                    const io::FittedModel& model,
                                    const EventTable& scores, int threads);

// Rows [begin, begin+count) as their own table.
EventTable slice_table(const EventTable& t, int begin, int count);

}  // namespace hierrank
