#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hierrank/event_table.hpp"
#include "hierrank/generative_model.hpp"
#include "hierrank/hierarchy.hpp"
#include "hierrank/lpr.hpp"
#include "hierrank/metrics.hpp"
#include "hierrank/prob_tables.hpp"
#include "hierrank/ranker.hpp"

// File formats. CSVs carry a header row; doubles are written with enough
// digits to round-trip. All writers go through write-temp-then-rename.

namespace hierrank::io {

void ensure_dir(const std::string& path);
void write_text_atomic(const std::string& path, const std::string& content);

// scores.csv / labels.csv: header = class names, one row per object.
void write_scores_csv(const std::string& path, const EventTable& t);
void write_labels_csv(const std::string& path, const EventTable& t);
// labels_path may be empty for an unlabeled table.
EventTable read_event_table(const std::string& scores_path,
                            const std::string& labels_path);

// hierarchy.csv: parent,child rows; roots as ,child.
void write_hierarchy_csv(const std::string& path, const ClassHierarchy& h);

// ranking.csv: rank,object,class,score,value. `scores` (raw inputs) may be
// empty, in which case the score column repeats the ranked value.
void write_ranking_csv(const std::string& path, const Ranking& r,
                       const std::vector<std::string>& class_names,
                       std::span<const double> values,
                       std::span<const double> scores);
Ranking read_ranking_csv(const std::string& path,
                         const std::vector<std::string>& class_names);

void write_pr_curve_csv(const std::string& path,
                        const std::vector<PrecisionRecall>& points);
void write_hit_curve_csv(const std::string& path, const HitCurve& hc);

// Everything `rank` needs from a fit: the hierarchy it was fit against plus
// the estimator state.
struct FittedModel {
    ClassHierarchy hierarchy;
    LprModel lpr;
    ProbTables tables;
};
void write_fitted_model(const std::string& path, const FittedModel& m);
FittedModel read_fitted_model(const std::string& path);

void write_generative_model(const std::string& path, const GenerativeModel& m);
GenerativeModel read_generative_model(const std::string& path);

struct RankSummary {
    std::string algorithm;
    std::string variant;
    int num_objects = 0;
    int num_classes = 0;
    double catch_value = 0;
    bool topological = false;
    std::string backend;
};
void write_rank_summary(const std::string& path, const RankSummary& s);

struct EvalReport {
    CutoffDecision decision;
    FdpF1 validation;  // at the chosen cutoff, on validation
    FdpF1 test;        // at the scaled cutoff, on test
    std::int64_t scaled_rank = 0;
    double validation_auc = 0;
    double test_auc = 0;
    std::vector<PrecisionRecall> kappa_table;  // test ranking, chosen depths
};
void write_eval_report(const std::string& path, const EvalReport& r);

struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string backend;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> artifacts;  // name -> path
};
void write_manifest(const std::string& path, const Manifest& m);

std::string error_json(const std::string& code, const std::string& message);

const char* objective_name(CutoffObjective o);
CutoffObjective objective_from(const std::string& name);

}  // namespace hierrank::io
