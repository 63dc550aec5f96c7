#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hierrank/hierarchy.hpp"

namespace hierrank {

// Ranking quality against 0/1 event labels. labels are flat-indexed
// (object*K + class), matching Ranking::order.
struct HitCurve {
    std::vector<std::int64_t> hits;  // hits[i] = positives among the top i+1
    std::int64_t total_positives = 0;
    double auc = 0;  // Σ_i (n-i+1)·label(π_i); the labels' own CATCH
};

HitCurve hit_curve(const Ranking& r, std::span<const std::uint8_t> labels);

struct PrecisionRecall {
    std::int64_t depth = 0;
    double precision = 0;
    double recall = 0;
};

// Precision/recall of the top ⌈kappa·n⌉ events; kappa in (0, 1].
PrecisionRecall precision_recall_at(const Ranking& r,
                                    std::span<const std::uint8_t> labels,
                                    double kappa);

// One point per depth 1..n.
std::vector<PrecisionRecall> pr_curve(const Ranking& r,
                                      std::span<const std::uint8_t> labels);

struct FdpF1 {
    std::int64_t cutoff = 0;  // discoveries = top `cutoff` events
    double fdp = 0;           // 0 when cutoff == 0
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

FdpF1 fdp_f1_at(const Ranking& r, std::span<const std::uint8_t> labels,
                std::int64_t cutoff);

enum class CutoffObjective { target_fdr, max_f1 };

// A rank cutoff chosen on validation data, transferable to a test ranking by
// rank proportion.
struct CutoffDecision {
    CutoffObjective objective = CutoffObjective::target_fdr;
    double alpha = 0;             // target_fdr only
    std::int64_t cutoff_rank = 0; // on the validation ranking
    double achieved = 0;          // validation FDP (target_fdr) or F1 (max_f1)
    std::int64_t n_validation = 0;
    bool warning = false;
    std::string warning_message;
};

// target_fdr: the largest cutoff whose validation FDP is <= alpha (alpha in
// (0,1)); none -> cutoff 0 with a warning. max_f1: the smallest cutoff
// attaining the maximum F1; all-zero F1 -> cutoff 0 with a warning.
CutoffDecision select_cutoff(const Ranking& validation,
                             std::span<const std::uint8_t> labels,
                             CutoffObjective objective, double alpha = 0.1);

// round(cutoff_rank * n_test / n_validation), clamped to [0, n_test].
std::int64_t scaled_cutoff(const CutoffDecision& d, std::int64_t n_test);

// Flat 0/1 discovery indicators for the test ranking under the scaled cutoff.
std::vector<std::uint8_t> apply_cutoff(const CutoffDecision& d, const Ranking& test);

}  // namespace hierrank
