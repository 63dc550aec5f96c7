#pragma once

#include <span>
#include <string>
#include <vector>

#include "hierrank/event_table.hpp"

namespace hierrank {

// Per-class local precision rate model: KDE of the null density f0 over
// negative training scores and of the marginal f over all training scores,
// plus the empirical prevalence tau. LPR(s) = 1 - (1-tau) * f0(s)/f(s),
// clamped to [0,1]. Moment-matched Gaussian summaries ride along for the
// gaussian estimator variant.
struct LprModel {
    struct ClassKde {
        std::vector<double> positives, negatives;  // training scores by label
        double tau = 0.0;
        bool degenerate = false;  // no positives; LPR pinned to clip_floor
    };
    struct Moments {
        double mu0 = 0.0, var0 = 1.0, mu1 = 0.0, var1 = 1.0;
        std::int64_t n0 = 0, n1 = 0;
    };

    std::string kernel = "gaussian";
    double bandwidth = 0.0;
    double clip_floor = 0.0;
    double density_floor = 1e-12;
    int train_rows = 0;
    std::vector<std::string> class_names;
    std::vector<ClassKde> classes;
    std::vector<Moments> gauss;

    int num_classes() const { return static_cast<int>(class_names.size()); }
};

struct FitOptions {
    double bandwidth = 0.0;  // 0 -> ((ln M)/M)^(1/3)
    std::string kernel = "gaussian";
    bool allow_degenerate = false;
    int threads = 1;
};

// Errors on M < 10, on any class with no negatives, and on any class with no
// positives unless allow_degenerate is set.
LprModel fit_lpr(const EventTable& train, const FitOptions& opt = {});

double lpr_value(const LprModel& model, int k, double s);

// Batch evaluation through the dispatched kernel-sum backend.
std::vector<double> lpr_values(const LprModel& model, int k,
                               std::span<const double> s, int threads = 1);

// LPR for every event of a score table (column-wise lpr_values).
std::vector<double> lpr_matrix(const LprModel& model, const EventTable& scores,
                               int threads = 1);

}  // namespace hierrank
