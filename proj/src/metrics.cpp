#include "hierrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "hierrank/util.hpp"

namespace hierrank {
namespace {

void check_alignment(const Ranking& r, std::span<const std::uint8_t> labels) {
    const auto n = static_cast<std::int64_t>(labels.size());
    if (r.size() != n) fail("ranking_size", "ranking and label vector sizes differ");
    for (std::uint8_t y : labels)
        if (y > 1) fail("label_value", "labels must be 0/1");
    std::vector<char> seen(labels.size(), 0);
    for (std::int64_t e : r.order) {
        if (e < 0 || e >= n || seen[static_cast<std::size_t>(e)])
            fail("ranking_invalid", "ranking is not a permutation");
        seen[static_cast<std::size_t>(e)] = 1;
    }
}

}  // namespace

HitCurve hit_curve(const Ranking& r, std::span<const std::uint8_t> labels) {
    check_alignment(r, labels);
    const auto n = static_cast<std::int64_t>(labels.size());
    HitCurve hc;
    hc.hits.resize(labels.size());
    std::int64_t acc = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const std::uint8_t y = labels[static_cast<std::size_t>(r.order[i])];
        acc += y;
        hc.hits[static_cast<std::size_t>(i)] = acc;
        // exact: integer-valued weights and labels stay below 2^53
        hc.auc += static_cast<double>(n - i) * y;
    }
    hc.total_positives = acc;
    return hc;
}

PrecisionRecall precision_recall_at(const Ranking& r,
                                    std::span<const std::uint8_t> labels,
                                    double kappa) {
    if (!(kappa > 0.0) || kappa > 1.0) fail("kappa_range", "kappa must be in (0, 1]");
    const HitCurve hc = hit_curve(r, labels);
    if (hc.total_positives == 0) fail("no_positives", "no positive labels; recall undefined");
    const auto n = static_cast<std::int64_t>(labels.size());
    // nudge before ceil so exact products like 0.05*n do not round up
    auto depth = static_cast<std::int64_t>(std::ceil(kappa * static_cast<double>(n) - 1e-9));
    depth = std::max<std::int64_t>(1, std::min(depth, n));
    const auto h = hc.hits[static_cast<std::size_t>(depth - 1)];
    return {depth, static_cast<double>(h) / static_cast<double>(depth),
            static_cast<double>(h) / static_cast<double>(hc.total_positives)};
}

std::vector<PrecisionRecall> pr_curve(const Ranking& r,
                                      std::span<const std::uint8_t> labels) {
    const HitCurve hc = hit_curve(r, labels);
    if (hc.total_positives == 0) fail("no_positives", "no positive labels; recall undefined");
    std::vector<PrecisionRecall> out;
    out.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto depth = static_cast<std::int64_t>(i) + 1;
        const auto h = hc.hits[i];
        out.push_back({depth, static_cast<double>(h) / static_cast<double>(depth),
                       static_cast<double>(h) / static_cast<double>(hc.total_positives)});
    }
    return out;
}

FdpF1 fdp_f1_at(const Ranking& r, std::span<const std::uint8_t> labels,
                std::int64_t cutoff) {
    const HitCurve hc = hit_curve(r, labels);
    const auto n = static_cast<std::int64_t>(labels.size());
    if (cutoff < 0 || cutoff > n) fail("cutoff_range", "cutoff outside [0, n]");
    FdpF1 out;
    out.cutoff = cutoff;
    if (cutoff == 0) return out;  // zero discoveries: FDP and F1 defined as 0
    const auto h = hc.hits[static_cast<std::size_t>(cutoff - 1)];
    out.fdp = static_cast<double>(cutoff - h) / static_cast<double>(cutoff);
    out.precision = static_cast<double>(h) / static_cast<double>(cutoff);
    out.recall = hc.total_positives > 0
                     ? static_cast<double>(h) / static_cast<double>(hc.total_positives)
                     : 0.0;
    const double pr = out.precision + out.recall;
    out.f1 = pr > 0 ? 2.0 * out.precision * out.recall / pr : 0.0;
    return out;
}

CutoffDecision select_cutoff(const Ranking& validation,
                             std::span<const std::uint8_t> labels,
                             CutoffObjective objective, double alpha) {
    const HitCurve hc = hit_curve(validation, labels);
    const auto n = static_cast<std::int64_t>(labels.size());
    CutoffDecision d;
    d.objective = objective;
    d.n_validation = n;
    if (objective == CutoffObjective::target_fdr) {
        if (!(alpha >= 0.0 && alpha < 1.0)) fail("alpha_range", "alpha must be in [0, 1)");
        d.alpha = alpha;
        for (std::int64_t c = 1; c <= n; ++c) {
            const auto h = hc.hits[static_cast<std::size_t>(c - 1)];
            const double fdp = static_cast<double>(c - h) / static_cast<double>(c);
            if (fdp <= alpha) {
                d.cutoff_rank = c;
                d.achieved = fdp;
            }
        }
        if (d.cutoff_rank == 0) {
            d.warning = true;
            d.warning_message = "no cutoff meets the FDR target; using zero discoveries";
        }
    } else {
        double best = 0;
        for (std::int64_t c = 1; c <= n; ++c) {
            const auto h = hc.hits[static_cast<std::size_t>(c - 1)];
            const double prec = static_cast<double>(h) / static_cast<double>(c);
            const double rec = hc.total_positives > 0
                                   ? static_cast<double>(h) /
                                         static_cast<double>(hc.total_positives)
                                   : 0.0;
            const double f1 = prec + rec > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
            if (f1 > best) {
                best = f1;
                d.cutoff_rank = c;
            }
        }
        d.achieved = best;
        if (d.cutoff_rank == 0) {
            d.warning = true;
            d.warning_message = "F1 is zero everywhere; using zero discoveries";
        }
    }
    return d;
}

std::int64_t scaled_cutoff(const CutoffDecision& d, std::int64_t n_test) {
    if (d.n_validation <= 0) fail("cutoff_decision", "decision lacks a validation size");
    if (n_test < 0) fail("cutoff_range", "negative test size");
    auto s = static_cast<std::int64_t>(std::llround(
        static_cast<double>(d.cutoff_rank) * static_cast<double>(n_test) /
        static_cast<double>(d.n_validation)));
    return std::max<std::int64_t>(0, std::min(s, n_test));
}

std::vector<std::uint8_t> apply_cutoff(const CutoffDecision& d, const Ranking& test) {
    const auto n = test.size();
    const auto s = scaled_cutoff(d, n);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(n), 0);
    for (std::int64_t i = 0; i < s; ++i) {
        const std::int64_t e = test.order[static_cast<std::size_t>(i)];
        if (e < 0 || e >= n) fail("ranking_invalid", "ranking is not a permutation");
        out[static_cast<std::size_t>(e)] = 1;
    }
    return out;
}

}  // namespace hierrank
