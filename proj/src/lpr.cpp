#include "hierrank/lpr.hpp"

#include <algorithm>
#include <cmath>

#include "hierrank/simd/kernels.hpp"
#include "hierrank/util.hpp"

namespace hierrank {

LprModel fit_lpr(const EventTable& train, const FitOptions& opt) {
    if (!train.has_labels())
        fail("labels_missing", "fitting requires labeled training data");
    const int M = train.num_objects;
    const int K = train.num_classes();
    if (M < 10)
        fail("train_too_small", "need at least 10 training objects");
    if (opt.kernel != "gaussian")
        fail("unsupported_kernel", "unknown kernel: " + opt.kernel);
    if (opt.bandwidth < 0.0 || !std::isfinite(opt.bandwidth))
        fail("bad_bandwidth", "bandwidth must be positive");

    LprModel model;
    model.kernel = opt.kernel;
    model.bandwidth =
        opt.bandwidth > 0.0 ? opt.bandwidth : std::cbrt(std::log(double(M)) / double(M));
    model.clip_floor = std::max(1.0 / M, 1e-6);
    model.train_rows = M;
    model.class_names = train.class_names;
    model.classes.resize(K);
    model.gauss.resize(K);

    for (int k = 0; k < K; ++k) {
        auto& ck = model.classes[k];
        for (int m = 0; m < M; ++m) {
            double s = train.score(m, k);
            if (!std::isfinite(s)) fail("bad_score", "non-finite training score");
            (train.label(m, k) ? ck.positives : ck.negatives).push_back(s);
        }
        ck.tau = static_cast<double>(ck.positives.size()) / M;
        if (ck.negatives.empty())
            fail("class_degenerate",
                 "class '" + train.class_names[k] + "' has no negative training rows");
        if (ck.positives.empty()) {
            if (!opt.allow_degenerate)
                fail("class_degenerate",
                     "class '" + train.class_names[k] +
                         "' has no positive training rows (use --allow-degenerate "
                         "to pin its LPR to the clip floor)");
            ck.degenerate = true;
        }

        auto moments = [](const std::vector<double>& xs, double& mu, double& var) {
            if (xs.empty()) { mu = 0.0; var = 1.0; return; }
            double s = 0.0;
            for (double x : xs) s += x;
            mu = s / xs.size();
            double q = 0.0;
            for (double x : xs) q += (x - mu) * (x - mu);
            var = std::max(q / xs.size(), 1e-6);  // degenerate-variance floor
        };
        auto& g = model.gauss[k];
        moments(ck.negatives, g.mu0, g.var0);
        moments(ck.positives, g.mu1, g.var1);
        g.n0 = static_cast<std::int64_t>(ck.negatives.size());
        g.n1 = static_cast<std::int64_t>(ck.positives.size());
    }
    return model;
}

std::vector<double> lpr_values(const LprModel& model, int k,
                               std::span<const double> s, int threads) {
    if (k < 0 || k >= model.num_classes())
        fail("invalid_class", "class id out of range");
    const auto& ck = model.classes[k];
    std::vector<double> out(s.size());
    if (ck.degenerate) {
        std::fill(out.begin(), out.end(), model.clip_floor);
        return out;
    }
    const double inv_h = 1.0 / model.bandwidth;
    const double n0 = static_cast<double>(ck.negatives.size());
    const double M = static_cast<double>(model.train_rows);
    std::vector<double> sum0(s.size()), sum1(s.size());
    parallel_for(s.size(), threads, [&](std::size_t b, std::size_t e) {
        auto q = s.subspan(b, e - b);
        simd::gaussian_kernel_sums(q, ck.negatives, inv_h,
                                   std::span<double>(sum0).subspan(b, e - b));
        simd::gaussian_kernel_sums(q, ck.positives, inv_h,
                                   std::span<double>(sum1).subspan(b, e - b));
    });
    const double norm = 1.0 / (model.bandwidth * std::sqrt(2.0 * 3.14159265358979323846));
    for (std::size_t i = 0; i < s.size(); ++i) {
        double f0 = std::max(sum0[i] / n0 * norm, model.density_floor);
        double f = std::max((sum0[i] + sum1[i]) / M * norm, model.density_floor);
        double v = 1.0 - (1.0 - ck.tau) * f0 / f;
        out[i] = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

double lpr_value(const LprModel& model, int k, double s) {
    return lpr_values(model, k, std::span<const double>(&s, 1))[0];
}

std::vector<double> lpr_matrix(const LprModel& model, const EventTable& scores,
                               int threads) {
    const int K = model.num_classes();
    if (scores.num_classes() != K)
        fail("table_shape", "score table does not match the fitted model");
    const int M = scores.num_objects;
    std::vector<double> out(scores.scores.size());
    std::vector<double> column(M);
    for (int k = 0; k < K; ++k) {
        for (int m = 0; m < M; ++m) column[m] = scores.score(m, k);
        std::vector<double> vals = lpr_values(model, k, column, threads);
        for (int m = 0; m < M; ++m)
            out[static_cast<std::size_t>(m) * K + k] = vals[m];
    }
    return out;
}

}  // namespace hierrank
