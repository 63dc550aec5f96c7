#include "hierrank/mlpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hierrank/distributions.hpp"
#include "hierrank/message_passing.hpp"
#include "hierrank/util.hpp"

namespace hierrank {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_or_ninf(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

void require_tree(const ClassHierarchy& h, const char* what) {
    if (h.mode != HierarchyMode::tree)
        fail("hierarchy_mode", std::string(what) + " requires a tree/forest hierarchy");
}

}  // namespace

MlprEstimate mlpr_indpt(const LprModel& lpr, const EventTable& scores, int threads) {
    MlprEstimate e;
    e.variant = "indpt";
    e.num_objects = scores.num_objects;
    e.values = lpr_matrix(lpr, scores, threads);
    return e;
}

MlprEstimate mlpr_full_from_values(std::span<const double> lpr_values,
                                   const ProbTables& tables, const ClassHierarchy& h,
                                   int num_objects, int threads) {
    require_tree(h, "the full mLPR variant");
    const int K = h.num_classes();
    if (lpr_values.size() != static_cast<std::size_t>(num_objects) * K)
        fail("table_shape", "LPR matrix does not match the hierarchy");

    MlprEstimate e;
    e.variant = "full";
    e.num_objects = num_objects;
    e.values.resize(lpr_values.size());
    parallel_for(static_cast<std::size_t>(num_objects), threads,
                 [&](std::size_t mb, std::size_t me) {
        TreeLogPotentials pot(K);
        for (std::size_t m = mb; m < me; ++m) {
            for (int k = 0; k < K; ++k) {
                double L = lpr_values[m * K + k];
                double lpos = log_or_ninf(L);
                double lneg = log_or_ninf(1.0 - L);
                if (h.is_root(k)) {
                    pot.root[k] = {lneg, lpos};
                    continue;
                }
                double theta = tables.cond[k];
                double tau = tables.prior[k];
                // tau == 1 leaves no mass on Y=0; treat those branches as
                // structural zeros instead of dividing by zero.
                double lden0 = (1.0 - tau) > 0.0 ? std::log1p(-tau) : kNegInf;
                double neg_ok = (1.0 - tau) > 0.0 ? 1.0 : 0.0;
                pot.edge[k][0] = neg_ok ? lneg - lden0 : kNegInf;
                pot.edge[k][1] = kNegInf;
                pot.edge[k][2] =
                    neg_ok ? lneg + log_or_ninf(1.0 - theta) - lden0 : kNegInf;
                pot.edge[k][3] = lpos + log_or_ninf(theta) - log_or_ninf(tau);
            }
            std::vector<double> post = tree_posterior(h, pot);
            for (int k = 0; k < K; ++k) e.values[m * K + k] = post[k];
        }
    });
    return e;
}

MlprEstimate mlpr_full(const LprModel& lpr, const ProbTables& tables,
                       const ClassHierarchy& h, const EventTable& scores,
                       int threads) {
    require_tree(h, "the full mLPR variant");
    std::vector<double> L = lpr_matrix(lpr, scores, threads);
    return mlpr_full_from_values(L, tables, h, scores.num_objects, threads);
}

MlprEstimate mlpr_nbh(const LprModel& lpr, const ProbTables& tables,
                      const ClassHierarchy& h, const EventTable& scores,
                      int threads) {
    require_tree(h, "the nbh mLPR variant");
    const int K = h.num_classes();
    if (scores.num_classes() != K)
        fail("table_shape", "score table does not match the hierarchy");

    // Per-class local node sets nbh(k) ∪ {k}, ascending ids.
    std::vector<std::vector<int>> local(K);
    for (int k = 0; k < K; ++k) {
        local[k] = neighborhood(h, k);
        local[k].push_back(k);
        std::sort(local[k].begin(), local[k].end());
        if (local[k].size() > 20)
            fail("neighborhood_too_large",
                 "neighborhood of class '" + h.names[k] +
                     "' exceeds the 20-node enumeration cap");
    }

    std::vector<double> L = lpr_matrix(lpr, scores, threads);

    MlprEstimate e;
    e.variant = "nbh";
    e.num_objects = scores.num_objects;
    e.values.resize(L.size());
    parallel_for(static_cast<std::size_t>(scores.num_objects), threads,
                 [&](std::size_t mb, std::size_t me) {
        for (std::size_t m = mb; m < me; ++m) {
            const double* lrow = &L[m * K];
            for (int k = 0; k < K; ++k) {
                const auto& nodes = local[k];
                const int nn = static_cast<int>(nodes.size());
                int self = 0;
                std::vector<int> parent_slot(nn, -1);
                for (int j = 0; j < nn; ++j) {
                    if (nodes[j] == k) self = j;
                    int p = h.parent_of(nodes[j]);
                    for (int q = 0; q < nn; ++q)
                        if (nodes[q] == p) parent_slot[j] = q;
                }
                double num = 0.0, den = 0.0;
                for (unsigned cfg = 0; cfg < (1u << nn); ++cfg) {
                    double w = 1.0;
                    for (int j = 0; j < nn && w > 0.0; ++j) {
                        int y = (cfg >> j) & 1;
                        double Lj = lrow[nodes[j]];
                        if (parent_slot[j] < 0) {
                            // parent outside the neighborhood (or root):
                            // prior-form potential P(Y|S) itself
                            w *= y ? Lj : 1.0 - Lj;
                            continue;
                        }
                        int yp = (cfg >> parent_slot[j]) & 1;
                        double tau = tables.prior[nodes[j]];
                        double theta = tables.cond[nodes[j]];
                        if (yp == 0) {
                            w *= y ? 0.0
                                   : (1.0 - tau) > 0.0 ? (1.0 - Lj) / (1.0 - tau) : 0.0;
                        } else if (y == 1) {
                            w *= Lj * theta / tau;
                        } else {
                            w *= (1.0 - tau) > 0.0
                                     ? (1.0 - Lj) * (1.0 - theta) / (1.0 - tau)
                                     : 0.0;
                        }
                    }
                    den += w;
                    if ((cfg >> self) & 1) num += w;
                }
                if (!(den > 0.0))
                    fail("zero_posterior_mass",
                         "neighborhood potentials assign zero mass to every "
                         "configuration");
                e.values[m * K + k] = num / den;
            }
        }
    });
    return e;
}

MlprEstimate mlpr_gaussian_from_model(const LprModel& base, const ProbTables& tables,
                                      const ClassHierarchy& h,
                                      const EventTable& scores, int threads) {
    require_tree(h, "the gaussian mLPR variant");
    const int K = h.num_classes();
    if (base.num_classes() != K || scores.num_classes() != K)
        fail("table_shape", "tables do not match the hierarchy");
    for (int k = 0; k < K; ++k) {
        if (base.gauss[k].n0 < 2 || base.gauss[k].n1 < 2)
            fail("class_degenerate",
                 "class '" + base.class_names[k] +
                     "' needs at least 2 positives and 2 negatives for the "
                     "gaussian variant");
    }

    MlprEstimate e;
    e.variant = "gaussian";
    e.num_objects = scores.num_objects;
    e.values.resize(scores.scores.size());
    parallel_for(static_cast<std::size_t>(scores.num_objects), threads,
                 [&](std::size_t mb, std::size_t me) {
        TreeLogPotentials pot(K);
        for (std::size_t m = mb; m < me; ++m) {
            for (int k = 0; k < K; ++k) {
                double s = scores.score(static_cast<int>(m), k);
                const auto& g = base.gauss[k];
                double l0 = normal_log_pdf(s, g.mu0, std::sqrt(g.var0));
                double l1 = normal_log_pdf(s, g.mu1, std::sqrt(g.var1));
                if (h.is_root(k)) {
                    pot.root[k] = {l0 + log_or_ninf(1.0 - tables.prior[k]),
                                   l1 + log_or_ninf(tables.prior[k])};
                } else {
                    double theta = tables.cond[k];
                    pot.edge[k] = {l0, kNegInf,
                                   l0 + log_or_ninf(1.0 - theta),
                                   l1 + log_or_ninf(theta)};
                }
            }
            std::vector<double> post = tree_posterior(h, pot);
            for (int k = 0; k < K; ++k) e.values[m * K + k] = post[k];
        }
    });
    return e;
}

MlprEstimate mlpr_gaussian(const EventTable& train, const ClassHierarchy& h,
                           const EventTable& scores, int threads) {
    FitOptions opt;
    opt.allow_degenerate = false;
    const LprModel base = fit_lpr(train, opt);  // reuses the moment summaries
    const ProbTables tables = fit_prob_tables(train, h);
    return mlpr_gaussian_from_model(base, tables, h, scores, threads);
}

}  // namespace hierrank
