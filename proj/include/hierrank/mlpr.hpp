#pragma once

#include <span>
#include <string>
#include <vector>

#include "hierrank/event_table.hpp"
#include "hierrank/hierarchy.hpp"
#include "hierrank/lpr.hpp"
#include "hierrank/prob_tables.hpp"

namespace hierrank {

// m̂LPR estimates, one value per event, all in [0,1].
struct MlprEstimate {
    std::string variant;
    int num_objects = 0;
    std::vector<double> values;  // M*K
};

// indpt: no hierarchy information, value = LPR pointwise.
MlprEstimate mlpr_indpt(const LprModel& lpr, const EventTable& scores,
                        int threads = 1);

// nbh: exhaustive enumeration over the labels of nbh(k) ∪ {k}. Nodes whose
// parent lies outside the neighborhood get the prior-form potential; the
// local configuration set is renormalized. Neighborhoods capped at 20 nodes.
MlprEstimate mlpr_nbh(const LprModel& lpr, const ProbTables& tables,
                      const ClassHierarchy& h, const EventTable& scores,
                      int threads = 1);

// full: exact posterior under the LPR-based potential factorization
//   root:      psi(y)        = LPR-term(y)
//   non-root:  psi(1, 1)     = LPR * theta / tau
//              psi(1, 0)     = (1-LPR) * (1-theta) / (1-tau)
//              psi(0, 1)     = 0
//              psi(0, 0)     = (1-LPR) / (1-tau)
// run as log-space sum-product over the tree.
MlprEstimate mlpr_full(const LprModel& lpr, const ProbTables& tables,
                       const ClassHierarchy& h, const EventTable& scores,
                       int threads = 1);

// Same computation from precomputed per-event LPR values; the seam used by
// the enumeration equivalence tests.
MlprEstimate mlpr_full_from_values(std::span<const double> lpr_values,
                                   const ProbTables& tables,
                                   const ClassHierarchy& h, int num_objects,
                                   int threads = 1);

// gaussian: class-conditional Gaussians by moment matching on the training
// split, then the P(S|Y)·P(Y|pa) factorization through the same sum-product.
// Requires >= 2 positives and >= 2 negatives per class.
MlprEstimate mlpr_gaussian(const EventTable& train, const ClassHierarchy& h,
                           const EventTable& scores, int threads = 1);

// gaussian from an already-fitted model (moment summaries + tables), the form
// used when ranking against a serialized fit.
MlprEstimate mlpr_gaussian_from_model(const LprModel& lpr, const ProbTables& tables,
                                      const ClassHierarchy& h,
                                      const EventTable& scores, int threads = 1);

}  // namespace hierrank
