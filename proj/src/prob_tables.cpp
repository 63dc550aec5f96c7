#include "hierrank/prob_tables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hierrank/util.hpp"

namespace hierrank {

ProbTables fit_prob_tables(const EventTable& train, const ClassHierarchy& h,
                           double clip_floor) {
    if (!train.has_labels())
        fail("labels_missing", "probability tables require labeled data");
    const int K = h.num_classes();
    if (train.num_classes() != K)
        fail("table_shape", "training table does not match the hierarchy");
    const int M = train.num_objects;
    if (M < 1) fail("train_too_small", "empty training table");

    ProbTables t;
    t.clip_floor = clip_floor > 0.0 ? clip_floor : std::max(1.0 / M, 1e-6);
    t.prior.assign(K, 0.0);
    t.cond.assign(K, std::numeric_limits<double>::quiet_NaN());
    t.cond_fallback.assign(K, 0);

    std::vector<std::int64_t> pos(K, 0), parent_pos(K, 0), both(K, 0);
    for (int m = 0; m < M; ++m) {
        for (int k = 0; k < K; ++k) {
            int y = train.label(m, k);
            bool gate = true;
            for (int p : h.parents[k]) gate = gate && train.label(m, p) == 1;
            if (y == 1 && !gate)
                fail("labels_inconsistent",
                     "labels are not hierarchy-consistent (positive child under a "
                     "negative parent, class '" + train.class_names[k] + "')");
            pos[k] += y;
            if (!h.parents[k].empty() && gate) {
                parent_pos[k] += 1;
                both[k] += y;
            }
        }
    }

    for (int k = 0; k < K; ++k) {
        t.prior[k] = std::clamp(static_cast<double>(pos[k]) / M, t.clip_floor, 1.0);
        if (h.parents[k].empty()) continue;
        if (parent_pos[k] == 0) {
            t.cond[k] = t.clip_floor;
            t.cond_fallback[k] = 1;
            t.warnings.push_back("class '" + h.names[k] +
                                 "': no rows with all parents positive; conditional "
                                 "probability set to the clip floor");
        } else {
            t.cond[k] = std::clamp(static_cast<double>(both[k]) / parent_pos[k],
                                   t.clip_floor, 1.0);
        }
    }
    return t;
}

}  // namespace hierrank
