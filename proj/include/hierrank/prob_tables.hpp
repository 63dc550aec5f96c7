#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hierrank/event_table.hpp"
#include "hierrank/hierarchy.hpp"

namespace hierrank {

// Empirical label probabilities: prior[k] = P(Y_k=1), and for non-roots
// cond[k] = P(Y_k=1 | all parents 1). Everything floored into
// [clip_floor, 1]; absent-parent configurations are structurally zero and
// never stored. cond[k] is NaN for roots.
struct ProbTables {
    double clip_floor = 0.0;
    std::vector<double> prior;
    std::vector<double> cond;
    std::vector<std::uint8_t> cond_fallback;  // 1 where no parent-positive row existed
    std::vector<std::string> warnings;
};

// clip_floor <= 0 selects the default max(1/M, 1e-6). Errors if labels are
// not hierarchy-consistent.
ProbTables fit_prob_tables(const EventTable& train, const ClassHierarchy& h,
                           double clip_floor = 0.0);

}  // namespace hierrank
