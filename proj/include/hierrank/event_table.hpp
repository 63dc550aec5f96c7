#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hierrank {

// M objects × K classes of classifier scores, with optional binary labels.
// Row-major; column order matches class ids of the hierarchy in use.
struct EventTable {
    int num_objects = 0;
    std::vector<std::string> class_names;
    std::vector<double> scores;         // M*K
    std::vector<std::uint8_t> labels;   // M*K, or empty when unlabeled

    int num_classes() const { return static_cast<int>(class_names.size()); }
    std::int64_t num_events() const {
        return static_cast<std::int64_t>(num_objects) * num_classes();
    }
    bool has_labels() const { return !labels.empty(); }

    double score(int m, int k) const {
        return scores[static_cast<std::size_t>(m) * class_names.size() + k];
    }
    int label(int m, int k) const {
        return labels[static_cast<std::size_t>(m) * class_names.size() + k];
    }
};

}  // namespace hierrank
