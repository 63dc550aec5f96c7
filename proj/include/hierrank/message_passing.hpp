#pragma once

#include <array>
#include <vector>

#include "hierrank/hierarchy.hpp"

namespace hierrank {

// Log-space node potentials on a tree/forest of binary labels. Roots use
// root[k][y]; non-roots use edge[k][2*ypa + y]. -inf encodes structural
// zeros (e.g. "positive child under a negative parent").
struct TreeLogPotentials {
    std::vector<std::array<double, 2>> root;
    std::vector<std::array<double, 4>> edge;

    explicit TreeLogPotentials(int K = 0) : root(K), edge(K) {}
};

// Exact two-pass sum-product; returns P(Y_k = 1 | evidence) per class.
// Sibling contributions are combined with prefix/suffix products (never by
// dividing a message out), so structural zeros are safe.
// Errors if the potentials leave zero total mass.
std::vector<double> tree_posterior(const ClassHierarchy& h,
                                   const TreeLogPotentials& pot);

}  // namespace hierrank
