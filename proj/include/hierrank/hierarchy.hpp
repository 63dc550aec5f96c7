#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hierrank {

// Tree vs DAG is declared, not inferred; ops that only make sense for one
// mode reject the other early.
enum class HierarchyMode { tree, dag };

// Class hierarchy over K named nodes with dense 0-based ids. Multiple roots
// are allowed in both modes (forests / disconnected graphs).
struct ClassHierarchy {
    HierarchyMode mode = HierarchyMode::tree;
    std::vector<std::string> names;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;
    std::vector<int> topo;  // class ids, every parent before its children
    std::unordered_map<std::string, int> id_of;

    int num_classes() const { return static_cast<int>(names.size()); }
    bool is_root(int k) const { return parents[k].empty(); }
    // Tree-mode convenience: the unique parent, or -1 for roots.
    int parent_of(int k) const { return parents[k].empty() ? -1 : parents[k][0]; }
};

// One (object, class) decision. Flat index i = object*K + class.
struct EventIndex {
    int object = 0;
    int cls = 0;

    std::int64_t flat(int K) const {
        return static_cast<std::int64_t>(object) * K + cls;
    }
    static EventIndex from_flat(std::int64_t f, int K) {
        return {static_cast<int>(f / K), static_cast<int>(f % K)};
    }
};

// A permutation of all n = M*K events, best first, stored as flat ids.
struct Ranking {
    std::vector<std::int64_t> order;
    int num_objects = 0;
    int num_classes = 0;

    std::int64_t size() const { return static_cast<std::int64_t>(order.size()); }
};

// (parent_name, child_name); an empty parent declares a node with no edge
// (root / isolated), matching the CSV row form ",name".
using EdgeRow = std::pair<std::string, std::string>;

// Interns names to dense ids in first-appearance order and validates:
// self-edges, duplicate edges, >1 parent in tree mode, cycles.
ClassHierarchy load_hierarchy(const std::vector<EdgeRow>& rows, HierarchyMode mode);

// Reads the `parent,child` CSV form of the above.
ClassHierarchy load_hierarchy_file(const std::string& path, HierarchyMode mode);

// Transitive closure of parents, excluding k itself. Sorted ascending.
std::vector<int> ancestors(const ClassHierarchy& h, int k);

// parents(k) ∪ children(k), sorted ascending.
std::vector<int> neighborhood(const ClassHierarchy& h, int k);

// True iff for every object the ranking places each event after all of its
// within-object ancestor events. Cross-object pairs are unconstrained.
bool is_topological(const Ranking& r, const ClassHierarchy& h, int num_objects);

// Node sets driving the bottom-up merge order:
//   p1: nodes whose whole subtree is a single-child chain;
//   p2: nodes with >= 2 children, all of them in p1;
//   p3: the contiguous run of single-child ancestors directly above a p2 node.
struct PSets {
    std::vector<int> p1, p2, p3;
};
PSets classify_p_sets(const ClassHierarchy& h);

}  // namespace hierrank
