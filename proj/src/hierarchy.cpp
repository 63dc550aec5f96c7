#include "hierrank/hierarchy.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "hierrank/util.hpp"

namespace hierrank {

namespace {

int intern(ClassHierarchy& h, const std::string& name) {
    auto it = h.id_of.find(name);
    if (it != h.id_of.end()) return it->second;
    int id = static_cast<int>(h.names.size());
    h.id_of.emplace(name, id);
    h.names.push_back(name);
    h.parents.emplace_back();
    h.children.emplace_back();
    return id;
}

// Kahn's algorithm with a FIFO seeded in id order: deterministic topo order,
// and detects cycles (left-over nodes).
void finish(ClassHierarchy& h) {
    int K = h.num_classes();
    std::vector<int> indeg(K);
    for (int k = 0; k < K; ++k) indeg[k] = static_cast<int>(h.parents[k].size());
    std::deque<int> q;
    for (int k = 0; k < K; ++k)
        if (indeg[k] == 0) q.push_back(k);
    h.topo.clear();
    h.topo.reserve(K);
    while (!q.empty()) {
        int k = q.front();
        q.pop_front();
        h.topo.push_back(k);
        for (int c : h.children[k])
            if (--indeg[c] == 0) q.push_back(c);
    }
    if (static_cast<int>(h.topo.size()) != K)
        fail("hierarchy_cycle", "hierarchy contains a directed cycle");
}

}  // namespace

ClassHierarchy load_hierarchy(const std::vector<EdgeRow>& rows, HierarchyMode mode) {
    ClassHierarchy h;
    h.mode = mode;
    std::set<std::pair<int, int>> seen;
    for (const auto& [pname, cname] : rows) {
        if (cname.empty())
            fail("hierarchy_bad_row", "hierarchy row with empty child name");
        if (pname.empty()) {
            intern(h, cname);  // declares a node without an edge
            continue;
        }
        int p = intern(h, pname);
        int c = intern(h, cname);
        if (p == c)
            fail("hierarchy_self_edge", "self edge on node '" + pname + "'");
        if (!seen.insert({p, c}).second)
            fail("hierarchy_duplicate_edge",
                 "duplicate edge " + pname + " -> " + cname);
        if (mode == HierarchyMode::tree && !h.parents[c].empty())
            fail("hierarchy_multi_parent",
                 "node '" + cname + "' has more than one parent in tree mode");
        h.parents[c].push_back(p);
        h.children[p].push_back(c);
    }
    if (h.names.empty())
        fail("hierarchy_empty", "hierarchy has no nodes");
    finish(h);
    return h;
}

ClassHierarchy load_hierarchy_file(const std::string& path, HierarchyMode mode) {
    std::ifstream in(path);
    if (!in) fail("io_open", "cannot open hierarchy file: " + path);
    std::vector<EdgeRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            fail("hierarchy_bad_row", "expected 'parent,child' row: " + line);
        std::string a = line.substr(0, comma);
        std::string b = line.substr(comma + 1);
        if (first) {
            first = false;
            if (a == "parent" && b == "child") continue;  // header optional
        }
        rows.emplace_back(a, b);
    }
    return load_hierarchy(rows, mode);
}

std::vector<int> ancestors(const ClassHierarchy& h, int k) {
    if (k < 0 || k >= h.num_classes())
        fail("invalid_class", "class id out of range");
    std::vector<char> mark(h.num_classes(), 0);
    std::vector<int> stack(h.parents[k].begin(), h.parents[k].end());
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (mark[v]) continue;
        mark[v] = 1;
        for (int p : h.parents[v]) stack.push_back(p);
    }
    std::vector<int> out;
    for (int v = 0; v < h.num_classes(); ++v)
        if (mark[v]) out.push_back(v);
    return out;
}

std::vector<int> neighborhood(const ClassHierarchy& h, int k) {
    if (k < 0 || k >= h.num_classes())
        fail("invalid_class", "class id out of range");
    std::vector<int> out(h.parents[k]);
    out.insert(out.end(), h.children[k].begin(), h.children[k].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool is_topological(const Ranking& r, const ClassHierarchy& h, int num_objects) {
    const int K = h.num_classes();
    const std::int64_t n = static_cast<std::int64_t>(num_objects) * K;
    if (r.size() != n)
        fail("ranking_size", "ranking does not cover all events");
    std::vector<std::int64_t> pos(n, -1);
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t f = r.order[i];
        if (f < 0 || f >= n || pos[f] != -1)
            fail("ranking_not_permutation", "ranking is not a permutation of the events");
        pos[f] = i;
    }
    // Edge-wise check suffices: if every parent precedes its child, ancestors
    // precede descendants transitively.
    for (int m = 0; m < num_objects; ++m) {
        std::int64_t base = static_cast<std::int64_t>(m) * K;
        for (int c = 0; c < K; ++c)
            for (int p : h.parents[c])
                if (pos[base + p] > pos[base + c]) return false;
    }
    return true;
}

PSets classify_p_sets(const ClassHierarchy& h) {
    if (h.mode != HierarchyMode::tree)
        fail("hierarchy_mode", "p-set classification requires a tree/forest hierarchy");
    const int K = h.num_classes();
    std::vector<char> chainlike(K, 0);  // subtree is a single-child path
    for (auto it = h.topo.rbegin(); it != h.topo.rend(); ++it) {
        int v = *it;
        const auto& ch = h.children[v];
        chainlike[v] = ch.empty() || (ch.size() == 1 && chainlike[ch[0]]);
    }
    PSets out;
    for (int v = 0; v < K; ++v) {
        if (chainlike[v]) out.p1.push_back(v);
        if (h.children[v].size() >= 2) {
            bool all = true;
            for (int c : h.children[v]) all = all && chainlike[c];
            if (all) out.p2.push_back(v);
        }
    }
    std::vector<char> in_p3(K, 0);
    for (int v : out.p2) {
        int u = h.parent_of(v);
        while (u != -1 && h.children[u].size() == 1 && !in_p3[u]) {
            in_p3[u] = 1;
            u = h.parent_of(u);
        }
    }
    for (int v = 0; v < K; ++v)
        if (in_p3[v]) out.p3.push_back(v);
    return out;
}

}  // namespace hierrank
