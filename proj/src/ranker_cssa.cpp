// Condensing sort-and-select: keep a pool of supernodes (event sequences);
// repeatedly take the max-mean supernode and either emit it (parent already
// emitted or absent) or condense it into its parent supernode. Stale priority
// queue entries are skipped via version stamps.

#include <cstdint>
#include <queue>
#include <vector>

#include "hierrank/ranker.hpp"
#include "hierrank/util.hpp"
#include "ranker_blocks.hpp"

namespace hierrank {
namespace {

struct Dsu {
    std::vector<std::int64_t> parent;
    explicit Dsu(std::int64_t n) : parent(static_cast<std::size_t>(n)) {
        for (std::int64_t i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    }
    std::int64_t find(std::int64_t x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
};

}  // namespace

Ranking cssa_rank(const ScoredForest& f) {
    if (f.hierarchy.mode != HierarchyMode::tree)
        fail("hierarchy_mode", "cssa_rank requires a tree hierarchy");
    const int K = f.hierarchy.num_classes();
    const std::int64_t n = f.num_events();

    detail::BlockPool pool;
    pool.event.reserve(static_cast<std::size_t>(n));
    pool.next.reserve(static_cast<std::size_t>(n));

    std::vector<detail::FBlock> node(static_cast<std::size_t>(n));
    std::vector<std::uint32_t> version(static_cast<std::size_t>(n), 0);
    std::vector<char> emitted(static_cast<std::size_t>(n), 0);
    Dsu dsu(n);

    struct Entry {
        double mean;
        std::int64_t size;
        std::int64_t head;
        std::int64_t id;
        std::uint32_t ver;
    };
    auto ranks_after = [](const Entry& a, const Entry& b) {
        if (a.mean != b.mean) return a.mean < b.mean;
        if (a.size != b.size) return a.size < b.size;
        return a.head > b.head;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(ranks_after)> pq(ranks_after);
    for (std::int64_t e = 0; e < n; ++e) {
        node[static_cast<std::size_t>(e)] =
            detail::singleton(pool, e, f.values[static_cast<std::size_t>(e)]);
        pq.push(Entry{node[static_cast<std::size_t>(e)].mean(), 1, e, e, 0});
    }

    auto parent_event = [&](std::int64_t ev) -> std::int64_t {
        const int k = static_cast<int>(ev % K);
        const int pa = f.hierarchy.parent_of(k);
        return pa < 0 ? -1 : ev - k + pa;
    };

    Ranking r;
    r.num_objects = f.num_objects;
    r.num_classes = K;
    r.order.reserve(static_cast<std::size_t>(n));
    while (!pq.empty()) {
        const Entry t = pq.top();
        pq.pop();
        const std::int64_t id = t.id;
        if (dsu.find(id) != id || emitted[static_cast<std::size_t>(id)] ||
            version[static_cast<std::size_t>(id)] != t.ver)
            continue;
        const std::int64_t pe = parent_event(node[static_cast<std::size_t>(id)].head);
        const std::int64_t prep = pe < 0 ? -1 : dsu.find(pe);
        if (prep < 0 || emitted[static_cast<std::size_t>(prep)]) {
            for (int seg = node[static_cast<std::size_t>(id)].first; seg != -1;
                 seg = pool.next[static_cast<std::size_t>(seg)])
                r.order.push_back(pool.event[static_cast<std::size_t>(seg)]);
            emitted[static_cast<std::size_t>(id)] = 1;
        } else {
            node[static_cast<std::size_t>(prep)] = detail::concat(
                pool, node[static_cast<std::size_t>(prep)], node[static_cast<std::size_t>(id)]);
            dsu.parent[static_cast<std::size_t>(id)] = prep;
            const std::uint32_t v = ++version[static_cast<std::size_t>(prep)];
            const detail::FBlock& p = node[static_cast<std::size_t>(prep)];
            pq.push(Entry{p.mean(), p.size, p.head, prep, v});
        }
    }
    return r;
}

}  // namespace hierrank
