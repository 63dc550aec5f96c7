#include "hierrank/message_passing.hpp"

#include <cmath>
#include <limits>

#include "hierrank/util.hpp"

namespace hierrank {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double lse2(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double hi = a > b ? a : b;
    double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

std::vector<double> tree_posterior(const ClassHierarchy& h,
                                   const TreeLogPotentials& pot) {
    if (h.mode != HierarchyMode::tree)
        fail("hierarchy_mode", "sum-product requires a tree/forest hierarchy");
    const int K = h.num_classes();

    // Upward pass: up[v][ypa] = message v -> parent; child_sum[v][y] pools the
    // messages from v's children.
    std::vector<std::array<double, 2>> up(K);
    std::vector<std::array<double, 2>> child_sum(K, {0.0, 0.0});
    for (auto it = h.topo.rbegin(); it != h.topo.rend(); ++it) {
        int v = *it;
        if (h.is_root(v)) continue;
        for (int yp = 0; yp < 2; ++yp) {
            double t0 = pot.edge[v][2 * yp + 0] + child_sum[v][0];
            double t1 = pot.edge[v][2 * yp + 1] + child_sum[v][1];
            up[v][yp] = lse2(t0, t1);
        }
        int p = h.parent_of(v);
        child_sum[p][0] += up[v][0];
        child_sum[p][1] += up[v][1];
    }

    // Downward pass: down[v][y] carries v's own potential plus everything
    // reachable through its parent (computed while visiting the parent).
    std::vector<std::array<double, 2>> down(K);
    std::vector<double> out(K);
    for (int v : h.topo) {
        if (h.is_root(v)) down[v] = pot.root[v];

        double b0 = down[v][0] + child_sum[v][0];
        double b1 = down[v][1] + child_sum[v][1];
        double z = lse2(b0, b1);
        if (z == kNegInf)
            fail("zero_posterior_mass",
                 "potentials assign zero mass to every label configuration");
        out[v] = std::exp(b1 - z);

        const auto& ch = h.children[v];
        if (ch.empty()) continue;
        std::size_t c = ch.size();
        std::vector<std::array<double, 2>> pre(c + 1, {0.0, 0.0});
        std::vector<std::array<double, 2>> suf(c + 1, {0.0, 0.0});
        for (std::size_t i = 0; i < c; ++i) {
            pre[i + 1][0] = pre[i][0] + up[ch[i]][0];
            pre[i + 1][1] = pre[i][1] + up[ch[i]][1];
        }
        for (std::size_t i = c; i > 0; --i) {
            suf[i - 1][0] = suf[i][0] + up[ch[i - 1]][0];
            suf[i - 1][1] = suf[i][1] + up[ch[i - 1]][1];
        }
        for (std::size_t i = 0; i < c; ++i) {
            int w = ch[i];
            double ctx0 = down[v][0] + pre[i][0] + suf[i + 1][0];
            double ctx1 = down[v][1] + pre[i][1] + suf[i + 1][1];
            down[w][0] = lse2(ctx0 + pot.edge[w][0], ctx1 + pot.edge[w][2]);
            down[w][1] = lse2(ctx0 + pot.edge[w][1], ctx1 + pot.edge[w][3]);
        }
    }
    return out;
}

}  // namespace hierrank
