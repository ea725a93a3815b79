#include "kcn/macro.hpp"

#include <algorithm>
#include <map>

#include "kcn/error.hpp"

namespace kcn {

double density(std::size_t n, std::size_t m) {
    if (n < 2) return 0.0;
    return 2.0 * static_cast<double>(m) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double average_degree(std::size_t n, std::size_t m) {
    if (n == 0) return 0.0;
    return 2.0 * static_cast<double>(m) / static_cast<double>(n);
}

std::optional<double> degree_assortativity(const WeightedGraph& g) {
    const Eigen::VectorXd k = degrees(g);
    const auto edges = g.edges();
    if (edges.empty()) return std::nullopt;

    // Both orientations: x and y share the same marginal, so one mean and
    // one variance serve both.
    const double count = 2.0 * static_cast<double>(edges.size());
    double sum = 0.0;
    for (const auto& e : edges) sum += k(e.source) + k(e.target);
    const double mean = sum / count;

    double var = 0.0;
    double cov = 0.0;
    for (const auto& e : edges) {
        const double a = k(e.source) - mean;
        const double b = k(e.target) - mean;
        var += a * a + b * b;
        cov += 2.0 * a * b;
    }
    if (var <= 0.0) return std::nullopt;
    return cov / var;
}

double weighted_clustering(const WeightedGraph& g, NodeId v) {
    const std::size_t k = degree(g, v);
    if (k < 2) return 0.0;
    Eigen::VectorXd to_v = Eigen::VectorXd::Zero(g.node_count());
    g.for_each_neighbor(v, [&](NodeId u, double w) { to_v(u) = w; });

    double sum = 0.0;
    g.for_each_neighbor(v, [&](NodeId j, double w_vj) {
        g.for_each_neighbor(j, [&](NodeId h, double) {
            if (h != v && to_v(h) > 0.0) sum += 0.5 * (w_vj + to_v(h));
        });
    });
    return sum / (strength(g, v) * static_cast<double>(k - 1));
}

double local_clustering(const WeightedGraph& g, NodeId v) {
    const std::size_t k = degree(g, v);
    if (k < 2) return 0.0;
    std::vector<bool> is_neighbor(static_cast<std::size_t>(g.node_count()), false);
    g.for_each_neighbor(v, [&](NodeId u, double) { is_neighbor[static_cast<std::size_t>(u)] = true; });
    std::size_t links = 0;
    g.for_each_neighbor(v, [&](NodeId j, double) {
        g.for_each_neighbor(j, [&](NodeId h, double) {
            if (is_neighbor[static_cast<std::size_t>(h)]) ++links;
        });
    });
    return static_cast<double>(links) / static_cast<double>(k * (k - 1));
}

double weighted_annd(const WeightedGraph& g, NodeId v) {
    if (degree(g, v) == 0) throw Error("weighted_annd: node \"" + g.label(v) + "\" is isolated");
    double sum = 0.0;
    g.for_each_neighbor(v, [&](NodeId j, double w) { sum += w * static_cast<double>(degree(g, j)); });
    return sum / strength(g, v);
}

double weighted_annd_ratio(const WeightedGraph& g, NodeId v) {
    return weighted_annd(g, v) / static_cast<double>(degree(g, v));
}

StructuralSummary summarize(const WeightedGraph& g) {
    StructuralSummary out;
    out.n = static_cast<std::size_t>(g.node_count());
    out.m = g.edge_count();
    out.d = density(out.n, out.m);
    out.z = average_degree(out.n, out.m);
    if (out.n == 0) return out;

    out.s = strengths(g).sum() / static_cast<double>(out.n);
    double cw = 0.0;
    double cu = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        cw += weighted_clustering(g, v);
        cu += local_clustering(g, v);
    }
    out.c = cw / static_cast<double>(out.n);
    out.c_unweighted = cu / static_cast<double>(out.n);

    for (const auto& comp : connected_components(g)) out.lc = std::max(out.lc, comp.size());
    out.r = degree_assortativity(g);
    return out;
}

NodeProfiles profile_nodes(const WeightedGraph& g) {
    NodeProfiles out;
    std::map<std::size_t, DegreeBin> bins;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const std::size_t k = degree(g, v);
        if (k == 0) continue;
        NodeProfile p;
        p.node = g.label(v);
        p.k = k;
        p.cw = weighted_clustering(g, v);
        p.knn_w = weighted_annd(g, v);
        p.knn_ratio = p.knn_w / static_cast<double>(k);

        auto& bin = bins[k];
        bin.k = k;
        ++bin.count;
        bin.mean_cw += p.cw;
        bin.mean_knn_ratio += p.knn_ratio;
        out.nodes.push_back(std::move(p));
    }
    for (auto& [k, bin] : bins) {
        bin.mean_cw /= static_cast<double>(bin.count);
        bin.mean_knn_ratio /= static_cast<double>(bin.count);
        out.bins.push_back(bin);
    }
    return out;
}

std::vector<std::pair<double, double>> ccdf(std::vector<double> values) {
    if (values.empty()) throw Error("ccdf: no values");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        out.emplace_back(values[i], static_cast<double>(values.size() - i) / n);
        i = j;
    }
    return out;
}

}  // namespace kcn
