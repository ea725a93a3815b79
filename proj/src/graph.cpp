#include "kcn/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "kcn/error.hpp"

namespace kcn {

SliceSpec SliceSpec::all(std::string label) { return {std::move(label), std::nullopt}; }

SliceSpec SliceSpec::year(int y) { return {std::to_string(y), std::pair{y, y}}; }

SliceSpec SliceSpec::range(std::string label, int first, int last) {
    if (first > last) throw Error("slice \"" + label + "\" has an empty year range");
    return {std::move(label), std::pair{first, last}};
}

bool SliceSpec::contains(int y) const { return !years || (y >= years->first && y <= years->second); }

WeightedGraph::WeightedGraph(std::vector<std::string> labels, std::vector<std::size_t> freq,
                             const std::vector<Edge>& edges)
    : labels_(std::move(labels)), freq_(std::move(freq)) {
    const NodeId n = node_count();
    if (freq_.size() != labels_.size()) throw Error("graph: frequency vector does not match node count");
    for (NodeId v = 0; v < n; ++v) {
        if (!index_.emplace(labels_[static_cast<std::size_t>(v)], v).second) {
            throw Error("graph: duplicate node label \"" + labels_[static_cast<std::size_t>(v)] + "\"");
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n) {
            throw Error("graph: edge endpoint out of range");
        }
        if (e.source == e.target) throw Error("graph: self-loop on \"" + label(e.source) + "\"");
        if (!(e.weight > 0)) throw Error("graph: edge weights must be positive");
        triplets.emplace_back(e.source, e.target, e.weight);
        triplets.emplace_back(e.target, e.source, e.weight);
    }
    adjacency_.resize(n, n);
    adjacency_.setFromTriplets(triplets.begin(), triplets.end(), [](double, double) -> double {
        throw Error("graph: duplicate edge");
    });
    adjacency_.makeCompressed();
    edge_count_ = edges.size();
}

std::optional<NodeId> WeightedGraph::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId WeightedGraph::index_of(std::string_view label) const {
    if (auto v = find(label)) return *v;
    throw Error("unknown node \"" + std::string(label) + "\"");
}

std::vector<Edge> WeightedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId v = 0; v < node_count(); ++v) {
        for_each_neighbor(v, [&](NodeId u, double w) {
            if (v < u) out.push_back({v, u, w});
        });
    }
    return out;
}

WeightedGraph build_kcn(const Corpus& corpus, const SliceSpec& slice) {
    std::vector<const ArticleRecord*> selected;
    for (const auto& rec : corpus.records) {
        if (slice.contains(rec.year)) selected.push_back(&rec);
    }
    if (selected.empty()) throw Error("slice \"" + slice.label + "\" selects no records");
    std::sort(selected.begin(), selected.end(),
              [](const ArticleRecord* a, const ArticleRecord* b) { return a->id < b->id; });

    std::vector<std::string> labels;
    std::vector<std::size_t> freq;
    std::unordered_map<std::string, NodeId> index;
    std::map<std::pair<NodeId, NodeId>, double> weights;

    for (const ArticleRecord* rec : selected) {
        std::vector<NodeId> ids;
        for (const auto& kw : rec->keywords) {
            auto [it, inserted] = index.emplace(kw, static_cast<NodeId>(labels.size()));
            if (inserted) {
                labels.push_back(kw);
                freq.push_back(0);
            }
            ids.push_back(it->second);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (NodeId id : ids) ++freq[static_cast<std::size_t>(id)];
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) weights[{ids[i], ids[j]}] += 1.0;
        }
    }

    std::vector<Edge> edges;
    edges.reserve(weights.size());
    for (const auto& [pair, w] : weights) edges.push_back({pair.first, pair.second, w});
    return WeightedGraph(std::move(labels), std::move(freq), edges);
}

WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<NodeId>& nodes) {
    std::vector<NodeId> local(static_cast<std::size_t>(g.node_count()), -1);
    std::vector<std::string> labels;
    std::vector<std::size_t> freq;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        local.at(static_cast<std::size_t>(nodes[i])) = static_cast<NodeId>(i);
        labels.push_back(g.label(nodes[i]));
        freq.push_back(g.freq(nodes[i]));
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        g.for_each_neighbor(nodes[i], [&](NodeId u, double w) {
            const NodeId j = local[static_cast<std::size_t>(u)];
            if (j > static_cast<NodeId>(i)) edges.push_back({static_cast<NodeId>(i), j, w});
        });
    }
    return WeightedGraph(std::move(labels), std::move(freq), edges);
}

std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g) {
    const NodeId n = g.node_count();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<std::vector<NodeId>> components;
    for (NodeId start = 0; start < n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        std::vector<NodeId> comp{start};
        seen[static_cast<std::size_t>(start)] = true;
        for (std::size_t head = 0; head < comp.size(); ++head) {
            g.for_each_neighbor(comp[head], [&](NodeId u, double) {
                if (!seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = true;
                    comp.push_back(u);
                }
            });
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

WeightedGraph largest_component(const WeightedGraph& g) {
    if (g.empty()) throw Error("largest_component: empty graph");
    const auto components = connected_components(g);
    const auto* best = &components.front();
    for (const auto& c : components) {
        if (c.size() > best->size()) best = &c;
    }
    return induced_subgraph(g, *best);
}

std::size_t degree(const WeightedGraph& g, NodeId v) {
    if (v < 0 || v >= g.node_count()) throw Error("degree: node index out of range");
    return static_cast<std::size_t>(g.adjacency().col(v).nonZeros());
}

double strength(const WeightedGraph& g, NodeId v) {
    if (v < 0 || v >= g.node_count()) throw Error("strength: node index out of range");
    return g.adjacency().col(v).sum();
}

std::vector<NodeId> neighbors(const WeightedGraph& g, NodeId v) {
    if (v < 0 || v >= g.node_count()) throw Error("neighbors: node index out of range");
    std::vector<NodeId> out;
    g.for_each_neighbor(v, [&](NodeId u, double) { out.push_back(u); });
    return out;
}

std::size_t degree(const WeightedGraph& g, std::string_view label) { return degree(g, g.index_of(label)); }

double strength(const WeightedGraph& g, std::string_view label) { return strength(g, g.index_of(label)); }

std::vector<std::string> neighbors(const WeightedGraph& g, std::string_view label) {
    std::vector<std::string> out;
    for (NodeId u : neighbors(g, g.index_of(label))) out.push_back(g.label(u));
    std::sort(out.begin(), out.end());
    return out;
}

Eigen::VectorXd degrees(const WeightedGraph& g) {
    Eigen::VectorXd k(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) k(v) = static_cast<double>(g.adjacency().col(v).nonZeros());
    return k;
}

Eigen::VectorXd strengths(const WeightedGraph& g) {
    return g.adjacency() * Eigen::VectorXd::Ones(g.node_count());
}

}  // namespace kcn
