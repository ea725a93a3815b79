#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "kcn/corpus.hpp"

namespace kcn {

using NodeId = Eigen::Index;

/// Selects the records of one analysis window: a single year, an inclusive
/// year range, or every record ("all").
struct SliceSpec {
    std::string label;
    std::optional<std::pair<int, int>> years;  // nullopt selects every year

    static SliceSpec all(std::string label = "all");
    static SliceSpec year(int y);
    static SliceSpec range(std::string label, int first, int last);

    bool contains(int year) const;
};

struct Edge {
    NodeId source;
    NodeId target;
    double weight;

    bool operator==(const Edge&) const = default;
};

/// Undirected weighted keyword graph. The adjacency is stored symmetric,
/// without self-loops, with positive weights.
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// `edges` may list each unordered pair at most once, in either
    /// orientation. Throws on self-loops, non-positive weights, out-of-range
    /// endpoints or duplicate labels.
    WeightedGraph(std::vector<std::string> labels, std::vector<std::size_t> freq,
                  const std::vector<Edge>& edges);

    NodeId node_count() const { return static_cast<NodeId>(labels_.size()); }
    std::size_t edge_count() const { return edge_count_; }
    bool empty() const { return labels_.empty(); }

    const std::string& label(NodeId v) const { return labels_.at(static_cast<std::size_t>(v)); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t freq(NodeId v) const { return freq_.at(static_cast<std::size_t>(v)); }
    const std::vector<std::size_t>& freqs() const { return freq_; }

    std::optional<NodeId> find(std::string_view label) const;
    /// Throws `Error` naming the label when absent.
    NodeId index_of(std::string_view label) const;

    const Eigen::SparseMatrix<double>& adjacency() const { return adjacency_; }
    double weight(NodeId u, NodeId v) const { return adjacency_.coeff(u, v); }

    /// Edges with source < target, ordered by (source, target).
    std::vector<Edge> edges() const;

    /// Calls `fn(neighbor, weight)` for each neighbor of `v` in index order.
    template <typename Fn>
    void for_each_neighbor(NodeId v, Fn&& fn) const {
        for (Eigen::SparseMatrix<double>::InnerIterator it(adjacency_, v); it; ++it) fn(it.row(), it.value());
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::size_t> freq_;
    std::unordered_map<std::string, NodeId> index_;
    Eigen::SparseMatrix<double> adjacency_;
    std::size_t edge_count_ = 0;
};

/// Co-occurrence network of the records in `slice`. Records are visited in
/// id order and nodes numbered by first appearance, so rebuilding is
/// bit-identical. Throws when the slice selects no record.
WeightedGraph build_kcn(const Corpus& corpus, const SliceSpec& slice);

/// Subgraph induced by `nodes` (kept in the given order).
WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<NodeId>& nodes);

/// Connected components, each sorted ascending, ordered by smallest member.
std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g);

/// Induced subgraph on the largest component; ties go to the component
/// holding the smaller node index.
WeightedGraph largest_component(const WeightedGraph& g);

std::size_t degree(const WeightedGraph& g, NodeId v);
double strength(const WeightedGraph& g, NodeId v);
std::vector<NodeId> neighbors(const WeightedGraph& g, NodeId v);

std::size_t degree(const WeightedGraph& g, std::string_view label);
double strength(const WeightedGraph& g, std::string_view label);
std::vector<std::string> neighbors(const WeightedGraph& g, std::string_view label);

Eigen::VectorXd degrees(const WeightedGraph& g);
Eigen::VectorXd strengths(const WeightedGraph& g);

// Export formats.

/// Extra per-node GraphML attribute; `type` is a GraphML attr.type
/// ("boolean", "int", "double" or "string"), `values` one entry per node.
struct NodeAttribute {
    std::string name;
    std::string type;
    std::vector<std::string> values;
};

std::string to_graphml(const WeightedGraph& g, const std::vector<NodeAttribute>& extra = {});
std::string to_dot(const WeightedGraph& g);
/// `source,target,weight` with labels, RFC 4180 quoting.
std::string to_edge_csv(const WeightedGraph& g);

}  // namespace kcn
