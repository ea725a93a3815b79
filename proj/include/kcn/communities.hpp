#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kcn/corpus.hpp"
#include "kcn/graph.hpp"

namespace kcn {

/// One agglomeration step. Communities are named by the smallest node index
/// they contain; `absorbed` is merged into `kept` (kept < absorbed).
struct MergeStep {
    NodeId kept = 0;
    NodeId absorbed = 0;
    double delta_q = 0.0;
    double q_after = 0.0;
};

struct Partition {
    /// Cluster id per node, ids numbered 0.. in order of each cluster's
    /// smallest node index.
    std::vector<int> assignment;
    double modularity = 0.0;
    std::map<int, std::string> cluster_names;
    std::vector<MergeStep> merge_trace;
    /// Merges applied (a prefix of `merge_trace`) to reach `assignment`.
    std::size_t cut = 0;

    int cluster_count() const;
};

/// Weighted Newman modularity
///   Q = 1/(2W) * sum_ij (w_ij - s_i s_j / 2W) delta(c_i, c_j).
/// Throws unless `assignment` gives every node a non-negative cluster id.
double modularity(const WeightedGraph& g, const std::vector<int>& assignment);

/// Clauset-Newman-Moore agglomeration on the weighted graph: merge the
/// adjacent pair with the largest modularity gain (ties: smallest id pair)
/// until no adjacent pair remains, then cut the dendrogram at the first step
/// with maximal Q. Throws on an empty graph.
Partition fast_greedy(const WeightedGraph& g);

/// Replays the first `steps` merges of a trace over `node_count` singletons
/// and returns the relabelled assignment.
std::vector<int> assignment_after(NodeId node_count, const std::vector<MergeStep>& trace, std::size_t steps);

/// Sum of edge weights from each node to members of its own cluster.
std::vector<double> ingroup_degrees(const WeightedGraph& g, const std::vector<int>& assignment);

/// Names each cluster after its member with the highest in-group degree
/// (ties: higher keyword frequency, then smaller label).
Partition name_clusters(const WeightedGraph& g, Partition partition);

struct RankedKeyword {
    std::string keyword;
    double ingroup_degree = 0.0;
};

struct ClusterProfile {
    int id = 0;
    std::string name;
    std::size_t size = 0;
    std::vector<RankedKeyword> members;  ///< all members, ranked
    std::vector<RankedKeyword> top_k;
};

/// Per-cluster rankings, clusters ordered by size (descending) then id.
std::vector<ClusterProfile> cluster_profiles(const WeightedGraph& g, const Partition& partition, std::size_t k);

/// Clustering of one slice: everything is computed on the largest
/// component; other nodes are listed as unclustered.
struct SliceClusters {
    std::string label;
    WeightedGraph component;
    Partition partition;
    std::vector<ClusterProfile> profiles;
    std::vector<std::string> unclustered;
};

SliceClusters cluster_slice(const WeightedGraph& slice_graph, std::string label, std::size_t profile_k);

/// build -> largest component -> fast_greedy -> names -> profiles for each
/// year; keyed by the year label.
std::map<std::string, SliceClusters> temporal_clusters(const Corpus& corpus, const std::vector<int>& years,
                                                       std::size_t profile_k = 10, std::size_t threads = 1);

}  // namespace kcn
