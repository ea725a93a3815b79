#include "kcn/communities.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "kcn/error.hpp"
#include "kcn/parallel.hpp"

namespace kcn {
namespace {

// Renumbers arbitrary community labels to 0.. in order of first node.
std::vector<int> relabel(const std::vector<NodeId>& community) {
    std::map<NodeId, int> ids;
    std::vector<int> out(community.size());
    for (std::size_t v = 0; v < community.size(); ++v) {
        auto [it, inserted] = ids.emplace(community[v], static_cast<int>(ids.size()));
        out[v] = it->second;
    }
    return out;
}

bool ranks_before(const RankedKeyword& a, std::size_t freq_a, const RankedKeyword& b, std::size_t freq_b) {
    if (a.ingroup_degree != b.ingroup_degree) return a.ingroup_degree > b.ingroup_degree;
    if (freq_a != freq_b) return freq_a > freq_b;
    return a.keyword < b.keyword;
}

}  // namespace

int Partition::cluster_count() const {
    return assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
}

double modularity(const WeightedGraph& g, const std::vector<int>& assignment) {
    const NodeId n = g.node_count();
    if (assignment.size() != static_cast<std::size_t>(n)) {
        throw Error("modularity: assignment covers " + std::to_string(assignment.size()) + " of " +
                    std::to_string(n) + " nodes");
    }
    int clusters = 0;
    for (int c : assignment) {
        if (c < 0) throw Error("modularity: node without a cluster");
        clusters = std::max(clusters, c + 1);
    }

    const Eigen::VectorXd s = strengths(g);
    const double two_w = s.sum();
    if (two_w <= 0.0) return 0.0;

    std::vector<Eigen::Triplet<double>> entries;
    for (NodeId v = 0; v < n; ++v) entries.emplace_back(v, assignment[static_cast<std::size_t>(v)], 1.0);
    Eigen::SparseMatrix<double> membership(n, clusters);
    membership.setFromTriplets(entries.begin(), entries.end());

    const Eigen::SparseMatrix<double> within = membership.transpose() * g.adjacency() * membership;
    const Eigen::VectorXd cluster_strength = membership.transpose() * s;
    double internal = 0.0;
    for (int c = 0; c < clusters; ++c) internal += within.coeff(c, c);
    return (internal - cluster_strength.squaredNorm() / two_w) / two_w;
}

std::vector<int> assignment_after(NodeId node_count, const std::vector<MergeStep>& trace, std::size_t steps) {
    std::vector<NodeId> community(static_cast<std::size_t>(node_count));
    std::iota(community.begin(), community.end(), NodeId{0});
    std::vector<std::vector<NodeId>> members(community.size());
    for (NodeId v = 0; v < node_count; ++v) members[static_cast<std::size_t>(v)] = {v};
    for (std::size_t t = 0; t < steps && t < trace.size(); ++t) {
        auto& kept = members.at(static_cast<std::size_t>(trace[t].kept));
        auto& absorbed = members.at(static_cast<std::size_t>(trace[t].absorbed));
        for (NodeId v : absorbed) community[static_cast<std::size_t>(v)] = trace[t].kept;
        kept.insert(kept.end(), absorbed.begin(), absorbed.end());
        absorbed.clear();
    }
    return relabel(community);
}

Partition fast_greedy(const WeightedGraph& g) {
    const NodeId n = g.node_count();
    if (n == 0) throw Error("fast_greedy: empty graph");

    const Eigen::VectorXd s = strengths(g);
    const double two_w = s.sum();

    Partition result;
    if (two_w <= 0.0) {
        result.assignment = assignment_after(n, {}, 0);
        result.modularity = 0.0;
        return result;
    }

    // links[c]: weight from community c to each adjacent community.
    std::vector<std::map<NodeId, double>> links(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) {
        g.for_each_neighbor(v, [&](NodeId u, double w) { links[static_cast<std::size_t>(v)][u] = w; });
    }
    std::vector<double> total(s.data(), s.data() + n);
    std::vector<bool> alive(static_cast<std::size_t>(n), true);

    auto gain = [&](NodeId a, NodeId b, double w_ab) {
        return 2.0 * w_ab / two_w -
               2.0 * total[static_cast<std::size_t>(a)] * total[static_cast<std::size_t>(b)] / (two_w * two_w);
    };

    // Best partner (with larger id) per community.
    struct Best {
        NodeId partner = -1;
        double dq = -std::numeric_limits<double>::infinity();
    };
    std::vector<Best> best(static_cast<std::size_t>(n));
    auto refresh = [&](NodeId c) {
        Best b;
        for (const auto& [other, w] : links[static_cast<std::size_t>(c)]) {
            if (other <= c) continue;
            const double dq = gain(c, other, w);
            if (dq > b.dq) b = {other, dq};
        }
        best[static_cast<std::size_t>(c)] = b;
    };
    for (NodeId c = 0; c < n; ++c) refresh(c);

    double q = 0.0;
    for (NodeId v = 0; v < n; ++v) q -= (s(v) / two_w) * (s(v) / two_w);
    double best_q = q;
    std::size_t best_cut = 0;

    for (;;) {
        NodeId kept = -1;
        double dq = -std::numeric_limits<double>::infinity();
        for (NodeId c = 0; c < n; ++c) {
            const auto& b = best[static_cast<std::size_t>(c)];
            if (alive[static_cast<std::size_t>(c)] && b.partner >= 0 && b.dq > dq) {
                kept = c;
                dq = b.dq;
            }
        }
        if (kept < 0) break;
        const NodeId absorbed = best[static_cast<std::size_t>(kept)].partner;

        auto& keep_links = links[static_cast<std::size_t>(kept)];
        auto& gone_links = links[static_cast<std::size_t>(absorbed)];
        keep_links.erase(absorbed);
        gone_links.erase(kept);
        for (const auto& [other, w] : gone_links) {
            keep_links[other] += w;
            auto& back = links[static_cast<std::size_t>(other)];
            back.erase(absorbed);
            back[kept] += w;
        }
        gone_links.clear();
        total[static_cast<std::size_t>(kept)] += total[static_cast<std::size_t>(absorbed)];
        alive[static_cast<std::size_t>(absorbed)] = false;
        best[static_cast<std::size_t>(absorbed)] = {};

        q += dq;
        result.merge_trace.push_back({kept, absorbed, dq, q});
        if (q > best_q) {
            best_q = q;
            best_cut = result.merge_trace.size();
        }

        refresh(kept);
        for (const auto& [other, w] : keep_links) refresh(other);
    }

    result.cut = best_cut;
    result.assignment = assignment_after(n, result.merge_trace, best_cut);
    result.modularity = modularity(g, result.assignment);
    return result;
}

std::vector<double> ingroup_degrees(const WeightedGraph& g, const std::vector<int>& assignment) {
    if (assignment.size() != static_cast<std::size_t>(g.node_count())) {
        throw Error("ingroup_degrees: assignment does not cover the graph");
    }
    std::vector<double> out(assignment.size(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        g.for_each_neighbor(v, [&](NodeId u, double w) {
            if (assignment[static_cast<std::size_t>(u)] == assignment[static_cast<std::size_t>(v)]) {
                out[static_cast<std::size_t>(v)] += w;
            }
        });
    }
    return out;
}

Partition name_clusters(const WeightedGraph& g, Partition partition) {
    const auto in_degree = ingroup_degrees(g, partition.assignment);
    std::map<int, NodeId> leader;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const int c = partition.assignment[static_cast<std::size_t>(v)];
        auto [it, inserted] = leader.emplace(c, v);
        if (inserted) continue;
        const NodeId u = it->second;
        const RankedKeyword cand{g.label(v), in_degree[static_cast<std::size_t>(v)]};
        const RankedKeyword cur{g.label(u), in_degree[static_cast<std::size_t>(u)]};
        if (ranks_before(cand, g.freq(v), cur, g.freq(u))) it->second = v;
    }
    partition.cluster_names.clear();
    for (const auto& [c, v] : leader) partition.cluster_names[c] = g.label(v);
    return partition;
}

std::vector<ClusterProfile> cluster_profiles(const WeightedGraph& g, const Partition& partition, std::size_t k) {
    if (k == 0) throw Error("cluster_profiles: k must be at least 1");
    const auto in_degree = ingroup_degrees(g, partition.assignment);

    std::map<int, std::vector<NodeId>> members;
    for (NodeId v = 0; v < g.node_count(); ++v) members[partition.assignment[static_cast<std::size_t>(v)]].push_back(v);

    std::vector<ClusterProfile> out;
    for (auto& [c, nodes] : members) {
        std::sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
            return ranks_before({g.label(a), in_degree[static_cast<std::size_t>(a)]}, g.freq(a),
                                {g.label(b), in_degree[static_cast<std::size_t>(b)]}, g.freq(b));
        });
        ClusterProfile p;
        p.id = c;
        p.size = nodes.size();
        for (NodeId v : nodes) p.members.push_back({g.label(v), in_degree[static_cast<std::size_t>(v)]});
        p.top_k.assign(p.members.begin(), p.members.begin() + static_cast<std::ptrdiff_t>(std::min(k, p.size)));
        auto name = partition.cluster_names.find(c);
        p.name = name != partition.cluster_names.end() ? name->second : p.members.front().keyword;
        out.push_back(std::move(p));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ClusterProfile& a, const ClusterProfile& b) { return a.size > b.size; });
    return out;
}

SliceClusters cluster_slice(const WeightedGraph& slice_graph, std::string label, std::size_t profile_k) {
    SliceClusters out;
    out.label = std::move(label);
    out.component = largest_component(slice_graph);
    out.partition = name_clusters(out.component, fast_greedy(out.component));
    out.profiles = cluster_profiles(out.component, out.partition, profile_k);
    for (NodeId v = 0; v < slice_graph.node_count(); ++v) {
        if (!out.component.find(slice_graph.label(v))) out.unclustered.push_back(slice_graph.label(v));
    }
    std::sort(out.unclustered.begin(), out.unclustered.end());
    return out;
}

std::map<std::string, SliceClusters> temporal_clusters(const Corpus& corpus, const std::vector<int>& years,
                                                       std::size_t profile_k, std::size_t threads) {
    std::vector<SliceClusters> results(years.size());
    parallel_for(years.size(), threads, [&](std::size_t i) {
        const auto slice = SliceSpec::year(years[i]);
        results[i] = cluster_slice(build_kcn(corpus, slice), slice.label, profile_k);
    });
    std::map<std::string, SliceClusters> out;
    for (auto& r : results) {
        auto label = r.label;
        out.emplace(std::move(label), std::move(r));
    }
    return out;
}

}  // namespace kcn
