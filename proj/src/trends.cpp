#include "kcn/trends.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_set>

#include "kcn/error.hpp"
#include "kcn/parallel.hpp"

namespace kcn {
namespace {

constexpr std::size_t kSourceBlock = 32;

bool same_length(double a, double b) {
    return std::abs(a - b) <= kPathLengthTolerance * std::max(std::abs(a), std::abs(b));
}

// Single-source dependency accumulation; adds delta(v) into `acc`.
void accumulate_from(const WeightedGraph& g, NodeId source, DistanceMode mode, Eigen::VectorXd& acc) {
    const auto n = static_cast<std::size_t>(g.node_count());
    std::vector<double> dist(n, -1.0);
    std::vector<double> sigma(n, 0.0);
    std::vector<double> delta(n, 0.0);
    std::vector<bool> settled(n, false);
    std::vector<std::vector<NodeId>> preds(n);
    std::vector<NodeId> order;

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(source)] = 0.0;
    sigma[static_cast<std::size_t>(source)] = 1.0;
    queue.emplace(0.0, source);

    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        const auto vi = static_cast<std::size_t>(v);
        if (settled[vi] || d != dist[vi]) continue;
        settled[vi] = true;
        order.push_back(v);
        g.for_each_neighbor(v, [&](NodeId u, double w) {
            const auto ui = static_cast<std::size_t>(u);
            if (settled[ui]) return;
            const double alt = d + (mode == DistanceMode::inverse_weight ? 1.0 / w : w);
            if (dist[ui] < 0.0 || (alt < dist[ui] && !same_length(alt, dist[ui]))) {
                dist[ui] = alt;
                sigma[ui] = sigma[vi];
                preds[ui].assign(1, v);
                queue.emplace(alt, u);
            } else if (same_length(alt, dist[ui])) {
                sigma[ui] += sigma[vi];
                preds[ui].push_back(v);
            }
        });
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto wi = static_cast<std::size_t>(*it);
        for (NodeId v : preds[wi]) {
            const auto vi = static_cast<std::size_t>(v);
            delta[vi] += sigma[vi] / sigma[wi] * (1.0 + delta[wi]);
        }
        if (*it != source) acc(*it) += delta[wi];
    }
}

}  // namespace

Eigen::VectorXd weighted_betweenness(const WeightedGraph& g, DistanceMode mode, std::size_t threads) {
    const NodeId n = g.node_count();
    const std::size_t blocks = (static_cast<std::size_t>(n) + kSourceBlock - 1) / kSourceBlock;
    std::vector<Eigen::VectorXd> partial(blocks, Eigen::VectorXd::Zero(n));
    parallel_for(blocks, threads, [&](std::size_t b) {
        const auto first = static_cast<NodeId>(b * kSourceBlock);
        const NodeId last = std::min<NodeId>(n, first + static_cast<NodeId>(kSourceBlock));
        for (NodeId s = first; s < last; ++s) accumulate_from(g, s, mode, partial[b]);
    });
    Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
    for (const auto& p : partial) total += p;
    return total / 2.0;
}

CentralityTable top_k_table(const WeightedGraph& g, const Eigen::VectorXd& values, std::size_t k, std::string label) {
    if (k == 0) throw Error("top_k_table: k must be at least 1");
    if (values.size() != g.node_count()) throw Error("top_k_table: one value per node required");
    CentralityTable table{std::move(label), k, {}};
    for (NodeId v = 0; v < g.node_count(); ++v) table.rows.push_back({g.label(v), values(v)});
    std::sort(table.rows.begin(), table.rows.end(), [](const CentralityRow& a, const CentralityRow& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.keyword < b.keyword;
    });
    if (table.rows.size() > k) table.rows.resize(k);
    return table;
}

CentralityTable top_k_table(const WeightedGraph& g, std::size_t k, std::string label, DistanceMode mode,
                            std::size_t threads) {
    return top_k_table(g, weighted_betweenness(g, mode, threads), k, std::move(label));
}

std::vector<EmergingKeyword> detect_emerging(const std::vector<CentralityTable>& tables) {
    if (tables.size() < 2) throw Error("detect_emerging: need at least two tables");
    for (const auto& t : tables) {
        if (t.k != tables.front().k) {
            throw Error("detect_emerging: table \"" + t.label + "\" has k=" + std::to_string(t.k) +
                        ", expected " + std::to_string(tables.front().k));
        }
    }

    std::unordered_set<std::string> seen;
    for (const auto& row : tables.front().rows) seen.insert(row.keyword);

    std::vector<EmergingKeyword> out;
    for (std::size_t t = 1; t < tables.size(); ++t) {
        std::vector<EmergingKeyword> fresh;
        for (const auto& row : tables[t].rows) {
            if (!seen.contains(row.keyword)) fresh.push_back({row.keyword, tables[t].label, row.value});
        }
        std::sort(fresh.begin(), fresh.end(), [](const EmergingKeyword& a, const EmergingKeyword& b) {
            if (a.value != b.value) return a.value > b.value;
            return a.keyword < b.keyword;
        });
        for (const auto& row : tables[t].rows) seen.insert(row.keyword);
        out.insert(out.end(), fresh.begin(), fresh.end());
    }
    return out;
}

EgoView ego_network(const WeightedGraph& g, std::string_view ego, std::size_t j, AlterDegree by) {
    const NodeId center = g.index_of(ego);
    std::vector<NodeId> nodes{center};
    for (NodeId u : neighbors(g, center)) nodes.push_back(u);

    EgoView view;
    view.ego = std::string(ego);
    view.graph = induced_subgraph(g, nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        view.ego_degree.push_back(degree(view.graph, static_cast<NodeId>(i)));
        view.full_degree.push_back(degree(g, nodes[i]));
    }

    std::vector<std::size_t> ranked;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        ranked.push_back(i);
        view.alters.push_back(g.label(nodes[i]));
    }
    std::sort(view.alters.begin(), view.alters.end());

    const auto& deg = by == AlterDegree::ego_subgraph ? view.ego_degree : view.full_degree;
    std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        if (deg[a] != deg[b]) return deg[a] > deg[b];
        const double wa = view.graph.weight(0, static_cast<NodeId>(a));
        const double wb = view.graph.weight(0, static_cast<NodeId>(b));
        if (wa != wb) return wa > wb;
        return view.graph.label(static_cast<NodeId>(a)) < view.graph.label(static_cast<NodeId>(b));
    });
    for (std::size_t i = 0; i < ranked.size() && i < j; ++i) {
        view.labeled_alters.push_back(view.graph.label(static_cast<NodeId>(ranked[i])));
    }
    return view;
}

std::string ego_graphml(const EgoView& view) {
    const std::set<std::string> labeled(view.labeled_alters.begin(), view.labeled_alters.end());
    NodeAttribute is_labeled{"labeled", "boolean", {}};
    NodeAttribute is_ego{"ego", "boolean", {}};
    NodeAttribute ego_deg{"ego_degree", "int", {}};
    NodeAttribute full_deg{"full_degree", "int", {}};
    for (NodeId v = 0; v < view.graph.node_count(); ++v) {
        const auto i = static_cast<std::size_t>(v);
        is_labeled.values.emplace_back(labeled.contains(view.graph.label(v)) ? "true" : "false");
        is_ego.values.emplace_back(v == 0 ? "true" : "false");
        ego_deg.values.push_back(std::to_string(view.ego_degree[i]));
        full_deg.values.push_back(std::to_string(view.full_degree[i]));
    }
    return to_graphml(view.graph, {is_ego, is_labeled, ego_deg, full_deg});
}

std::vector<KeywordCount> frequency_table(const Corpus& corpus, std::size_t k) {
    std::map<std::string, std::size_t> counts;
    for (const auto& rec : corpus.records) {
        std::set<std::string> distinct(rec.keywords.begin(), rec.keywords.end());
        for (const auto& kw : distinct) ++counts[kw];
    }
    std::vector<KeywordCount> out;
    for (const auto& [kw, c] : counts) out.push_back({kw, c});
    std::stable_sort(out.begin(), out.end(),
                     [](const KeywordCount& a, const KeywordCount& b) { return a.articles > b.articles; });
    if (out.size() > k) out.resize(k);
    return out;
}

}  // namespace kcn
