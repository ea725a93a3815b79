#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kcn/graph.hpp"

namespace kcn {

/// One row of the structural table.
struct StructuralSummary {
    std::size_t n = 0;         ///< nodes
    std::size_t m = 0;         ///< edges
    double d = 0.0;            ///< density 2m/(n(n-1))
    double c = 0.0;            ///< mean weighted (Barrat) local clustering
    double c_unweighted = 0.0; ///< mean unweighted local clustering
    double z = 0.0;            ///< mean degree 2m/n
    double s = 0.0;            ///< mean strength
    std::size_t lc = 0;        ///< largest component size
    std::optional<double> r;   ///< degree assortativity; nullopt when undefined
};

double density(std::size_t n, std::size_t m);
double average_degree(std::size_t n, std::size_t m);

/// Newman degree assortativity: Pearson correlation of endpoint degrees over
/// both orientations of every edge. nullopt when the degrees have no
/// variance (or the graph has no edge).
std::optional<double> degree_assortativity(const WeightedGraph& g);

/// Clustering averages run over all n nodes, nodes with k < 2 counting 0.
StructuralSummary summarize(const WeightedGraph& g);

/// Barrat weighted clustering:
///   cw(v) = 1/(s_v (k_v - 1)) * sum_{j != h} (w_vj + w_vh)/2 * a_vj a_vh a_jh
/// over ordered neighbor pairs; 0 when k_v < 2.
double weighted_clustering(const WeightedGraph& g, NodeId v);

/// Unweighted local clustering coefficient; 0 when k_v < 2.
double local_clustering(const WeightedGraph& g, NodeId v);

/// knn_w(v) = (1/s_v) sum_j w_vj k_j. Throws for an isolated node.
double weighted_annd(const WeightedGraph& g, NodeId v);

/// knn_w(v) / k_v; values above 1 mean v attaches to higher-degree nodes.
double weighted_annd_ratio(const WeightedGraph& g, NodeId v);

struct NodeProfile {
    std::string node;
    std::size_t k = 0;
    double cw = 0.0;
    double knn_w = 0.0;
    double knn_ratio = 0.0;
};

struct DegreeBin {
    std::size_t k = 0;
    std::size_t count = 0;
    double mean_cw = 0.0;
    double mean_knn_ratio = 0.0;
};

struct NodeProfiles {
    std::vector<NodeProfile> nodes;  ///< nodes with k >= 1, in index order
    std::vector<DegreeBin> bins;     ///< ascending k
};

NodeProfiles profile_nodes(const WeightedGraph& g);

/// Sorted distinct values with P(X >= x). Throws on empty input.
std::vector<std::pair<double, double>> ccdf(std::vector<double> values);

enum class PowerLawModel { continuous, discrete };

struct PowerLawFit {
    double alpha = 0.0;
    double xmin = 0.0;
    double ks_stat = 0.0;
    std::size_t n_tail = 0;
    double sigma = 0.0;  ///< standard error (alpha - 1)/sqrt(n_tail)
};

/// Maximum-likelihood power-law fit with the lower cutoff chosen to
/// minimize the Kolmogorov-Smirnov distance between the empirical and
/// fitted tail distributions. Every distinct observed value leaving at
/// least 10 tail points is a candidate cutoff.
///
/// The discrete model uses the (x - 1/2) continuous approximation for both
/// the estimator and the fitted tail.
PowerLawFit fit_power_law(const std::vector<double>& values,
                          PowerLawModel model = PowerLawModel::continuous);

inline constexpr std::size_t kMinTailPoints = 10;

}  // namespace kcn
