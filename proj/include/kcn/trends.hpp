#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kcn/corpus.hpp"
#include "kcn/graph.hpp"

namespace kcn {

/// How co-occurrence weights become path lengths.
enum class DistanceMode {
    inverse_weight,  ///< length = 1/w: frequent co-occurrence is close
    weight,          ///< length = w (sensitivity check)
};

/// Relative tolerance under which two path lengths count as equal.
inline constexpr double kPathLengthTolerance = 1e-10;

/// Unnormalized betweenness over weighted shortest paths (Brandes), each
/// unordered pair counted once. Pairs in different components contribute 0.
/// Sources are processed in fixed blocks so results do not depend on the
/// thread count.
Eigen::VectorXd weighted_betweenness(const WeightedGraph& g, DistanceMode mode = DistanceMode::inverse_weight,
                                     std::size_t threads = 1);

struct CentralityRow {
    std::string keyword;
    double value = 0.0;
};

struct CentralityTable {
    std::string label;
    std::size_t k = 0;
    std::vector<CentralityRow> rows;  ///< descending value, ties by keyword
};

/// Top-k rows from precomputed values.
CentralityTable top_k_table(const WeightedGraph& g, const Eigen::VectorXd& values, std::size_t k, std::string label);

/// Computes betweenness and ranks it.
CentralityTable top_k_table(const WeightedGraph& g, std::size_t k, std::string label,
                            DistanceMode mode = DistanceMode::inverse_weight, std::size_t threads = 1);

struct EmergingKeyword {
    std::string keyword;
    std::string first_slice;
    double value = 0.0;
};

/// Keywords that enter some table after the first while absent from every
/// earlier one. Tables must be chronological and share k.
std::vector<EmergingKeyword> detect_emerging(const std::vector<CentralityTable>& tables);

enum class AlterDegree {
    ego_subgraph,  ///< degree inside the ego network
    full_graph,    ///< degree in the parent graph
};

struct EgoView {
    std::string ego;
    std::vector<std::string> alters;          ///< sorted
    WeightedGraph graph;                      ///< induced on ego + alters, ego first
    std::vector<std::string> labeled_alters;  ///< ranked top-j alters
    std::vector<std::size_t> ego_degree;      ///< per node of `graph`
    std::vector<std::size_t> full_degree;     ///< per node of `graph`
};

/// Ego network of `ego`. Alters are ranked by degree (measured as `by`),
/// then edge weight to the ego, then label. Throws for an unknown ego.
EgoView ego_network(const WeightedGraph& g, std::string_view ego, std::size_t j,
                    AlterDegree by = AlterDegree::ego_subgraph);

/// GraphML with `labeled`, `ego_degree` and `full_degree` node attributes.
std::string ego_graphml(const EgoView& view);

struct KeywordCount {
    std::string keyword;
    std::size_t articles = 0;
};

/// Keywords by number of articles (descending, ties by keyword), top k.
std::vector<KeywordCount> frequency_table(const Corpus& corpus, std::size_t k);

}  // namespace kcn
