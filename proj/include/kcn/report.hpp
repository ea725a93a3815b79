#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kcn/corpus.hpp"
#include "kcn/graph.hpp"
#include "kcn/macro.hpp"
#include "kcn/normalizer.hpp"
#include "kcn/trends.hpp"

namespace kcn {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Stage { macro, meso, micro };

Stage parse_stage(std::string_view name);
std::string_view to_string(Stage stage);

struct InputSpec {
    std::filesystem::path path;
    InputFormat format = InputFormat::jsonl;
};

struct LexiconPaths {
    std::optional<std::filesystem::path> protected_tokens;
    std::optional<std::filesystem::path> abbreviations;
    std::optional<std::filesystem::path> merges;
};

struct Thresholds {
    std::size_t max_keywords = 10;
    double synonym_threshold = 90.0;
    std::size_t top_k = 20;
    std::size_t profile_k = 10;
};

/// Everything a pipeline run needs. Relative paths in a config file are
/// resolved against the file's directory.
struct RunConfig {
    std::vector<InputSpec> inputs;
    LexiconPaths lexicon;
    std::vector<SliceSpec> slices;
    Thresholds thresholds;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;

    bool exhaustive_pairing = false;
    DistanceMode distance = DistanceMode::inverse_weight;
    bool power_law_on_degree = false;
    PowerLawModel power_law_model = PowerLawModel::continuous;
    AlterDegree alter_degree = AlterDegree::ego_subgraph;

    /// Stages to emit; empty means the full bundle.
    std::set<Stage> only;
    std::size_t threads = 1;

    /// Config as written (paths unresolved, output_dir omitted); echoed in
    /// the manifest.
    std::string echo;
};

/// Parses a JSON config file. Throws `Error` on unknown keys, bad values,
/// overlapping year slices or non-positive thresholds.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir);

/// Loads inputs, filters, normalizes. Shared by `run` and `export`.
struct PreparedCorpus {
    Corpus raw;
    FilterReport filter;
    NormalizeResult normalized;
};

PreparedCorpus prepare_corpus(const RunConfig& config);

/// Runs the full pipeline and writes the report bundle to
/// `config.output_dir`. Output is staged and moved into place only on
/// success; on failure nothing is left behind and the thrown `Error`
/// message starts with the failing stage in brackets.
void run_pipeline(const RunConfig& config);

/// Bundle-relative file name for a keyword's ego network.
std::string ego_file_name(std::string_view keyword);

/// Text report on one keyword from an existing bundle. An unknown keyword
/// yields the five nearest canonical keywords instead; `found` is set
/// accordingly.
struct InspectReport {
    bool found = false;
    std::string text;
};

InspectReport inspect_keyword(std::string_view keyword, const std::filesystem::path& bundle);

std::string sha256_hex(std::string_view bytes);

}  // namespace kcn
