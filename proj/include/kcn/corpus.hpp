#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kcn {

/// One publication as read from the input file. Keyword strings are kept
/// verbatim until normalization.
struct ArticleRecord {
    std::string id;
    std::string venue;
    int year = 0;
    std::vector<std::string> keywords;

    bool operator==(const ArticleRecord&) const = default;
};

struct Corpus {
    std::vector<ArticleRecord> records;
    std::vector<std::string> sources;
    std::chrono::system_clock::time_point loaded_at{};
};

enum class InputFormat { jsonl, csv };

InputFormat parse_input_format(std::string_view name);

/// Reads a corpus file. Throws `Error` on IO failure or duplicate id and
/// `ParseError` (with line number) on a malformed row.
Corpus load_corpus(const std::filesystem::path& path, InputFormat format);

/// Same as `load_corpus` over in-memory text; `source` names it in errors.
Corpus parse_corpus(std::string_view text, InputFormat format,
                    const std::string& source = "<memory>");

/// Moves `other`'s records into `into`, rejecting ids already present.
void append_corpus(Corpus& into, Corpus&& other);

enum class ExclusionReason { no_keywords, too_many_keywords };

std::string_view to_string(ExclusionReason reason);

struct Exclusion {
    std::string id;
    ExclusionReason reason;
};

struct FilterReport {
    std::vector<Exclusion> excluded;
    std::size_t retained = 0;
};

struct FilterResult {
    Corpus corpus;
    FilterReport report;
};

/// Keeps records with 1..=max_keywords distinct keywords. Exact duplicate
/// keywords inside a record are collapsed (first occurrence kept) before
/// counting; case is significant here.
FilterResult filter_eligible(const Corpus& corpus, std::size_t max_keywords = 10);

/// `{"excluded":[{"id":...,"reason":...}],"retained":N}`
std::string filter_report_json(const FilterReport& report);

}  // namespace kcn
