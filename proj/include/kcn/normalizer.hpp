#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kcn/corpus.hpp"

namespace kcn {

/// Which rewrite produced an audit entry.
enum class Rule { fold, singular, paren, abbrev, merge };

std::string_view to_string(Rule rule);
Rule parse_rule(std::string_view name);

struct AuditEntry {
    std::string raw;
    std::string canonical;
    Rule rule;
    std::string warning;  // empty unless the step could not be applied cleanly

    bool operator==(const AuditEntry&) const = default;
};

enum class MergeDirective { allow, deny };

/// One line of merges.tsv. For `allow`, `canonical` is forced as the group's
/// canonical form when it takes part in the group.
struct MergeRule {
    std::string variant;
    std::string canonical;
    MergeDirective directive;
};

/// Rewrite state threaded through the normalization pipeline.
///
/// Invariants: `abbrev_map` values are never keys (no chains), canonical
/// forms are never `merge_map` keys, and 0 <= synonym_threshold <= 100.
struct NormalizationLexicon {
    std::set<std::string> protected_tokens;
    std::map<std::string, std::string> abbrev_map;
    double synonym_threshold = 90.0;
    std::vector<MergeRule> merge_rules;
    std::map<std::string, std::string> merge_map;
    std::vector<AuditEntry> audit;
    /// Compare every keyword pair instead of blocking buckets.
    bool exhaustive_pairing = false;
    std::size_t threads = 1;

    /// Adds short -> full while keeping the map chain-free: an existing key
    /// wins, `full` is resolved through the map first, and entries that
    /// pointed at `short_form` are redirected. Returns false when nothing
    /// was added.
    bool register_abbreviation(const std::string& short_form, const std::string& full_form);
};

/// Tokens exempt from singularization when no protected list is supplied.
std::set<std::string> default_protected_tokens();

/// Lexicon with the default protected tokens and threshold 90.
NormalizationLexicon default_lexicon();

/// Lexicon files. Missing optional paths leave the corresponding defaults.
/// protected.tsv: one token per line. abbrev.tsv: `short<TAB>full`.
/// merges.tsv: `variant<TAB>canonical<TAB>allow|deny`. Blank lines and lines
/// starting with '#' are ignored.
void load_protected_tokens(const std::filesystem::path& path, NormalizationLexicon& lexicon);
void load_abbreviations(const std::filesystem::path& path, NormalizationLexicon& lexicon);
void load_merge_rules(const std::filesystem::path& path, NormalizationLexicon& lexicon);

/// Lowercases, turns hyphens into spaces, collapses whitespace runs and
/// trims. Throws `Error` when nothing is left.
std::string fold_case_hyphens(std::string_view raw);

/// Singularizes the final whitespace-delimited token only.
std::string singularize(std::string_view keyword, const std::set<std::string>& protected_tokens);

/// `<full> (<short>)` -> `<full>`, registering short -> full. Unbalanced
/// parentheses leave the keyword unchanged and add an audit warning.
std::string expand_parenthetical(std::string_view keyword, NormalizationLexicon& lexicon);

/// Whole-keyword abbreviation lookup; identity on a miss.
std::string apply_abbrev_map(std::string_view keyword, const NormalizationLexicon& lexicon);

struct SimilarityScore {
    double value = 0.0;

    auto operator<=>(const SimilarityScore&) const = default;
};

/// Normalized indel similarity: 100 * (1 - D/(|a|+|b|)) where D counts the
/// insertions and deletions needed to turn a into b (= |a|+|b|-2*LCS).
SimilarityScore similarity(std::string_view a, std::string_view b);

/// Longest common subsequence length (bytes).
std::size_t lcs_length(std::string_view a, std::string_view b);

/// Groups keywords scoring >= threshold (plus allow-listed pairs, minus
/// deny-listed ones) and fills `merge_map` with variant -> canonical.
/// Canonical form: most frequent member, then shorter, then lexicographic.
NormalizationLexicon merge_synonyms(const std::map<std::string, std::size_t>& keyword_counts,
                                    NormalizationLexicon lexicon);

/// Steps 1-3 plus singularization for one keyword, without touching the
/// lexicon. Returns nullopt when the keyword folds to nothing.
std::optional<std::string> prenormalize(std::string_view raw, const NormalizationLexicon& lexicon);

struct NormalizeResult {
    Corpus corpus;
    NormalizationLexicon lexicon;
};

/// fold -> parenthetical -> abbreviation -> singular -> synonym merge over
/// every keyword, collapsing duplicates the rewrites create.
NormalizeResult normalize_corpus(const Corpus& corpus, NormalizationLexicon lexicon);

/// Rebuilds the normalized corpus from raw records and an audit trail.
Corpus replay_audit(const Corpus& raw, const std::vector<AuditEntry>& audit);

std::string audit_jsonl(const std::vector<AuditEntry>& audit);
std::vector<AuditEntry> parse_audit_jsonl(std::string_view text);

}  // namespace kcn
