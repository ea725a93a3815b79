#include "kcn/normalizer.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "kcn/error.hpp"
#include "kcn/parallel.hpp"
#include "strings.hpp"

namespace kcn {
namespace {

using ordered_json = nlohmann::ordered_json;

// UTF-8 encodings of hyphen-like code points folded to a space alongside '-':
// U+2010..U+2015, U+2212 (minus), U+FE63 and U+FF0D.
constexpr std::string_view kWideHyphens[] = {
    "\xE2\x80\x90", "\xE2\x80\x91", "\xE2\x80\x92", "\xE2\x80\x93", "\xE2\x80\x94",
    "\xE2\x80\x95", "\xE2\x88\x92", "\xEF\xB9\xA3", "\xEF\xBC\x8D",
};
constexpr std::string_view kNoBreakSpace = "\xC2\xA0";

const std::map<std::string, std::string, std::less<>>& irregular_plurals() {
    static const std::map<std::string, std::string, std::less<>> table{
        {"children", "child"},     {"data", "data"},           {"analyses", "analysis"},
        {"criteria", "criterion"}, {"media", "media"},         {"phenomena", "phenomenon"},
        {"indices", "index"},      {"matrices", "matrix"},     {"vertices", "vertex"},
        {"appendices", "appendix"}, {"curricula", "curriculum"}, {"stimuli", "stimulus"},
        {"crises", "crisis"},      {"caches", "cache"},        {"niches", "niche"},
        {"movies", "movie"},       {"cookies", "cookie"},      {"women", "woman"},
        {"men", "man"},            {"people", "people"},
    };
    return table;
}

bool ends_with(std::string_view s, std::string_view suffix) { return s.ends_with(suffix); }

std::string singularize_token(std::string_view tok, const std::set<std::string>& protected_tokens) {
    if (protected_tokens.contains(std::string(tok))) return std::string(tok);
    // "(xai)s" and the like: leave bracketed fragments alone.
    if (tok.find_first_of("()") != std::string_view::npos) return std::string(tok);
    const auto& irregular = irregular_plurals();
    if (auto it = irregular.find(tok); it != irregular.end()) return it->second;

    const std::size_t len = tok.size();
    auto drop = [&](std::size_t n) { return std::string(tok.substr(0, len - n)); };

    if (len > 4 && ends_with(tok, "ies")) return drop(3) + "y";
    if (len > 4 && (ends_with(tok, "yses") || ends_with(tok, "eses"))) return drop(2) + "is";
    if (len > 4 && ends_with(tok, "sses")) return drop(2);
    if (len > 3 && (ends_with(tok, "xes") || ends_with(tok, "ches") || ends_with(tok, "shes"))) {
        return drop(2);
    }
    if (len >= 4 && tok.back() == 's' && !ends_with(tok, "ss") && !ends_with(tok, "us") &&
        !ends_with(tok, "is")) {
        return drop(1);
    }
    return std::string(tok);
}

struct Parenthetical {
    std::string full;
    std::string short_form;
};

bool balanced(std::string_view s) {
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')' && --depth < 0) return false;
    }
    return depth == 0;
}

// Matches `<full> (<short>)` with no other parentheses.
std::optional<Parenthetical> split_parenthetical(std::string_view keyword) {
    if (keyword.empty() || keyword.back() != ')') return std::nullopt;
    const std::size_t open = keyword.find('(');
    if (open == std::string_view::npos || keyword.find('(', open + 1) != std::string_view::npos) {
        return std::nullopt;
    }
    if (keyword.find(')') != keyword.size() - 1) return std::nullopt;
    const auto full = detail::trim(keyword.substr(0, open));
    const auto inner = detail::trim(keyword.substr(open + 1, keyword.size() - open - 2));
    if (full.empty() || inner.empty()) return std::nullopt;
    return Parenthetical{std::string(full), std::string(inner)};
}

void audit(NormalizationLexicon& lex, std::string raw, std::string canonical, Rule rule,
           std::string warning = {}) {
    if (raw == canonical && warning.empty()) return;
    lex.audit.push_back({std::move(raw), std::move(canonical), rule, std::move(warning)});
}

// Drops repeated (raw, rule) entries, keeping the first.
void dedupe_audit(std::vector<AuditEntry>& entries) {
    std::set<std::pair<Rule, std::string>> seen;
    std::vector<AuditEntry> out;
    out.reserve(entries.size());
    for (auto& e : entries) {
        if (seen.emplace(e.rule, e.raw).second) out.push_back(std::move(e));
    }
    entries = std::move(out);
}

// Abbreviation lookup and singularization, repeated until the result is not
// an abbreviation key. `record` receives every rewrite.
template <typename Record>
std::string resolve_form(std::string s, const NormalizationLexicon& lex, Record&& record) {
    std::unordered_set<std::string> seen;
    bool first = true;
    while (first || (lex.abbrev_map.contains(s) && seen.insert(s).second)) {
        first = false;
        std::string expanded = apply_abbrev_map(s, lex);
        if (expanded != s) record(s, expanded, Rule::abbrev);
        std::string single = singularize(expanded, lex.protected_tokens);
        if (single != expanded) record(expanded, single, Rule::singular);
        s = std::move(single);
    }
    return s;
}

std::vector<std::string> read_table(const std::filesystem::path& path, std::size_t columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open lexicon file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<std::string> cells;
    std::size_t line_no = 0;
    for (auto line : detail::lines(text)) {
        ++line_no;
        if (detail::trim(line).empty() || detail::trim(line).front() == '#') continue;
        auto parts = detail::split(line, '\t');
        if (parts.size() != columns) {
            throw ParseError(path.string(), line_no,
                             "expected " + std::to_string(columns) + " tab-separated columns");
        }
        for (auto p : parts) cells.emplace_back(detail::trim(p));
    }
    return cells;
}

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

bool meets_threshold(std::size_t lcs, std::size_t total, double threshold) {
    if (total == 0) return true;
    return 200.0 * static_cast<double>(lcs) >= threshold * static_cast<double>(total) - 1e-9;
}

struct Candidate {
    std::size_t a;
    std::size_t b;
    double score;
};

}  // namespace

std::string_view to_string(Rule rule) {
    switch (rule) {
        case Rule::fold: return "fold";
        case Rule::singular: return "singular";
        case Rule::paren: return "paren";
        case Rule::abbrev: return "abbrev";
        case Rule::merge: return "merge";
    }
    return "unknown";
}

Rule parse_rule(std::string_view name) {
    for (Rule r : {Rule::fold, Rule::singular, Rule::paren, Rule::abbrev, Rule::merge}) {
        if (to_string(r) == name) return r;
    }
    throw Error("unknown audit rule \"" + std::string(name) + "\"");
}

bool NormalizationLexicon::register_abbreviation(const std::string& short_form,
                                                 const std::string& full_form) {
    if (short_form.empty() || full_form.empty() || short_form == full_form) return false;
    if (abbrev_map.contains(short_form)) return false;
    std::string resolved = full_form;
    if (auto it = abbrev_map.find(full_form); it != abbrev_map.end()) resolved = it->second;
    if (resolved == short_form) return false;
    for (auto& [key, value] : abbrev_map) {
        if (value == short_form) value = resolved;
    }
    abbrev_map.emplace(short_form, resolved);
    return true;
}

std::set<std::string> default_protected_tokens() {
    return {
        "aids",      "alias",      "analytics", "atlas",       "bias",        "canvas",
        "chaos",     "dynamics",   "economics", "ethics",      "ethos",       "gas",
        "genomics",  "gis",        "gps",       "graphics",    "informatics", "its",
        "kinematics", "lens",      "linguistics", "lms",       "logistics",   "mathematics",
        "mechanics", "news",       "physics",   "politics",    "pragmatics",  "robotics",
        "semantics", "series",     "ses",       "species",     "statistics",  "stem",
        "thermodynamics", "mooc",  "moocs",
    };
}

NormalizationLexicon default_lexicon() {
    NormalizationLexicon lex;
    lex.protected_tokens = default_protected_tokens();
    return lex;
}

void load_protected_tokens(const std::filesystem::path& path, NormalizationLexicon& lexicon) {
    std::set<std::string> tokens;
    for (auto& cell : read_table(path, 1)) tokens.insert(fold_case_hyphens(cell));
    lexicon.protected_tokens = std::move(tokens);
}

void load_abbreviations(const std::filesystem::path& path, NormalizationLexicon& lexicon) {
    const auto cells = read_table(path, 2);
    std::map<std::string, std::string> entries;
    for (std::size_t i = 0; i < cells.size(); i += 2) {
        auto short_form = fold_case_hyphens(cells[i]);
        auto full_form = fold_case_hyphens(cells[i + 1]);
        if (short_form == full_form) continue;
        auto [it, inserted] = entries.emplace(short_form, full_form);
        if (!inserted && it->second != full_form) {
            throw Error(path.string() + ": conflicting expansions for \"" + short_form + "\"");
        }
    }
    // Collapse chains; a cycle is a configuration error.
    for (auto& [key, value] : entries) {
        std::set<std::string> seen{key};
        while (entries.contains(value)) {
            if (!seen.insert(value).second) {
                throw Error(path.string() + ": abbreviation cycle through \"" + key + "\"");
            }
            value = entries.at(value);
        }
        if (value == key) throw Error(path.string() + ": abbreviation cycle through \"" + key + "\"");
    }
    for (auto& [key, value] : entries) lexicon.abbrev_map[key] = value;
}

void load_merge_rules(const std::filesystem::path& path, NormalizationLexicon& lexicon) {
    const auto cells = read_table(path, 3);
    for (std::size_t i = 0; i < cells.size(); i += 3) {
        MergeRule rule{cells[i], cells[i + 1], MergeDirective::allow};
        if (cells[i + 2] == "deny") {
            rule.directive = MergeDirective::deny;
        } else if (cells[i + 2] != "allow") {
            throw Error(path.string() + ": directive must be allow or deny, got \"" + cells[i + 2] + "\"");
        }
        lexicon.merge_rules.push_back(std::move(rule));
    }
}

std::string fold_case_hyphens(std::string_view raw) {
    std::string spaced;
    spaced.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
        const std::string_view rest = raw.substr(i);
        bool matched = false;
        for (auto h : kWideHyphens) {
            if (rest.starts_with(h)) {
                spaced.push_back(' ');
                i += h.size();
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (rest.starts_with(kNoBreakSpace)) {
            spaced.push_back(' ');
            i += kNoBreakSpace.size();
            continue;
        }
        char c = raw[i++];
        if (c == '-') c = ' ';
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        spaced.push_back(c);
    }

    std::string out;
    out.reserve(spaced.size());
    bool pending_space = false;
    for (char c : spaced) {
        if (detail::is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    if (out.empty()) throw Error("keyword \"" + std::string(raw) + "\" is empty after folding");
    return out;
}

std::string singularize(std::string_view keyword, const std::set<std::string>& protected_tokens) {
    const std::size_t split = keyword.rfind(' ');
    if (split == std::string_view::npos) return singularize_token(keyword, protected_tokens);
    return std::string(keyword.substr(0, split + 1)) +
           singularize_token(keyword.substr(split + 1), protected_tokens);
}

std::string expand_parenthetical(std::string_view keyword, NormalizationLexicon& lexicon) {
    if (!balanced(keyword)) {
        audit(lexicon, std::string(keyword), std::string(keyword), Rule::paren, "unbalanced parentheses");
        return std::string(keyword);
    }
    auto parts = split_parenthetical(keyword);
    if (!parts) return std::string(keyword);
    lexicon.register_abbreviation(parts->short_form, parts->full);
    audit(lexicon, std::string(keyword), parts->full, Rule::paren);
    return parts->full;
}

std::string apply_abbrev_map(std::string_view keyword, const NormalizationLexicon& lexicon) {
    auto it = lexicon.abbrev_map.find(std::string(keyword));
    return it == lexicon.abbrev_map.end() ? std::string(keyword) : it->second;
}

std::optional<std::string> prenormalize(std::string_view raw, const NormalizationLexicon& lexicon) {
    std::string s;
    try {
        s = fold_case_hyphens(raw);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (balanced(s)) {
        if (auto parts = split_parenthetical(s)) s = parts->full;
    }
    return resolve_form(std::move(s), lexicon, [](const auto&, const auto&, Rule) {});
}

NormalizationLexicon merge_synonyms(const std::map<std::string, std::size_t>& keyword_counts,
                                    NormalizationLexicon lexicon) {
    const double threshold = lexicon.synonym_threshold;
    if (!(threshold >= 0.0 && threshold <= 100.0)) {
        throw Error("synonym threshold must lie in [0, 100]");
    }

    std::vector<std::string> keys;
    std::vector<std::size_t> counts;
    for (const auto& [k, c] : keyword_counts) {
        keys.push_back(k);
        counts.push_back(c);
    }
    const std::size_t n = keys.size();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(keys[i], i);

    std::vector<std::pair<std::size_t, std::size_t>> denied;
    std::vector<Candidate> allowed;
    std::map<std::size_t, std::vector<std::size_t>> forced_canonical_of;  // variant -> canonicals
    for (const auto& rule : lexicon.merge_rules) {
        auto a = index.find(rule.variant);
        auto b = index.find(rule.canonical);
        if (a == index.end() || b == index.end() || a->second == b->second) continue;
        auto pair = std::minmax(a->second, b->second);
        if (rule.directive == MergeDirective::deny) {
            denied.emplace_back(pair.first, pair.second);
        } else {
            allowed.push_back({pair.first, pair.second, 100.0});
            forced_canonical_of[a->second].push_back(b->second);
        }
    }

    // Keys ordered by length; the threshold bounds how far apart two lengths
    // can be: 200*min/(la+lb) >= T.
    std::vector<std::size_t> by_length(n);
    std::iota(by_length.begin(), by_length.end(), 0);
    std::stable_sort(by_length.begin(), by_length.end(),
                     [&](std::size_t x, std::size_t y) { return keys[x].size() < keys[y].size(); });

    std::vector<std::vector<Candidate>> per_key(n);
    parallel_for(n, lexicon.threads, [&](std::size_t p) {
        const std::string& a = keys[by_length[p]];
        for (std::size_t q = p + 1; q < n; ++q) {
            const std::string& b = keys[by_length[q]];
            if (200.0 * static_cast<double>(a.size()) <
                threshold * static_cast<double>(a.size() + b.size()) - 1e-9) {
                break;
            }
            if (!lexicon.exhaustive_pairing) {
                const bool same_first = !a.empty() && !b.empty() && a.front() == b.front();
                if (!same_first && b.size() - a.size() > 3) continue;
            }
            const std::size_t lcs = lcs_length(a, b);
            if (!meets_threshold(lcs, a.size() + b.size(), threshold)) continue;
            auto pair = std::minmax(by_length[p], by_length[q]);
            per_key[p].push_back({pair.first, pair.second, similarity(a, b).value});
        }
    });

    std::vector<Candidate> scored;
    for (auto& v : per_key) scored.insert(scored.end(), v.begin(), v.end());
    auto pair_order = [](const Candidate& x, const Candidate& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    };
    std::sort(allowed.begin(), allowed.end(), pair_order);
    std::sort(scored.begin(), scored.end(), [&](const Candidate& x, const Candidate& y) {
        if (x.score != y.score) return x.score > y.score;
        return pair_order(x, y);
    });

    UnionFind groups(n);
    auto try_unite = [&](const Candidate& c) {
        const std::size_t ra = groups.find(c.a);
        const std::size_t rb = groups.find(c.b);
        if (ra == rb) return;
        for (auto [x, y] : denied) {
            const std::size_t rx = groups.find(x);
            const std::size_t ry = groups.find(y);
            if ((rx == ra && ry == rb) || (rx == rb && ry == ra)) return;
        }
        groups.unite(ra, rb);
    };
    for (const auto& c : allowed) try_unite(c);
    for (const auto& c : scored) try_unite(c);

    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) members[groups.find(i)].push_back(i);

    auto better = [&](std::size_t x, std::size_t y) {
        if (counts[x] != counts[y]) return counts[x] > counts[y];
        if (keys[x].size() != keys[y].size()) return keys[x].size() < keys[y].size();
        return keys[x] < keys[y];
    };

    lexicon.merge_map.clear();
    for (const auto& [root, group] : members) {
        if (group.size() < 2) continue;
        std::vector<std::size_t> forced;
        for (std::size_t v : group) {
            auto it = forced_canonical_of.find(v);
            if (it == forced_canonical_of.end()) continue;
            for (std::size_t c : it->second) {
                if (groups.find(c) == root) forced.push_back(c);
            }
        }
        const auto& pool = forced.empty() ? group : forced;
        const std::size_t canonical = *std::min_element(pool.begin(), pool.end(), better);
        for (std::size_t v : group) {
            if (v == canonical) continue;
            lexicon.merge_map[keys[v]] = keys[canonical];
            audit(lexicon, keys[v], keys[canonical], Rule::merge);
        }
    }
    return lexicon;
}

NormalizeResult normalize_corpus(const Corpus& corpus, NormalizationLexicon lexicon) {
    std::set<std::string> raws;
    for (const auto& rec : corpus.records) raws.insert(rec.keywords.begin(), rec.keywords.end());

    // Pass 1: fold and collect parenthetical abbreviations corpus-wide.
    std::map<std::string, std::optional<std::string>> expanded;
    for (const auto& raw : raws) {
        std::string folded;
        try {
            folded = fold_case_hyphens(raw);
        } catch (const Error&) {
            audit(lexicon, raw, "", Rule::fold, "empty after folding");
            expanded.emplace(raw, std::nullopt);
            continue;
        }
        audit(lexicon, raw, folded, Rule::fold);
        expanded.emplace(raw, expand_parenthetical(folded, lexicon));
    }

    // Pass 2: abbreviations and singular forms.
    auto record = [&](const std::string& from, const std::string& to, Rule rule) {
        audit(lexicon, from, to, rule);
    };
    std::map<std::string, std::optional<std::string>> premerge;
    for (const auto& [raw, form] : expanded) {
        premerge.emplace(raw, form ? std::optional(resolve_form(*form, lexicon, record)) : std::nullopt);
    }

    auto rewrite = [](const std::vector<std::string>& keywords, auto&& map_one) {
        std::vector<std::string> out;
        std::unordered_set<std::string> seen;
        for (const auto& kw : keywords) {
            std::optional<std::string> mapped = map_one(kw);
            if (mapped && seen.insert(*mapped).second) out.push_back(std::move(*mapped));
        }
        return out;
    };

    Corpus staged = corpus;
    std::map<std::string, std::size_t> counts;
    for (auto& rec : staged.records) {
        rec.keywords = rewrite(rec.keywords, [&](const std::string& kw) { return premerge.at(kw); });
        for (const auto& kw : rec.keywords) ++counts[kw];
    }

    // Pass 3: synonym merge over the pre-merge vocabulary. User rules are
    // brought through the same steps so they match corpus forms.
    for (auto& rule : lexicon.merge_rules) {
        auto v = prenormalize(rule.variant, lexicon);
        auto c = prenormalize(rule.canonical, lexicon);
        if (v) rule.variant = *v;
        if (c) rule.canonical = *c;
    }
    lexicon = merge_synonyms(counts, std::move(lexicon));

    for (auto& rec : staged.records) {
        rec.keywords = rewrite(rec.keywords, [&](const std::string& kw) -> std::optional<std::string> {
            auto it = lexicon.merge_map.find(kw);
            return it == lexicon.merge_map.end() ? kw : it->second;
        });
    }
    dedupe_audit(lexicon.audit);
    return {std::move(staged), std::move(lexicon)};
}

Corpus replay_audit(const Corpus& raw, const std::vector<AuditEntry>& entries) {
    std::map<Rule, std::unordered_map<std::string, std::string>> step;
    std::unordered_set<std::string> dropped;
    for (const auto& e : entries) {
        if (e.rule == Rule::fold && e.canonical.empty()) {
            dropped.insert(e.raw);
            continue;
        }
        step[e.rule].emplace(e.raw, e.canonical);
    }
    auto apply = [&](Rule rule, const std::string& s) {
        const auto& m = step[rule];
        auto it = m.find(s);
        return it == m.end() ? s : it->second;
    };

    Corpus out = raw;
    for (auto& rec : out.records) {
        std::vector<std::string> keywords;
        std::unordered_set<std::string> seen;
        for (const auto& kw : rec.keywords) {
            if (dropped.contains(kw)) continue;
            std::string s = apply(Rule::paren, apply(Rule::fold, kw));
            std::unordered_set<std::string> visited;
            bool first = true;
            while (first || (step[Rule::abbrev].contains(s) && visited.insert(s).second)) {
                first = false;
                s = apply(Rule::singular, apply(Rule::abbrev, s));
            }
            s = apply(Rule::merge, s);
            if (seen.insert(s).second) keywords.push_back(std::move(s));
        }
        rec.keywords = std::move(keywords);
    }
    return out;
}

std::string audit_jsonl(const std::vector<AuditEntry>& entries) {
    std::string out;
    for (const auto& e : entries) {
        ordered_json j{{"raw", e.raw}, {"canonical", e.canonical}, {"rule", std::string(to_string(e.rule))}};
        if (!e.warning.empty()) j["warning"] = e.warning;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<AuditEntry> parse_audit_jsonl(std::string_view text) {
    std::vector<AuditEntry> out;
    std::size_t line_no = 0;
    for (auto line : detail::lines(text)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            AuditEntry e{j.at("raw").get<std::string>(), j.at("canonical").get<std::string>(),
                         parse_rule(j.at("rule").get<std::string>()), j.value("warning", std::string{})};
            out.push_back(std::move(e));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("audit.jsonl", line_no, e.what());
        }
    }
    return out;
}

}  // namespace kcn
