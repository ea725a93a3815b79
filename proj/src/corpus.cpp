#include "kcn/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "kcn/error.hpp"
#include "strings.hpp"

namespace kcn {
namespace {

using json = nlohmann::json;

void check_unique(const Corpus& corpus) {
    std::unordered_set<std::string_view> seen;
    for (const auto& r : corpus.records) {
        if (!seen.insert(r.id).second) throw Error("duplicate record id \"" + r.id + "\"");
    }
}

ArticleRecord record_from_json(const json& obj, const std::string& source, std::size_t line) {
    if (!obj.is_object()) throw ParseError(source, line, "expected a JSON object");
    auto require = [&](const char* key) -> const json& {
        auto it = obj.find(key);
        if (it == obj.end()) throw ParseError(source, line, std::string("missing key \"") + key + "\"");
        return *it;
    };

    ArticleRecord rec;
    const json& id = require("id");
    const json& venue = require("venue");
    const json& year = require("year");
    const json& keywords = require("keywords");
    if (!id.is_string()) throw ParseError(source, line, "\"id\" must be a string");
    if (!venue.is_string()) throw ParseError(source, line, "\"venue\" must be a string");
    if (!year.is_number_integer()) throw ParseError(source, line, "\"year\" must be an integer");
    if (!keywords.is_array()) throw ParseError(source, line, "\"keywords\" must be an array");

    rec.id = id.get<std::string>();
    rec.venue = venue.get<std::string>();
    rec.year = year.get<int>();
    for (const auto& kw : keywords) {
        if (!kw.is_string()) throw ParseError(source, line, "keywords must be strings");
        rec.keywords.push_back(kw.get<std::string>());
    }
    return rec;
}

std::vector<ArticleRecord> parse_jsonl(std::string_view text, const std::string& source) {
    std::vector<ArticleRecord> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = detail::trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
        }
        out.push_back(record_from_json(obj, source, line_no));
    }
    return out;
}

int parse_year(std::string_view cell, const std::string& source, std::size_t line) {
    const std::string s(detail::trim(cell));
    std::size_t used = 0;
    int year = 0;
    try {
        year = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size()) throw ParseError(source, line, "year \"" + s + "\" is not an integer");
    return year;
}

std::vector<ArticleRecord> parse_csv(std::string_view text, const std::string& source) {
    std::vector<ArticleRecord> out;
    const auto rows = detail::parse_csv(text, source);
    if (rows.empty()) return out;

    const auto& header = rows.front();
    const std::vector<std::string> expected{"id", "venue", "year", "keywords"};
    std::vector<std::string> trimmed;
    for (const auto& h : header.fields) trimmed.emplace_back(detail::trim(h));
    if (trimmed != expected) throw ParseError(source, header.line, "header must be id,venue,year,keywords");

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.fields.size() == 1 && detail::trim(row.fields[0]).empty()) continue;
        if (row.fields.size() != 4) {
            throw ParseError(source, row.line,
                             "expected 4 fields, found " + std::to_string(row.fields.size()));
        }
        ArticleRecord rec;
        rec.id = row.fields[0];
        rec.venue = row.fields[1];
        rec.year = parse_year(row.fields[2], source, row.line);
        for (auto part : detail::split(row.fields[3], ';')) {
            auto kw = detail::trim(part);
            if (!kw.empty()) rec.keywords.emplace_back(kw);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

InputFormat parse_input_format(std::string_view name) {
    if (name == "jsonl") return InputFormat::jsonl;
    if (name == "csv") return InputFormat::csv;
    throw Error("unknown input format \"" + std::string(name) + "\" (expected jsonl or csv)");
}

Corpus parse_corpus(std::string_view text, InputFormat format, const std::string& source) {
    Corpus corpus;
    corpus.records = format == InputFormat::jsonl ? parse_jsonl(text, source) : parse_csv(text, source);
    corpus.sources.push_back(source);
    corpus.loaded_at = std::chrono::system_clock::now();
    check_unique(corpus);
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, InputFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error("failed reading " + path.string());
    return parse_corpus(buf.str(), format, path.string());
}

void append_corpus(Corpus& into, Corpus&& other) {
    std::unordered_set<std::string> ids;
    for (const auto& r : into.records) ids.insert(r.id);
    for (const auto& r : other.records) {
        if (!ids.insert(r.id).second) throw Error("duplicate record id \"" + r.id + "\"");
    }
    for (auto& r : other.records) into.records.push_back(std::move(r));
    for (auto& s : other.sources) into.sources.push_back(std::move(s));
    into.loaded_at = std::max(into.loaded_at, other.loaded_at);
}

std::string_view to_string(ExclusionReason reason) {
    switch (reason) {
        case ExclusionReason::no_keywords: return "no_keywords";
        case ExclusionReason::too_many_keywords: return "too_many_keywords";
    }
    return "unknown";
}

FilterResult filter_eligible(const Corpus& corpus, std::size_t max_keywords) {
    FilterResult result;
    result.corpus.sources = corpus.sources;
    result.corpus.loaded_at = corpus.loaded_at;

    for (const auto& rec : corpus.records) {
        ArticleRecord kept = rec;
        kept.keywords.clear();
        std::unordered_set<std::string_view> seen;
        for (const auto& kw : rec.keywords) {
            if (seen.insert(kw).second) kept.keywords.push_back(kw);
        }

        if (kept.keywords.empty()) {
            result.report.excluded.push_back({rec.id, ExclusionReason::no_keywords});
        } else if (kept.keywords.size() > max_keywords) {
            result.report.excluded.push_back({rec.id, ExclusionReason::too_many_keywords});
        } else {
            result.corpus.records.push_back(std::move(kept));
        }
    }
    result.report.retained = result.corpus.records.size();
    return result;
}

std::string filter_report_json(const FilterReport& report) {
    json excluded = json::array();
    for (const auto& e : report.excluded) {
        excluded.push_back(json{{"id", e.id}, {"reason", std::string(to_string(e.reason))}});
    }
    return json{{"excluded", excluded}, {"retained", report.retained}}.dump(2) + "\n";
}

}  // namespace kcn
