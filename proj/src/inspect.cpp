#include <algorithm>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bundle.hpp"
#include "csv.hpp"
#include "kcn/error.hpp"
#include "kcn/report.hpp"

namespace kcn {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
    std::vector<std::vector<std::string>> out;
    if (!fs::exists(path)) return out;
    const auto rows = detail::parse_csv(detail::read_file(path), path.string());
    for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(rows[i].fields);
    return out;
}

std::string query_form(std::string_view keyword) {
    try {
        return fold_case_hyphens(keyword);
    } catch (const Error&) {
        return std::string(keyword);
    }
}

}  // namespace

InspectReport inspect_keyword(std::string_view keyword, const fs::path& bundle) {
    const fs::path manifest_path = bundle / "manifest.json";
    if (!fs::exists(manifest_path)) throw Error("no report bundle at " + bundle.string());
    const json manifest = json::parse(detail::read_file(manifest_path));

    std::map<std::string, std::size_t> vocabulary;
    for (const auto& row : read_csv_rows(bundle / "vocabulary.csv")) {
        if (row.size() >= 2) vocabulary[row[0]] = std::stoul(row[1]);
    }
    if (vocabulary.empty()) throw Error("bundle has no vocabulary.csv (was it written with --only?)");

    std::vector<AuditEntry> audit;
    const fs::path audit_path = bundle / "audit.jsonl";
    if (fs::exists(audit_path)) audit = parse_audit_jsonl(detail::read_file(audit_path));

    std::string key = query_form(keyword);
    if (!vocabulary.contains(key)) {
        Corpus probe;
        probe.records.push_back({"probe", "", 0, {std::string(keyword)}});
        const auto replayed = replay_audit(probe, audit);
        if (!replayed.records[0].keywords.empty() && vocabulary.contains(replayed.records[0].keywords[0])) {
            key = replayed.records[0].keywords[0];
        } else {
            probe.records[0].keywords = {key};
            const auto folded = replay_audit(probe, audit);
            if (!folded.records[0].keywords.empty()) key = folded.records[0].keywords[0];
        }
    }
    InspectReport report;
    if (!vocabulary.contains(key)) {
        std::vector<std::pair<double, std::string>> scored;
        for (const auto& [word, count] : vocabulary) scored.emplace_back(similarity(key, word).value, word);
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        report.text = fmt::format("\"{}\" is not a canonical keyword in this bundle. Nearest matches:\n", keyword);
        for (std::size_t i = 0; i < std::min<std::size_t>(5, scored.size()); ++i) {
            report.text += fmt::format("  {}  ({:.1f})\n", scored[i].second, scored[i].first);
        }
        return report;
    }
    report.found = true;
    std::string& out = report.text;
    out += fmt::format("keyword: {}\n", key);
    if (key != keyword) out += fmt::format("query: \"{}\" resolves to \"{}\"\n", keyword, key);
    out += fmt::format("articles: {}\n", vocabulary[key]);

    if (!audit.empty()) {
        std::vector<std::string> frontier{key};
        std::set<std::string> seen{key};
        std::vector<const AuditEntry*> chain;
        while (!frontier.empty()) {
            const std::string target = frontier.back();
            frontier.pop_back();
            for (const auto& e : audit) {
                if (e.canonical == target && e.raw != target) {
                    chain.push_back(&e);
                    if (seen.insert(e.raw).second) frontier.push_back(e.raw);
                }
            }
        }
        std::sort(chain.begin(), chain.end(), [](const AuditEntry* a, const AuditEntry* b) {
            auto stage = [](Rule r) {
                switch (r) {
                    case Rule::fold: return 0;
                    case Rule::paren: return 1;
                    case Rule::abbrev: return 2;
                    case Rule::singular: return 3;
                    case Rule::merge: return 4;
                }
                return 5;
            };
            return std::make_pair(stage(a->rule), a->raw) < std::make_pair(stage(b->rule), b->raw);
        });
        out += "rewrites:\n";
        if (chain.empty()) out += "  (none)\n";
        for (const auto* e : chain) {
            out += fmt::format("  {:<8} \"{}\" -> \"{}\"\n", to_string(e->rule), e->raw, e->canonical);
        }
    }

    out += fmt::format("{:<12} {:<32} {}\n", "slice", "cluster", "betweenness rank");
    for (const auto& label_json : manifest.at("slices")) {
        const auto label = label_json.get<std::string>();
        const fs::path dir = bundle / "slices" / label;
        std::string cluster = "-";
        std::string rank = "-";

        std::map<int, std::string> names;
        const fs::path clusters_path = dir / ("clusters_" + label + ".json");
        if (fs::exists(clusters_path)) {
            for (const auto& c : json::parse(detail::read_file(clusters_path))) {
                names[c.at("id").get<int>()] = c.at("name").get<std::string>();
            }
        }
        for (const auto& row : read_csv_rows(dir / ("membership_" + label + ".csv"))) {
            if (row.size() >= 2 && row[0] == key) {
                const int id = std::stoi(row[1]);
                cluster = fmt::format("{} ({})", names.contains(id) ? names[id] : "?", id);
            }
        }
        const fs::path partition_path = dir / ("partition_" + label + ".json");
        if (cluster == "-" && fs::exists(partition_path)) {
            const auto part = json::parse(detail::read_file(partition_path));
            for (const auto& u : part.at("unclustered")) {
                if (u.get<std::string>() == key) cluster = "(outside largest component)";
            }
        }
        for (const auto& row : read_csv_rows(dir / ("betweenness_" + label + ".csv"))) {
            if (row.size() >= 3 && row[0] == key) rank = row[2];
        }
        out += fmt::format("{:<12} {:<32} {}\n", label, cluster, rank);
    }

    const fs::path ego_path = bundle / ego_file_name(key);
    if (fs::exists(ego_path)) {
        const std::string graphml = detail::read_file(ego_path);
        std::size_t nodes = 0;
        for (std::size_t at = graphml.find("<node "); at != std::string::npos; at = graphml.find("<node ", at + 1)) {
            ++nodes;
        }
        out += fmt::format("ego network: {} alters ({})\n", nodes > 0 ? nodes - 1 : 0, ego_file_name(key));
    } else {
        out += "ego network: -\n";
    }
    return report;
}

}  // namespace kcn
