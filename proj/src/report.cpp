#include "kcn/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "bundle.hpp"
#include "csv.hpp"
#include "kcn/communities.hpp"
#include "kcn/error.hpp"
#include "kcn/parallel.hpp"

namespace kcn {
namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace detail {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("failed writing " + path.string());
}

void BundleWriter::write(const std::string& relative, std::string_view content) {
    write_file(root_ / relative, content);
    std::lock_guard lock(mutex_);
    files_.push_back(relative);
}

std::vector<std::string> BundleWriter::files() const {
    std::lock_guard lock(mutex_);
    auto out = files_;
    std::sort(out.begin(), out.end());
    return out;
}

std::string fixed3(double v) {
    std::string s = fmt::format("{:.3f}", v);
    return s == "-0.000" ? "0.000" : s;
}

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace detail

namespace {

using detail::fixed3;
using detail::num;

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        const std::string what = e.what();
        if (!what.empty() && what.front() == '[') throw;
        throw Error(std::string("[") + stage + "] " + what);
    }
}

bool valid_label(std::string_view label) {
    if (label.empty()) return false;
    return std::all_of(label.begin(), label.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '-' || c == '.';
    });
}

SliceSpec parse_slice(const json& j) {
    if (j.is_number_integer()) return SliceSpec::year(j.get<int>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "all") return SliceSpec::all();
        try {
            std::size_t used = 0;
            const int y = std::stoi(s, &used);
            if (used == s.size()) return SliceSpec::year(y);
        } catch (const std::exception&) {
        }
        throw Error("slice \"" + s + "\" is neither \"all\" nor a year");
    }
    if (j.is_object()) {
        const auto label = j.at("label").get<std::string>();
        if (!j.contains("from") && !j.contains("to")) return SliceSpec::all(label);
        return SliceSpec::range(label, j.at("from").get<int>(), j.at("to").get<int>());
    }
    throw Error("slices must be \"all\", a year, or {label, from, to}");
}

template <typename Enum>
Enum parse_choice(const json& options, const char* key, Enum fallback,
                  std::initializer_list<std::pair<const char*, Enum>> choices) {
    if (!options.contains(key)) return fallback;
    const auto value = options.at(key).get<std::string>();
    for (const auto& [name, e] : choices) {
        if (value == name) return e;
    }
    throw Error(std::string("option ") + key + " has unsupported value \"" + value + "\"");
}

// --- per-stage writers -----------------------------------------------------

std::string summary_tsv_header() { return "Years\tn\tm\td\tc\tz\ts\tlc\tr\n"; }

std::string summary_tsv_row(const std::string& label, const StructuralSummary& s) {
    return fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", label, s.n, s.m, fixed3(s.d), fixed3(s.c), fixed3(s.z),
                       fixed3(s.s), s.lc, s.r ? fixed3(*s.r) : "NA");
}

void write_macro(detail::BundleWriter& out, const std::string& dir, const std::string& label, const WeightedGraph& g,
                 const StructuralSummary& summary, const RunConfig& config) {
    ordered_json sj{{"label", label},
                    {"n", summary.n},
                    {"m", summary.m},
                    {"d", summary.d},
                    {"c", summary.c},
                    {"c_unweighted", summary.c_unweighted},
                    {"z", summary.z},
                    {"s", summary.s},
                    {"lc", summary.lc},
                    {"r", summary.r ? ordered_json(*summary.r) : ordered_json(nullptr)}};
    ordered_json warnings = ordered_json::array();
    if (!summary.r) warnings.push_back("degree assortativity undefined (zero degree variance)");
    sj["warnings"] = warnings;
    out.write(dir + "summary.json", sj.dump(2) + "\n");
    out.write(dir + "summary.tsv", summary_tsv_header() + summary_tsv_row(label, summary));

    std::vector<double> values;
    const Eigen::VectorXd x = config.power_law_on_degree ? degrees(g) : strengths(g);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) > 0) values.push_back(x(i));
    }

    std::string ccdf_text = "x\tp\n";
    if (!values.empty()) {
        for (const auto& [v, p] : ccdf(values)) ccdf_text += num(v) + "\t" + num(p) + "\n";
    }
    out.write(dir + "ccdf.tsv", ccdf_text);

    ordered_json pj{{"target", config.power_law_on_degree ? "degree" : "strength"},
                    {"model", config.power_law_model == PowerLawModel::discrete ? "discrete" : "continuous"}};
    try {
        const auto fit = fit_power_law(values, config.power_law_model);
        pj["alpha"] = fit.alpha;
        pj["xmin"] = fit.xmin;
        pj["ks_stat"] = fit.ks_stat;
        pj["n_tail"] = fit.n_tail;
        pj["sigma"] = fit.sigma;
    } catch (const Error& e) {
        pj["error"] = e.what();
    }
    out.write(dir + "power_law.json", pj.dump(2) + "\n");

    const auto profiles = profile_nodes(g);
    std::string cw = "keyword\tk\tcw\n";
    std::string knn = "keyword\tk\tknn_w\tknn_ratio\n";
    for (const auto& p : profiles.nodes) {
        cw += fmt::format("{}\t{}\t{}\n", p.node, p.k, num(p.cw));
        knn += fmt::format("{}\t{}\t{}\t{}\n", p.node, p.k, num(p.knn_w), num(p.knn_ratio));
    }
    std::string cw_bins = "k\tcount\tmean_cw\n";
    std::string knn_bins = "k\tcount\tmean_knn_ratio\n";
    for (const auto& b : profiles.bins) {
        cw_bins += fmt::format("{}\t{}\t{}\n", b.k, b.count, num(b.mean_cw));
        knn_bins += fmt::format("{}\t{}\t{}\n", b.k, b.count, num(b.mean_knn_ratio));
    }
    out.write(dir + "clustering_vs_degree.tsv", cw);
    out.write(dir + "clustering_vs_degree_binned.tsv", cw_bins);
    out.write(dir + "knn_ratio_vs_degree.tsv", knn);
    out.write(dir + "knn_ratio_vs_degree_binned.tsv", knn_bins);
}

void write_meso(detail::BundleWriter& out, const std::string& dir, const std::string& label, const WeightedGraph& g,
                std::size_t profile_k) {
    const auto clusters = cluster_slice(g, label, profile_k);
    const auto& comp = clusters.component;

    ordered_json list = ordered_json::array();
    for (const auto& p : clusters.profiles) {
        ordered_json top = ordered_json::array();
        for (const auto& r : p.top_k) top.push_back({{"keyword", r.keyword}, {"ingroup_degree", r.ingroup_degree}});
        list.push_back({{"id", p.id}, {"name", p.name}, {"size", p.size}, {"top_k", top}});
    }
    out.write(dir + "clusters_" + label + ".json", list.dump(2) + "\n");

    std::string membership = "keyword,cluster_id\n";
    for (NodeId v = 0; v < comp.node_count(); ++v) {
        membership += fmt::format("{},{}\n", detail::csv_escape(comp.label(v)),
                                  clusters.partition.assignment[static_cast<std::size_t>(v)]);
    }
    out.write(dir + "membership_" + label + ".csv", membership);

    std::string dendrogram = "step,kept,absorbed,kept_label,absorbed_label,delta_q,modularity\n";
    const auto& trace = clusters.partition.merge_trace;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        dendrogram += fmt::format("{},{},{},{},{},{},{}\n", t + 1, trace[t].kept, trace[t].absorbed,
                                  detail::csv_escape(comp.label(trace[t].kept)),
                                  detail::csv_escape(comp.label(trace[t].absorbed)), num(trace[t].delta_q),
                                  num(trace[t].q_after));
    }
    out.write(dir + "dendrogram_" + label + ".csv", dendrogram);

    ordered_json part{{"label", label},
                      {"component_size", comp.node_count()},
                      {"clusters", clusters.partition.cluster_count()},
                      {"modularity", clusters.partition.modularity},
                      {"cut_step", clusters.partition.cut},
                      {"unclustered", clusters.unclustered}};
    out.write(dir + "partition_" + label + ".json", part.dump(2) + "\n");
}

CentralityTable write_micro(detail::BundleWriter& out, const std::string& dir, const std::string& label,
                            const WeightedGraph& g, const RunConfig& config, std::size_t threads) {
    const Eigen::VectorXd values = weighted_betweenness(g, config.distance, threads);
    const auto ranked = top_k_table(g, values, static_cast<std::size_t>(std::max<NodeId>(1, g.node_count())), label);
    std::string csv = "keyword,value,rank\n";
    for (std::size_t i = 0; i < ranked.rows.size(); ++i) {
        csv += fmt::format("{},{},{}\n", detail::csv_escape(ranked.rows[i].keyword), num(ranked.rows[i].value), i + 1);
    }
    out.write(dir + "betweenness_" + label + ".csv", csv);
    return top_k_table(g, values, config.thresholds.top_k, label);
}

std::string vocabulary_csv(const Corpus& corpus) {
    std::string out = "keyword,articles\n";
    for (const auto& row : frequency_table(corpus, std::numeric_limits<std::size_t>::max())) {
        out += fmt::format("{},{}\n", detail::csv_escape(row.keyword), row.articles);
    }
    return out;
}

}  // namespace

Stage parse_stage(std::string_view name) {
    if (name == "macro") return Stage::macro;
    if (name == "meso") return Stage::meso;
    if (name == "micro") return Stage::micro;
    throw Error("unknown stage \"" + std::string(name) + "\" (expected macro, meso or micro)");
}

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::macro: return "macro";
        case Stage::meso: return "meso";
        case Stage::micro: return "micro";
    }
    return "unknown";
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
}

RunConfig parse_run_config(std::string_view text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("config: top level must be an object");

    static const std::set<std::string> known{"inputs", "lexicon", "slices", "thresholds",
                                             "output_dir", "seed", "options"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw Error("config: unknown key \"" + key + "\"");
    }

    auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };

    RunConfig config;
    try {
        if (!j.contains("inputs") || !j["inputs"].is_array() || j["inputs"].empty()) {
            throw Error("config: \"inputs\" must be a non-empty array");
        }
        for (const auto& in : j["inputs"]) {
            InputSpec spec;
            if (in.is_string()) {
                spec.path = resolve(in.get<std::string>());
                spec.format = spec.path.extension() == ".csv" ? InputFormat::csv : InputFormat::jsonl;
            } else {
                spec.path = resolve(in.at("path").get<std::string>());
                spec.format = parse_input_format(in.value("format", std::string("jsonl")));
            }
            config.inputs.push_back(std::move(spec));
        }

        if (j.contains("lexicon")) {
            const auto& lex = j["lexicon"];
            for (const auto& [key, value] : lex.items()) {
                if (key == "protected") config.lexicon.protected_tokens = resolve(value.get<std::string>());
                else if (key == "abbrev") config.lexicon.abbreviations = resolve(value.get<std::string>());
                else if (key == "merges") config.lexicon.merges = resolve(value.get<std::string>());
                else throw Error("config: unknown lexicon key \"" + key + "\"");
            }
        }

        if (j.contains("slices")) {
            for (const auto& s : j["slices"]) config.slices.push_back(parse_slice(s));
        } else {
            config.slices.push_back(SliceSpec::all());
        }

        if (j.contains("thresholds")) {
            const auto& t = j["thresholds"];
            for (const auto& [key, value] : t.items()) {
                if (key == "max_keywords") config.thresholds.max_keywords = value.get<std::size_t>();
                else if (key == "synonym_threshold") config.thresholds.synonym_threshold = value.get<double>();
                else if (key == "top_k") config.thresholds.top_k = value.get<std::size_t>();
                else if (key == "profile_k") config.thresholds.profile_k = value.get<std::size_t>();
                else throw Error("config: unknown threshold \"" + key + "\"");
            }
            for (const char* key : {"max_keywords", "top_k", "profile_k", "synonym_threshold"}) {
                if (t.contains(key) && !(t[key].get<double>() > 0)) {
                    throw Error(std::string("config: threshold ") + key + " must be positive");
                }
            }
            if (config.thresholds.synonym_threshold > 100.0) {
                throw Error("config: synonym_threshold must not exceed 100");
            }
        }

        if (j.contains("output_dir")) config.output_dir = resolve(j["output_dir"].get<std::string>());
        if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();

        if (j.contains("options")) {
            const auto& o = j["options"];
            static const std::set<std::string> option_keys{"exhaustive_pairing", "betweenness_distance",
                                                           "power_law_target", "power_law_model",
                                                           "ego_alter_degree"};
            for (const auto& [key, value] : o.items()) {
                if (!option_keys.contains(key)) throw Error("config: unknown option \"" + key + "\"");
            }
            config.exhaustive_pairing = o.value("exhaustive_pairing", false);
            config.distance = parse_choice(o, "betweenness_distance", DistanceMode::inverse_weight,
                                           {{"inverse_weight", DistanceMode::inverse_weight},
                                            {"weight", DistanceMode::weight}});
            config.power_law_on_degree =
                parse_choice(o, "power_law_target", false, {{"strength", false}, {"degree", true}});
            config.power_law_model = parse_choice(o, "power_law_model", PowerLawModel::continuous,
                                                  {{"continuous", PowerLawModel::continuous},
                                                   {"discrete", PowerLawModel::discrete}});
            config.alter_degree = parse_choice(o, "ego_alter_degree", AlterDegree::ego_subgraph,
                                               {{"ego_subgraph", AlterDegree::ego_subgraph},
                                                {"full_graph", AlterDegree::full_graph}});
        }
    } catch (const json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }

    std::set<std::string> labels;
    for (const auto& s : config.slices) {
        if (!valid_label(s.label)) throw Error("config: slice label \"" + s.label + "\" must be [A-Za-z0-9_.-]+");
        if (!labels.insert(s.label).second) throw Error("config: duplicate slice label \"" + s.label + "\"");
    }
    for (std::size_t a = 0; a < config.slices.size(); ++a) {
        for (std::size_t b = a + 1; b < config.slices.size(); ++b) {
            const auto& x = config.slices[a].years;
            const auto& y = config.slices[b].years;
            if (x && y && x->first <= y->second && y->first <= x->second) {
                throw Error("config: slices \"" + config.slices[a].label + "\" and \"" + config.slices[b].label +
                            "\" overlap");
            }
        }
    }

    json echo = j;
    echo.erase("output_dir");
    config.echo = echo.dump();
    config.threads = thread_count();
    return config;
}

RunConfig load_run_config(const fs::path& path) {
    std::string text;
    try {
        text = detail::read_file(path);
    } catch (const Error&) {
        throw Error("cannot open config file " + path.string());
    }
    return parse_run_config(text, path.parent_path());
}

PreparedCorpus prepare_corpus(const RunConfig& config) {
    PreparedCorpus out;
    in_stage("ingest", [&] {
        for (const auto& input : config.inputs) append_corpus(out.raw, load_corpus(input.path, input.format));
        return 0;
    });
    auto filtered = in_stage("filter", [&] { return filter_eligible(out.raw, config.thresholds.max_keywords); });
    out.filter = std::move(filtered.report);
    out.normalized = in_stage("normalize", [&] {
        NormalizationLexicon lexicon = default_lexicon();
        if (config.lexicon.protected_tokens) load_protected_tokens(*config.lexicon.protected_tokens, lexicon);
        if (config.lexicon.abbreviations) load_abbreviations(*config.lexicon.abbreviations, lexicon);
        if (config.lexicon.merges) load_merge_rules(*config.lexicon.merges, lexicon);
        lexicon.synonym_threshold = config.thresholds.synonym_threshold;
        lexicon.exhaustive_pairing = config.exhaustive_pairing;
        lexicon.threads = config.threads;
        return normalize_corpus(filtered.corpus, std::move(lexicon));
    });
    return out;
}

std::string ego_file_name(std::string_view keyword) {
    std::string s;
    for (char c : keyword) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
        s.push_back(keep ? c : '_');
    }
    return "ego/ego_" + s + ".graphml";
}

void run_pipeline(const RunConfig& config) {
    if (config.output_dir.empty()) throw Error("[config] no output directory given");
    const fs::path target = config.output_dir;
    const fs::path staging = target.string() + ".partial";

    in_stage("write", [&] {
        fs::remove_all(staging);
        fs::create_directories(staging);
        return 0;
    });

    try {
        detail::BundleWriter out(staging);
        const bool full = config.only.empty();
        auto want = [&](Stage s) { return full || config.only.contains(s); };

        const auto prepared = prepare_corpus(config);
        const Corpus& corpus = prepared.normalized.corpus;

        if (full) {
            in_stage("write", [&] {
                out.write("filter_report.json", filter_report_json(prepared.filter));
                out.write("audit.jsonl", audit_jsonl(prepared.normalized.lexicon.audit));
                out.write("vocabulary.csv", vocabulary_csv(corpus));
                return 0;
            });
        }

        const std::size_t n_slices = config.slices.size();
        std::vector<WeightedGraph> graphs(n_slices);
        in_stage("build", [&] {
            parallel_for(n_slices, config.threads, [&](std::size_t i) { graphs[i] = build_kcn(corpus, config.slices[i]); });
            return 0;
        });

        std::vector<StructuralSummary> summaries(n_slices);
        std::vector<CentralityTable> tables(n_slices);
        const std::size_t inner_threads = std::max<std::size_t>(1, config.threads / std::max<std::size_t>(1, n_slices));
        parallel_for(n_slices, config.threads, [&](std::size_t i) {
            const auto& label = config.slices[i].label;
            const std::string dir = "slices/" + label + "/";
            if (want(Stage::macro)) {
                in_stage("macro", [&] {
                    summaries[i] = summarize(graphs[i]);
                    write_macro(out, dir, label, graphs[i], summaries[i], config);
                    return 0;
                });
            }
            if (want(Stage::meso)) {
                in_stage("meso", [&] {
                    write_meso(out, dir, label, graphs[i], config.thresholds.profile_k);
                    return 0;
                });
            }
            if (want(Stage::micro)) {
                tables[i] = in_stage("micro", [&] { return write_micro(out, dir, label, graphs[i], config, inner_threads); });
            }
        });

        if (want(Stage::macro)) {
            std::string table = summary_tsv_header();
            for (std::size_t i = 0; i < n_slices; ++i) table += summary_tsv_row(config.slices[i].label, summaries[i]);
            out.write("summary.tsv", table);
        }

        if (want(Stage::micro)) {
            in_stage("micro", [&] {
                std::string freq = "keyword,articles\n";
                for (const auto& row : frequency_table(corpus, config.thresholds.top_k)) {
                    freq += fmt::format("{},{}\n", detail::csv_escape(row.keyword), row.articles);
                }
                out.write("frequency.csv", freq);

                std::vector<std::size_t> chrono;
                std::optional<std::size_t> overall;
                for (std::size_t i = 0; i < n_slices; ++i) {
                    if (config.slices[i].years) chrono.push_back(i);
                    else if (!overall) overall = i;
                }
                std::stable_sort(chrono.begin(), chrono.end(), [&](std::size_t a, std::size_t b) {
                    return config.slices[a].years->first < config.slices[b].years->first;
                });
                if (chrono.size() < 2) return 0;

                std::vector<CentralityTable> ordered;
                for (std::size_t i : chrono) ordered.push_back(tables[i]);
                const auto emerging = detect_emerging(ordered);

                ordered_json list = ordered_json::array();
                for (const auto& e : emerging) {
                    std::size_t slice = chrono.front();
                    for (std::size_t i : chrono) {
                        if (config.slices[i].label == e.first_slice) slice = i;
                    }
                    const auto& years = *config.slices[slice].years;
                    list.push_back({{"keyword", e.keyword},
                                    {"first_year", years.first == years.second ? ordered_json(years.first) : ordered_json(e.first_slice)},
                                    {"value", e.value}});
                    const WeightedGraph& host = graphs[overall ? *overall : slice];
                    if (host.find(e.keyword)) {
                        const auto view = ego_network(host, e.keyword, config.thresholds.top_k, config.alter_degree);
                        out.write(ego_file_name(e.keyword), ego_graphml(view));
                    }
                }
                out.write("emerging.json", list.dump(2) + "\n");
                return 0;
            });
        }

        in_stage("write", [&] {
            ordered_json manifest;
            manifest["tool"] = "kcn";
            manifest["version"] = kToolVersion;
            manifest["config"] = ordered_json::parse(config.echo);
            ordered_json inputs = ordered_json::array();
            for (const auto& in : config.inputs) {
                inputs.push_back({{"file", in.path.filename().string()},
                                  {"sha256", sha256_hex(detail::read_file(in.path))}});
            }
            manifest["inputs"] = inputs;
            ordered_json lexicon = ordered_json::object();
            auto add_lexicon = [&](const char* key, const std::optional<fs::path>& p) {
                if (p) lexicon[key] = {{"file", p->filename().string()}, {"sha256", sha256_hex(detail::read_file(*p))}};
            };
            add_lexicon("protected", config.lexicon.protected_tokens);
            add_lexicon("abbrev", config.lexicon.abbreviations);
            add_lexicon("merges", config.lexicon.merges);
            manifest["lexicon"] = lexicon;
            ordered_json stages = ordered_json::array();
            for (Stage s : {Stage::macro, Stage::meso, Stage::micro}) {
                if (want(s)) stages.push_back(std::string(to_string(s)));
            }
            manifest["stages"] = stages;
            ordered_json slices = ordered_json::array();
            for (const auto& s : config.slices) slices.push_back(s.label);
            manifest["slices"] = slices;
            ordered_json files = ordered_json::array();
            for (const auto& f : out.files()) {
                files.push_back({{"path", f}, {"sha256", sha256_hex(detail::read_file(staging / f))}});
            }
            manifest["files"] = files;
            detail::write_file(staging / "manifest.json", manifest.dump(2) + "\n");

            fs::remove_all(target);
            fs::rename(staging, target);
            return 0;
        });
    } catch (...) {
        std::error_code ec;
        fs::remove_all(staging, ec);
        throw;
    }
}

}  // namespace kcn
