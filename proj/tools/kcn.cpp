#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kcn/error.hpp"
#include "kcn/report.hpp"

namespace {

kcn::SliceSpec pick_slice(const kcn::RunConfig& config, const std::string& label) {
    for (const auto& s : config.slices) {
        if (s.label == label) return s;
    }
    if (label == "all") return kcn::SliceSpec::all();
    try {
        std::size_t used = 0;
        const int year = std::stoi(label, &used);
        if (used == label.size()) return kcn::SliceSpec::year(year);
    } catch (const std::exception&) {
    }
    throw kcn::Error("[config] unknown slice \"" + label + "\"");
}

int run(const std::string& config_path, const std::vector<std::string>& only, const std::vector<std::string>& slices,
        const std::string& out) {
    auto config = kcn::load_run_config(config_path);
    for (const auto& s : only) config.only.insert(kcn::parse_stage(s));
    if (!slices.empty()) {
        std::vector<kcn::SliceSpec> chosen;
        for (const auto& label : slices) chosen.push_back(pick_slice(config, label));
        config.slices = std::move(chosen);
    }
    if (!out.empty()) config.output_dir = out;
    kcn::run_pipeline(config);
    fmt::print("wrote {}\n", config.output_dir.string());
    return 0;
}

int inspect(const std::string& keyword, const std::string& bundle) {
    const auto report = kcn::inspect_keyword(keyword, bundle);
    if (report.found) {
        std::cout << report.text;
        return 0;
    }
    std::cerr << report.text;
    return 1;
}

int export_graph(const std::string& config_path, const std::string& slice, const std::string& format,
                 const std::string& out) {
    const auto config = kcn::load_run_config(config_path);
    const auto spec = pick_slice(config, slice);
    const auto prepared = kcn::prepare_corpus(config);
    const auto g = kcn::build_kcn(prepared.normalized.corpus, spec);

    std::string text;
    if (format == "graphml") text = kcn::to_graphml(g);
    else if (format == "dot") text = kcn::to_dot(g);
    else text = kcn::to_edge_csv(g);

    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(out, std::ios::binary);
        if (!file) throw kcn::Error("cannot write " + out);
        file << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Keyword co-occurrence network analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> only;
    std::vector<std::string> slices;
    std::string out;
    auto* run_cmd = app.add_subcommand("run", "Run the pipeline and write a report bundle");
    run_cmd->add_option("--config,-c", config_path, "Config file (JSON)")->required();
    run_cmd->add_option("--only", only, "Emit only these stages")
        ->check(CLI::IsMember({"macro", "meso", "micro"}));
    run_cmd->add_option("--slice", slices, "Restrict to these slice labels");
    run_cmd->add_option("--out,-o", out, "Output directory (overrides output_dir)");

    std::string keyword;
    std::string bundle;
    auto* inspect_cmd = app.add_subcommand("inspect", "Show what a bundle says about one keyword");
    inspect_cmd->add_option("keyword", keyword)->required();
    inspect_cmd->add_option("--bundle,-b", bundle, "Report bundle directory")->required();

    std::string export_config;
    std::string export_slice = "all";
    std::string format = "graphml";
    std::string export_out;
    auto* export_cmd = app.add_subcommand("export", "Export one slice graph");
    export_cmd->add_option("--config,-c", export_config, "Config file (JSON)")->required();
    export_cmd->add_option("--slice", export_slice, "Slice label")->capture_default_str();
    export_cmd->add_option("--format,-f", format)
        ->check(CLI::IsMember({"graphml", "dot", "csv"}))
        ->capture_default_str();
    export_cmd->add_option("--out,-o", export_out, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run(config_path, only, slices, out);
        if (*inspect_cmd) return inspect(keyword, bundle);
        if (*export_cmd) return export_graph(export_config, export_slice, format, export_out);
    } catch (const std::exception& e) {
        std::cerr << "kcn: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
