#include <fmt/format.h>

#include "csv.hpp"
#include "kcn/error.hpp"
#include "kcn/graph.hpp"

namespace kcn {
namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string to_graphml(const WeightedGraph& g, const std::vector<NodeAttribute>& extra) {
    for (const auto& a : extra) {
        if (a.values.size() != static_cast<std::size_t>(g.node_count())) {
            throw Error("graphml: attribute \"" + a.name + "\" does not cover every node");
        }
    }
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    out += "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
    out += "  <key id=\"freq\" for=\"node\" attr.name=\"freq\" attr.type=\"int\"/>\n";
    for (const auto& a : extra) {
        out += fmt::format("  <key id=\"{0}\" for=\"node\" attr.name=\"{0}\" attr.type=\"{1}\"/>\n",
                           xml_escape(a.name), xml_escape(a.type));
    }
    out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
    out += "  <graph id=\"kcn\" edgedefault=\"undirected\">\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out += fmt::format("    <node id=\"n{}\">\n", v);
        out += fmt::format("      <data key=\"label\">{}</data>\n", xml_escape(g.label(v)));
        out += fmt::format("      <data key=\"freq\">{}</data>\n", g.freq(v));
        for (const auto& a : extra) {
            out += fmt::format("      <data key=\"{}\">{}</data>\n", xml_escape(a.name),
                               xml_escape(a.values[static_cast<std::size_t>(v)]));
        }
        out += "    </node>\n";
    }
    std::size_t e_id = 0;
    for (const auto& e : g.edges()) {
        out += fmt::format("    <edge id=\"e{}\" source=\"n{}\" target=\"n{}\">\n", e_id++, e.source, e.target);
        out += fmt::format("      <data key=\"weight\">{}</data>\n", e.weight);
        out += "    </edge>\n";
    }
    out += "  </graph>\n</graphml>\n";
    return out;
}

std::string to_dot(const WeightedGraph& g) {
    std::string out = "graph kcn {\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out += fmt::format("  n{} [label={}, freq={}];\n", v, dot_quote(g.label(v)), g.freq(v));
    }
    for (const auto& e : g.edges()) {
        out += fmt::format("  n{} -- n{} [weight={}];\n", e.source, e.target, e.weight);
    }
    out += "}\n";
    return out;
}

std::string to_edge_csv(const WeightedGraph& g) {
    std::string out = "source,target,weight\n";
    for (const auto& e : g.edges()) {
        out += fmt::format("{},{},{}\n", detail::csv_escape(g.label(e.source)),
                           detail::csv_escape(g.label(e.target)), e.weight);
    }
    return out;
}

}  // namespace kcn
