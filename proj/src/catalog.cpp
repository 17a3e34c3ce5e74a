#include "cforge/catalog.hpp"

#include "catalog_data.hpp"
#include "cforge/error.hpp"

#include <set>
#include <sstream>

namespace cforge {

std::vector<CatalogEntry> parse_catalog(std::string_view text)
{
    std::vector<CatalogEntry> out;
    std::set<std::string> labels;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        std::string label, encoding, extra;
        fields >> label >> encoding;
        auto where = "line " + std::to_string(number);
        if (label.empty() || encoding.empty() || (fields >> extra))
            throw Error(ErrorCode::MalformedKB, "catalog " + where + ": expected 'label graph6'", where);
        if (!labels.insert(label).second)
            throw Error(ErrorCode::MalformedKB, "catalog " + where + ": duplicate label " + label, where);
        try {
            out.push_back({label, parse_graph6(encoding)});
        } catch (const Error& e) {
            throw Error(ErrorCode::MalformedKB, "catalog " + where + " (" + label + "): " + e.what(), where);
        }
    }
    return out;
}

const std::vector<CatalogEntry>& catalog()
{
    static const std::vector<CatalogEntry> entries = parse_catalog(detail::kCatalogText);
    return entries;
}

std::optional<Graph> catalog_lookup(std::string_view label)
{
    for (const auto& e : catalog())
        if (e.label == label)
            return e.graph;
    return std::nullopt;
}

KnowledgeBase catalog_kb()
{
    KnowledgeBase kb(graph_domain());
    for (const auto& e : catalog())
        kb = kb.add_object(MathObject::from_payload(graph_domain(), e.graph, e.label, ObjectOrigin::SeedCatalog)).kb;
    return kb;
}

} // namespace cforge
