#pragma once

#include "cforge/graph.hpp"
#include "cforge/kb.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cforge {

struct CatalogEntry {
    std::string label;
    Graph graph;
};

// Parses "label graph6" lines; '#' starts a comment line. Throws MalformedKB
// naming the line number.
std::vector<CatalogEntry> parse_catalog(std::string_view text);

// The shipped seed catalog.
const std::vector<CatalogEntry>& catalog();
std::optional<Graph> catalog_lookup(std::string_view label);

// Graph knowledge base seeded with the catalog (origin seed-catalog).
KnowledgeBase catalog_kb();

} // namespace cforge
