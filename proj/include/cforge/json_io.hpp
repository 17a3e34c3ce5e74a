#pragma once

#include "cforge/dalmatian.hpp"
#include "cforge/error.hpp"
#include "cforge/kb.hpp"
#include "cforge/sketch.hpp"

#include <json.hpp>

#include <chrono>
#include <string>
#include <string_view>

namespace cforge {

using Json = nlohmann::ordered_json;

// {"domain", "objects":[{"label","encoding","origin"}], "theorems":[...],
//  "concepts":[names], "definitions":[{"name","expression","provenance","description"}]}
Json kb_to_json(const KnowledgeBase& kb);
// Throws MalformedKB; `source` (the raw document) lets errors cite a line.
KnowledgeBase kb_from_json(const Json& doc, std::string_view source = {});
// Accepts a KB JSON document or catalog-style "label graph6" lines.
KnowledgeBase kb_from_text(std::string_view text);
// "catalog" or a file path.
KnowledgeBase load_kb(const std::string& source);

Json to_json(const MathObject& obj);
Json to_json(const TheoremRecord& thm);
TheoremRecord theorem_from_json(const Json& j);

Json to_json(const Conjecture& c, const KnowledgeBase& kb);
Conjecture conjecture_from_json(const Json& j, const KnowledgeBase& kb);

Json to_json(const ProofSketch& s);
ProofSketch sketch_from_json(const Json& j);

Json to_json(const Signature& sig);
// Missing keys fall back to default_signature(kb, mode).
Signature signature_from_json(const Json& j, const KnowledgeBase& kb, ConjectureMode mode);

Json error_json(const Error& e);

// "250ms", "5s", "2m"; a bare number means seconds.
std::chrono::milliseconds parse_duration(std::string_view text);

// Reads a whole file; throws InvalidArgument when it cannot be opened.
std::string read_file(const std::string& path);

} // namespace cforge
