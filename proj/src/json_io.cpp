#include "cforge/json_io.hpp"

#include "cforge/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace cforge {

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the n-th occurrence of `"key"` in the raw document, if findable.
std::optional<std::size_t> line_of_key(std::string_view text, std::string_view key, std::size_t n)
{
    std::string quoted = "\"" + std::string(key) + "\"";
    std::size_t pos = 0;
    for (std::size_t i = 0;; ++i) {
        pos = text.find(quoted, pos);
        if (pos == std::string_view::npos)
            return std::nullopt;
        if (i == n)
            return line_of_offset(text, pos);
        pos += quoted.size();
    }
}

[[noreturn]] void malformed(const std::string& where, std::optional<std::size_t> line, const std::string& why)
{
    std::string loc = line ? "line " + std::to_string(*line) + " (" + where + ")" : where;
    throw Error(ErrorCode::MalformedKB, "malformed knowledge base at " + loc + ": " + why, loc);
}

const Json& member(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorCode::MalformedPayload, std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string string_member(const Json& j, const char* key)
{
    const Json& v = member(j, key);
    if (!v.is_string())
        throw Error(ErrorCode::MalformedPayload, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::string string_or(const Json& j, const char* key, std::string fallback)
{
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null())
        return fallback;
    if (!j.at(key).is_string())
        throw Error(ErrorCode::MalformedPayload, std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

std::vector<std::string> string_list(const Json& j, const char* key)
{
    const Json& v = member(j, key);
    if (!v.is_array())
        throw Error(ErrorCode::MalformedPayload, std::string("field '") + key + "' must be a list");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string())
            throw Error(ErrorCode::MalformedPayload, std::string("field '") + key + "' must hold strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

std::size_t count_or(const Json& j, const char* key)
{
    if (!j.contains(key))
        return 0;
    if (!j.at(key).is_number_unsigned() && !j.at(key).is_number_integer())
        throw Error(ErrorCode::MalformedPayload, std::string("field '") + key + "' must be a count");
    return j.at(key).get<std::size_t>();
}

Op op_from_json(const Json& j)
{
    if (!j.is_string())
        throw Error(ErrorCode::MalformedPayload, "operators must be strings");
    auto op = op_from_name(j.get<std::string>());
    if (!op)
        throw Error(ErrorCode::InvalidArgument, "unknown operator '" + j.get<std::string>() + "'");
    return *op;
}

} // namespace

Json to_json(const MathObject& obj)
{
    return Json{{"label", obj.label}, {"encoding", obj.encoding}, {"origin", to_string(obj.origin)}};
}

Json to_json(const TheoremRecord& thm)
{
    return Json{{"hypothesis", thm.hypothesis}, {"conclusion", thm.conclusion}, {"source", to_string(thm.source)}};
}

TheoremRecord theorem_from_json(const Json& j)
{
    TheoremRecord t;
    t.hypothesis = string_list(j, "hypothesis");
    t.conclusion = string_member(j, "conclusion");
    t.source = theorem_source_from_string(string_or(j, "source", "user-proved"));
    return t;
}

Json kb_to_json(const KnowledgeBase& kb)
{
    Json objects = Json::array();
    for (const auto& o : kb.objects())
        objects.push_back(to_json(*o));
    Json theorems = Json::array();
    for (const auto& t : kb.theorems())
        theorems.push_back(to_json(t));
    Json concepts = Json::array();
    Json definitions = Json::array();
    for (const auto& c : kb.concepts()) {
        concepts.push_back(c.name);
        if (c.definition)
            definitions.push_back(Json{{"name", c.name},
                                       {"expression", c.definition->to_string()},
                                       {"provenance", to_string(c.provenance)},
                                       {"description", c.description}});
    }
    return Json{{"domain", kb.domain().tag()},
                {"objects", std::move(objects)},
                {"theorems", std::move(theorems)},
                {"concepts", std::move(concepts)},
                {"definitions", std::move(definitions)}};
}

KnowledgeBase kb_from_json(const Json& doc, std::string_view source)
{
    if (!doc.is_object())
        malformed("document", std::nullopt, "expected a JSON object");
    const Domain* domain = nullptr;
    try {
        domain = &domain_for(string_member(doc, "domain"));
    } catch (const Error& e) {
        malformed("domain", line_of_key(source, "domain", 0), e.what());
    }
    KnowledgeBase kb(*domain);

    if (doc.contains("definitions")) {
        const Json& defs = doc.at("definitions");
        if (!defs.is_array())
            malformed("definitions", line_of_key(source, "definitions", 0), "expected a list");
        for (std::size_t i = 0; i < defs.size(); ++i) {
            std::string where = "definitions[" + std::to_string(i) + "]";
            try {
                const Json& d = defs[i];
                auto provenance = concept_provenance_from_string(string_or(d, "provenance", "user"));
                if (provenance == ConceptProvenance::Builtin)
                    throw Error(ErrorCode::InvalidArgument, "definitions cannot be builtin");
                kb = kb.add_concept(string_member(d, "name"), kb.parse_expression(string_member(d, "expression")),
                                    provenance, string_or(d, "description", ""));
            } catch (const Error& e) {
                malformed(where, line_of_key(source, "expression", i), e.what());
            }
        }
    }
    if (doc.contains("concepts")) {
        const Json& names = doc.at("concepts");
        if (!names.is_array())
            malformed("concepts", line_of_key(source, "concepts", 0), "expected a list");
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (!names[i].is_string() || !kb.find_concept(names[i].get<std::string>()))
                malformed("concepts[" + std::to_string(i) + "]", line_of_key(source, "concepts", 0),
                          "unknown concept " + names[i].dump());
        }
    }

    const Json& objects = doc.contains("objects") ? doc.at("objects") : Json::array();
    if (!objects.is_array())
        malformed("objects", line_of_key(source, "objects", 0), "expected a list");
    for (std::size_t i = 0; i < objects.size(); ++i) {
        std::string where = "objects[" + std::to_string(i) + "]";
        try {
            const Json& o = objects[i];
            auto origin = object_origin_from_string(string_or(o, "origin", "user"));
            kb = kb.add_object(MathObject::parse(*domain, string_member(o, "encoding"), string_or(o, "label", ""), origin)).kb;
        } catch (const Error& e) {
            malformed(where, line_of_key(source, "encoding", i), e.what());
        }
    }

    const Json& theorems = doc.contains("theorems") ? doc.at("theorems") : Json::array();
    if (!theorems.is_array())
        malformed("theorems", line_of_key(source, "theorems", 0), "expected a list");
    for (std::size_t i = 0; i < theorems.size(); ++i) {
        std::string where = "theorems[" + std::to_string(i) + "]";
        try {
            kb = kb.add_theorem(theorem_from_json(theorems[i]));
        } catch (const Error& e) {
            malformed(where, line_of_key(source, "conclusion", i), e.what());
        }
    }
    return kb;
}

KnowledgeBase kb_from_text(std::string_view text)
{
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const Json::parse_error& e) {
            auto line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
            throw Error(ErrorCode::MalformedKB, "malformed knowledge base at line " + std::to_string(line) + ": invalid JSON",
                        "line " + std::to_string(line));
        }
        return kb_from_json(doc, text);
    }
    KnowledgeBase kb(graph_domain());
    for (auto& e : parse_catalog(text))
        kb = kb.add_object(MathObject::from_payload(graph_domain(), std::move(e.graph), e.label, ObjectOrigin::User)).kb;
    return kb;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

KnowledgeBase load_kb(const std::string& source)
{
    if (source == "catalog")
        return catalog_kb();
    return kb_from_text(read_file(source));
}

Json to_json(const Conjecture& c, const KnowledgeBase& kb)
{
    return Json{{"mode", to_string(c.mode)},
                {"target", c.target},
                {"body", c.body.to_string()},
                {"domain", c.domain},
                {"status", to_string(c.status)},
                {"refuting_object", c.refuting_object ? Json(*c.refuting_object) : Json(nullptr)},
                {"evidence", c.evidence},
                {"excluded", c.excluded},
                {"slack", c.slack},
                {"touches", c.touches},
                {"complexity", c.body.complexity()},
                {"text", render_conjecture(c, kb)}};
}

Conjecture conjecture_from_json(const Json& j, const KnowledgeBase& kb)
{
    Conjecture c;
    c.mode = conjecture_mode_from_string(string_member(j, "mode"));
    c.target = string_member(j, "target");
    kb.concept_entry(c.target);
    c.body = kb.parse_expression(string_member(j, "body"));
    c.domain = string_or(j, "domain", std::string(kb.domain().tag()));
    if (c.domain != kb.domain().tag())
        throw Error(ErrorCode::DomainMismatch, "conjecture is about " + c.domain + " objects");
    c.status = conjecture_status_from_string(string_or(j, "status", "open"));
    if (j.contains("refuting_object") && !j.at("refuting_object").is_null())
        c.refuting_object = string_member(j, "refuting_object");
    c.evidence = count_or(j, "evidence");
    c.excluded = count_or(j, "excluded");
    c.slack = count_or(j, "slack");
    c.touches = count_or(j, "touches");
    if ((c.body.type() == Type::Number) != is_bound_mode(c.mode))
        throw Error(ErrorCode::TypeError, "body type does not fit mode " + std::string(to_string(c.mode)));
    return c;
}

Json to_json(const ProofSketch& s)
{
    Json lines = Json::array();
    for (const auto& l : s.lines)
        lines.push_back(Json{{"antecedents", l.antecedents}, {"consequent", l.consequent}, {"evidence", l.evidence}});
    Json augmented = Json::array();
    for (const auto& t : s.augmented_with)
        augmented.push_back(to_json(t));
    return Json{{"domain", s.domain},
                {"hypothesis", s.hypothesis},
                {"conclusion", s.conclusion},
                {"lines", std::move(lines)},
                {"termination_reason", to_string(s.termination_reason)},
                {"augmented_with", std::move(augmented)}};
}

ProofSketch sketch_from_json(const Json& j)
{
    ProofSketch s;
    s.domain = string_or(j, "domain", "graph");
    s.hypothesis = string_member(j, "hypothesis");
    s.conclusion = string_member(j, "conclusion");
    const Json& lines = member(j, "lines");
    if (!lines.is_array())
        throw Error(ErrorCode::MalformedPayload, "field 'lines' must be a list");
    for (const auto& l : lines)
        s.lines.push_back({string_list(l, "antecedents"), string_member(l, "consequent"), count_or(l, "evidence")});
    s.termination_reason = termination_reason_from_string(string_member(j, "termination_reason"));
    if (j.contains("augmented_with"))
        for (const auto& t : j.at("augmented_with"))
            s.augmented_with.push_back(theorem_from_json(t));
    return s;
}

Json to_json(const Signature& sig)
{
    Json atoms = Json::array();
    for (const auto& a : sig.atoms)
        atoms.push_back(a.name);
    Json unary = Json::array(), binary = Json::array(), comparators = Json::array(), constants = Json::array();
    for (Op op : sig.unary)
        unary.push_back(op_name(op));
    for (Op op : sig.binary)
        (is_comparator(op) ? comparators : binary).push_back(op_name(op));
    for (const auto& c : sig.constants)
        constants.push_back(c.to_string());
    return Json{{"atoms", std::move(atoms)},
                {"unary", std::move(unary)},
                {"binary", std::move(binary)},
                {"comparators", std::move(comparators)},
                {"constants", std::move(constants)}};
}

Signature signature_from_json(const Json& j, const KnowledgeBase& kb, ConjectureMode mode)
{
    Signature sig = default_signature(kb, mode);
    if (j.is_null())
        return sig;
    if (!j.is_object())
        throw Error(ErrorCode::MalformedPayload, "signature must be an object");
    if (j.contains("atoms")) {
        sig.atoms.clear();
        for (const auto& name : string_list(j, "atoms"))
            sig.atoms.push_back({name, kb.concept_entry(name).type()});
    }
    auto ops = [&](const char* key, bool want_unary, std::vector<Op>& out) {
        for (const auto& x : member(j, key)) {
            Op op = op_from_json(x);
            if (is_unary(op) != want_unary)
                throw Error(ErrorCode::InvalidArgument, "operator '" + x.get<std::string>() + "' is misplaced in '" + key + "'");
            out.push_back(op);
        }
    };
    if (j.contains("unary")) {
        sig.unary.clear();
        ops("unary", true, sig.unary);
    }
    if (j.contains("binary") || j.contains("comparators")) {
        std::vector<Op> kept;
        for (Op op : sig.binary)
            if ((is_comparator(op) && !j.contains("comparators")) || (!is_comparator(op) && !j.contains("binary")))
                kept.push_back(op);
        if (j.contains("binary"))
            ops("binary", false, kept);
        if (j.contains("comparators"))
            ops("comparators", false, kept);
        sig.binary = std::move(kept);
    }
    if (j.contains("constants")) {
        sig.constants.clear();
        for (const auto& x : member(j, "constants")) {
            std::optional<Rational> r;
            if (x.is_number_integer())
                r = Rational{x.get<std::int64_t>()};
            else if (x.is_string())
                r = Rational::parse(x.get<std::string>());
            if (!r)
                throw Error(ErrorCode::InvalidArgument, "bad constant " + x.dump());
            sig.constants.push_back(*r);
        }
    }
    return sig;
}

Json error_json(const Error& e)
{
    return Json{{"code", to_string(e.code())}, {"message", e.what()}, {"detail", e.detail()}};
}

std::chrono::milliseconds parse_duration(std::string_view text)
{
    auto bad = [&] {
        return Error(ErrorCode::InvalidArgument, "bad duration '" + std::string(text) + "' (use e.g. 500ms, 5s, 1m)");
    };
    std::size_t i = 0;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'))
        ++i;
    if (i == 0)
        throw bad();
    double amount = 0;
    try {
        amount = std::stod(std::string(text.substr(0, i)));
    } catch (const std::exception&) {
        throw bad();
    }
    std::string_view unit = text.substr(i);
    double ms = 0;
    if (unit == "ms")
        ms = amount;
    else if (unit == "s" || unit.empty())
        ms = amount * 1000;
    else if (unit == "m" || unit == "min")
        ms = amount * 60'000;
    else
        throw bad();
    if (ms > 1e12)
        throw bad();
    return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

} // namespace cforge
