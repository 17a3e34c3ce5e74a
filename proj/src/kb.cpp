#include "cforge/kb.hpp"

#include "cforge/error.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>

namespace cforge {

namespace {

std::uint64_t next_serial()
{
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
}

template <typename E, std::size_t N>
E from_table(const std::array<std::string_view, N>& names, std::string_view text, const char* what)
{
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == text)
            return static_cast<E>(i);
    throw Error(ErrorCode::InvalidArgument, "unknown " + std::string(what) + " '" + std::string(text) + "'");
}

constexpr std::array<std::string_view, 3> kOrigins{"seed-catalog", "user", "counterexample"};
constexpr std::array<std::string_view, 3> kProvenances{"builtin", "user", "promoted-theorem"};
constexpr std::array<std::string_view, 2> kSources{"user-proved", "imported"};

} // namespace

std::string_view to_string(ObjectOrigin origin) { return kOrigins[static_cast<std::size_t>(origin)]; }
std::string_view to_string(ConceptProvenance p) { return kProvenances[static_cast<std::size_t>(p)]; }
std::string_view to_string(TheoremSource s) { return kSources[static_cast<std::size_t>(s)]; }

ObjectOrigin object_origin_from_string(std::string_view text)
{
    return from_table<ObjectOrigin>(kOrigins, text, "object origin");
}

ConceptProvenance concept_provenance_from_string(std::string_view text)
{
    return from_table<ConceptProvenance>(kProvenances, text, "concept provenance");
}

TheoremSource theorem_source_from_string(std::string_view text)
{
    return from_table<TheoremSource>(kSources, text, "theorem source");
}

MathObject MathObject::parse(const Domain& domain, std::string_view encoding, std::string label, ObjectOrigin origin)
{
    return from_payload(domain, domain.parse(encoding), std::move(label), origin);
}

MathObject MathObject::from_payload(const Domain& domain, Payload payload, std::string label, ObjectOrigin origin)
{
    if (!domain.owns(payload))
        throw Error(ErrorCode::DomainMismatch, "object does not belong to domain " + std::string(domain.tag()));
    MathObject obj;
    obj.domain = std::string(domain.tag());
    obj.encoding = domain.encode(payload);
    obj.certificate = domain.certificate(payload);
    obj.payload = std::make_shared<const Payload>(std::move(payload));
    obj.label = std::move(label);
    obj.origin = origin;
    return obj;
}

std::optional<Value> ValueCache::find(std::uint64_t serial, const std::string& certificate) const
{
    std::lock_guard lock(mutex_);
    auto it = values_.find({serial, certificate});
    if (it == values_.end())
        return std::nullopt;
    return it->second;
}

void ValueCache::store(std::uint64_t serial, const std::string& certificate, const Value& v)
{
    std::lock_guard lock(mutex_);
    values_.try_emplace({serial, certificate}, v);
}

std::size_t ValueCache::size() const
{
    std::lock_guard lock(mutex_);
    return values_.size();
}

std::vector<std::pair<std::pair<std::uint64_t, std::string>, Value>> ValueCache::entries() const
{
    std::lock_guard lock(mutex_);
    return {values_.begin(), values_.end()};
}

KnowledgeBase::KnowledgeBase(const Domain& domain) : cache_(std::make_shared<ValueCache>())
{
    auto state = std::make_shared<State>();
    state->domain = &domain;
    for (const auto& info : domain.builtin_concepts()) {
        ConceptEntry entry;
        entry.name = info.name;
        entry.kind = info.kind;
        entry.provenance = ConceptProvenance::Builtin;
        entry.description = info.description;
        entry.serial = next_serial();
        state->concept_index.emplace(entry.name, state->concepts.size());
        state->concepts.push_back(std::move(entry));
    }
    state_ = std::move(state);
}

const ConceptEntry* KnowledgeBase::find_concept(std::string_view name) const
{
    auto it = state_->concept_index.find(std::string(name));
    return it == state_->concept_index.end() ? nullptr : &state_->concepts[it->second];
}

const ConceptEntry& KnowledgeBase::concept_entry(std::string_view name) const
{
    if (const auto* c = find_concept(name))
        return *c;
    throw Error(ErrorCode::UnknownConcept, "unknown concept '" + std::string(name) + "'", std::string(name));
}

std::optional<std::size_t> KnowledgeBase::find_object(const std::string& certificate) const
{
    auto it = state_->by_certificate.find(certificate);
    if (it == state_->by_certificate.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::size_t> KnowledgeBase::find_object_by_label(std::string_view label) const
{
    for (std::size_t i = 0; i < state_->objects.size(); ++i)
        if (state_->objects[i]->label == label)
            return i;
    return std::nullopt;
}

KnowledgeBase::Added KnowledgeBase::add_object(MathObject obj) const
{
    if (obj.domain != domain().tag() || !obj.payload || !domain().owns(*obj.payload))
        throw Error(ErrorCode::DomainMismatch,
                    "object of domain '" + obj.domain + "' added to a " + std::string(domain().tag()) + " knowledge base");
    if (auto existing = find_object(obj.certificate))
        return {*this, true, *existing};
    auto state = std::make_shared<State>(*state_);
    std::size_t index = state->objects.size();
    state->by_certificate.emplace(obj.certificate, index);
    state->objects.push_back(std::make_shared<const MathObject>(std::move(obj)));
    return {KnowledgeBase(std::move(state), cache_), false, index};
}

std::optional<std::size_t> KnowledgeBase::theorem_witness(const TheoremRecord& thm) const
{
    const auto& objects = state_->objects;
    std::vector<bool> in(objects.size(), true);
    for (const auto& h : thm.hypothesis) {
        auto col = column(h);
        for (std::size_t i = 0; i < objects.size(); ++i)
            in[i] = in[i] && col[i].is_true();
    }
    auto conclusion = column(thm.conclusion);
    for (std::size_t i = 0; i < objects.size(); ++i)
        if (in[i] && !conclusion[i].is_true())
            return i;
    return std::nullopt;
}

KnowledgeBase KnowledgeBase::add_theorem(TheoremRecord thm) const
{
    std::vector<std::string> names = thm.hypothesis;
    names.push_back(thm.conclusion);
    for (const auto& n : names)
        if (concept_entry(n).kind != ConceptKind::Property)
            throw Error(ErrorCode::TypeError, "theorem references invariant '" + n + "'; properties are required", n);
    if (auto w = theorem_witness(thm)) {
        const auto& obj = *state_->objects[*w];
        throw Error(ErrorCode::RefutedByStoredObject,
                    "theorem fails on stored object " + obj.name(), obj.name());
    }
    if (std::find(state_->theorems.begin(), state_->theorems.end(), thm) != state_->theorems.end())
        return *this;
    auto state = std::make_shared<State>(*state_);
    state->theorems.push_back(std::move(thm));
    return KnowledgeBase(std::move(state), cache_);
}

KnowledgeBase KnowledgeBase::add_concept(std::string name, const Expr& definition, ConceptProvenance provenance,
                                         std::string description) const
{
    if (find_concept(name))
        throw Error(ErrorCode::InvalidArgument, "concept '" + name + "' already exists", name);
    if (name.empty() || !std::all_of(name.begin(), name.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }) ||
        std::isdigit(static_cast<unsigned char>(name[0])) || name == "true" || name == "false")
        throw Error(ErrorCode::InvalidArgument, "bad concept name '" + name + "'", name);
    // Re-typecheck against the registry; a stale type in the tree would evaluate wrongly.
    Expr checked = cforge::parse_expression(definition.to_string(), atom_types());

    ConceptEntry entry;
    entry.name = std::move(name);
    entry.kind = checked.type() == Type::Boolean ? ConceptKind::Property : ConceptKind::Invariant;
    entry.provenance = provenance;
    entry.description = std::move(description);
    entry.definition = checked;
    entry.serial = next_serial();
    auto state = std::make_shared<State>(*state_);
    state->concept_index.emplace(entry.name, state->concepts.size());
    state->concepts.push_back(std::move(entry));
    return KnowledgeBase(std::move(state), cache_);
}

Value KnowledgeBase::evaluate_entry(const ConceptEntry& entry, const MathObject& obj) const
{
    if (auto hit = cache_->find(entry.serial, obj.certificate))
        return *hit;
    Value v = entry.definition ? evaluate(*entry.definition, obj) : domain().evaluate(entry.name, *obj.payload);
    cache_->store(entry.serial, obj.certificate, v);
    return v;
}

Value KnowledgeBase::evaluate(std::string_view concept_name, const MathObject& obj) const
{
    if (obj.domain != domain().tag() || !obj.payload)
        throw Error(ErrorCode::DomainMismatch,
                    "cannot evaluate a " + obj.domain + " object in a " + std::string(domain().tag()) + " knowledge base");
    return evaluate_entry(concept_entry(concept_name), obj);
}

Value KnowledgeBase::evaluate(const Expr& e, const MathObject& obj) const
{
    return cforge::evaluate(e, [&](std::string_view name) { return evaluate(name, obj); });
}

std::vector<Value> KnowledgeBase::column(std::string_view concept_name) const
{
    const auto& entry = concept_entry(concept_name);
    std::vector<Value> out;
    out.reserve(state_->objects.size());
    for (const auto& obj : state_->objects) {
        try {
            out.push_back(evaluate_entry(entry, *obj));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SizeCapExceeded)
                throw;
            out.push_back(Value::undefined());
        }
    }
    return out;
}

AtomTypeLookup KnowledgeBase::atom_types() const
{
    auto state = state_;
    return [state](std::string_view name) -> std::optional<Type> {
        auto it = state->concept_index.find(std::string(name));
        if (it == state->concept_index.end())
            return std::nullopt;
        return state->concepts[it->second].type();
    };
}

Expr KnowledgeBase::parse_expression(std::string_view text) const
{
    return cforge::parse_expression(text, atom_types());
}

} // namespace cforge
