#pragma once

#include "cforge/concept.hpp"
#include "cforge/domain.hpp"
#include "cforge/expr.hpp"
#include "cforge/value.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cforge {

enum class ObjectOrigin { SeedCatalog, User, Counterexample };
enum class ConceptProvenance { Builtin, User, PromotedTheorem };
enum class TheoremSource { UserProved, Imported };

std::string_view to_string(ObjectOrigin origin);
std::string_view to_string(ConceptProvenance provenance);
std::string_view to_string(TheoremSource source);
ObjectOrigin object_origin_from_string(std::string_view text);
ConceptProvenance concept_provenance_from_string(std::string_view text);
TheoremSource theorem_source_from_string(std::string_view text);

struct MathObject {
    std::string domain;
    std::shared_ptr<const Payload> payload;
    // Normalized encoding (graph6 for graphs, decimal for integers).
    std::string encoding;
    std::string certificate;
    std::string label;
    ObjectOrigin origin = ObjectOrigin::User;

    // Parses and validates `encoding`; payload errors propagate unchanged.
    static MathObject parse(const Domain& domain, std::string_view encoding, std::string label = {},
                            ObjectOrigin origin = ObjectOrigin::User);
    static MathObject from_payload(const Domain& domain, Payload payload, std::string label = {},
                                   ObjectOrigin origin = ObjectOrigin::User);

    // Label when present, otherwise the encoding.
    const std::string& name() const { return label.empty() ? encoding : label; }
};

using ObjectPtr = std::shared_ptr<const MathObject>;

struct ConceptEntry {
    std::string name;
    ConceptKind kind = ConceptKind::Property;
    ConceptProvenance provenance = ConceptProvenance::Builtin;
    std::string description;
    // Present for user and promoted concepts, evaluated over other concepts.
    std::optional<Expr> definition;
    // Distinguishes same-named concepts on diverging snapshots in the shared cache.
    std::uint64_t serial = 0;

    Type type() const { return kind == ConceptKind::Property ? Type::Boolean : Type::Number; }
};

struct TheoremRecord {
    std::vector<std::string> hypothesis;
    std::string conclusion;
    TheoremSource source = TheoremSource::UserProved;

    friend bool operator==(const TheoremRecord&, const TheoremRecord&) = default;
};

// Memo of (concept, object certificate) -> value shared by every snapshot of
// one knowledge-base lineage. Writes are idempotent, so concurrent fills are safe.
class ValueCache {
public:
    std::optional<Value> find(std::uint64_t serial, const std::string& certificate) const;
    void store(std::uint64_t serial, const std::string& certificate, const Value& v);
    std::size_t size() const;
    // Snapshot of all entries, for coherence checks.
    std::vector<std::pair<std::pair<std::uint64_t, std::string>, Value>> entries() const;

private:
    mutable std::mutex mutex_;
    std::map<std::pair<std::uint64_t, std::string>, Value> values_;
};

// Immutable snapshot. Mutators return a new snapshot and leave this one intact.
class KnowledgeBase {
public:
    explicit KnowledgeBase(const Domain& domain);

    const Domain& domain() const noexcept { return *state_->domain; }
    const std::vector<ObjectPtr>& objects() const noexcept { return state_->objects; }
    const std::vector<ConceptEntry>& concepts() const noexcept { return state_->concepts; }
    const std::vector<TheoremRecord>& theorems() const noexcept { return state_->theorems; }
    const ValueCache& cache() const noexcept { return *cache_; }

    const ConceptEntry* find_concept(std::string_view name) const;
    // Throws UnknownConcept.
    const ConceptEntry& concept_entry(std::string_view name) const;
    std::optional<std::size_t> find_object(const std::string& certificate) const;
    std::optional<std::size_t> find_object_by_label(std::string_view label) const;

    struct Added;
    // Throws DomainMismatch.
    Added add_object(MathObject obj) const;

    // Throws UnknownConcept, TypeError (non-property reference) or
    // RefutedByStoredObject with the witness label in the detail.
    KnowledgeBase add_theorem(TheoremRecord thm) const;

    // Registers a concept defined by an expression over existing concepts.
    // Throws InvalidArgument on a name clash, UnknownConcept on a bad reference.
    KnowledgeBase add_concept(std::string name, const Expr& definition, ConceptProvenance provenance,
                              std::string description = {}) const;

    // Throws UnknownConcept, DomainMismatch, SizeCapExceeded.
    Value evaluate(std::string_view concept_name, const MathObject& obj) const;
    Value evaluate(const Expr& e, const MathObject& obj) const;

    // Values over all stored objects. Objects beyond a concept's size cap
    // read as Undefined, which removes them from every claim's scope.
    std::vector<Value> column(std::string_view concept_name) const;

    AtomTypeLookup atom_types() const;
    Expr parse_expression(std::string_view text) const;

    // Theorem whose hypothesis is satisfied but conclusion is not, if any.
    std::optional<std::size_t> theorem_witness(const TheoremRecord& thm) const;

private:
    struct State {
        const Domain* domain = nullptr;
        std::vector<ObjectPtr> objects;
        std::unordered_map<std::string, std::size_t> by_certificate;
        std::vector<ConceptEntry> concepts;
        std::unordered_map<std::string, std::size_t> concept_index;
        std::vector<TheoremRecord> theorems;
    };

    KnowledgeBase(std::shared_ptr<const State> state, std::shared_ptr<ValueCache> cache)
        : state_(std::move(state)), cache_(std::move(cache))
    {
    }

    Value evaluate_entry(const ConceptEntry& entry, const MathObject& obj) const;

    std::shared_ptr<const State> state_;
    std::shared_ptr<ValueCache> cache_;
};

// Position of the stored object is the pre-existing one on duplicate.
struct KnowledgeBase::Added {
    KnowledgeBase kb;
    bool duplicate = false;
    std::size_t index = 0;
};

} // namespace cforge
