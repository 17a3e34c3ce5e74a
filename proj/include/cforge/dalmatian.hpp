#pragma once

#include "cforge/enumerate.hpp"
#include "cforge/expr.hpp"
#include "cforge/kb.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace cforge {

enum class ConjectureMode { UpperBound, LowerBound, Necessary, Sufficient };
enum class ConjectureStatus { Open, Proved, Refuted };

std::string_view to_string(ConjectureMode mode);
std::string_view to_string(ConjectureStatus status);
ConjectureMode conjecture_mode_from_string(std::string_view text);
ConjectureStatus conjecture_status_from_string(std::string_view text);
bool is_bound_mode(ConjectureMode mode);

struct Conjecture {
    ConjectureMode mode = ConjectureMode::Necessary;
    std::string target;
    Expr body = Expr::boolean(true);
    std::string domain;
    ConjectureStatus status = ConjectureStatus::Open;
    // Name of the stored object that violates the claim.
    std::optional<std::string> refuting_object;

    // Report fields, computed against the KB the conjecture was made on.
    // Condition modes: objects satisfying the antecedent. Bound modes: objects
    // on which both sides are defined.
    std::size_t evidence = 0;
    // Objects dropped because some side was Undefined.
    std::size_t excluded = 0;
    // Condition modes only.
    std::size_t slack = 0;
    // Bound modes only: objects where the bound is attained.
    std::size_t touches = 0;

    // The universally quantified claim as a boolean expression over x.
    Expr claim(const KnowledgeBase& kb) const;
    // Identity used for refutation permanence: mode, target, canonical body.
    std::string key() const;
};

struct GenerationBudget {
    int max_complexity = kDefaultMaxComplexity;
    std::chrono::milliseconds timeout{5000};
};

struct ConjectureRun {
    // Ranked best first.
    std::vector<Conjecture> accepted;
    std::size_t objects = 0;
    std::size_t in_scope = 0;
    std::size_t candidates = 0;
    std::size_t max_store_size = 0;
    EnumerationStats stats;
    bool timed_out = false;
};

enum class Offer { Accepted, FailsTruth, NoEvidence, Insignificant };

// Bound-mode acceptance state: truth against the target column, strict
// improvement of the aggregate on some object, then pruning of every stored
// bound that is no longer the unique tightest one anywhere (oldest first).
class BoundStore {
public:
    struct Entry {
        std::size_t key;
        std::vector<Value> values;
    };

    BoundStore(std::vector<Value> target, ConjectureMode mode);

    Offer offer(std::size_t key, const std::vector<Value>& values);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    // Pointwise min of upper bounds (max of lower bounds); nullopt = unbounded.
    const std::vector<std::optional<Rational>>& aggregate() const noexcept { return aggregate_; }

private:
    bool tighter(const Rational& a, const Rational& b) const { return upper_ ? a < b : b < a; }
    void prune();
    void recompute();

    std::vector<Value> target_;
    bool upper_;
    std::vector<Entry> entries_;
    std::vector<std::optional<Rational>> aggregate_;
};

// Condition-mode acceptance state: truth, evidence >= 1, one entry per
// satisfied set, best `capacity` kept by (slack, complexity, text).
class ConditionStore {
public:
    struct Entry {
        std::size_t key;
        std::size_t slack;
        int complexity;
        std::string text;
        std::vector<bool> satisfied;
        std::size_t evidence;
        std::size_t excluded;
    };

    ConditionStore(std::vector<Value> target, ConjectureMode mode, std::size_t capacity);

    Offer offer(std::size_t key, int complexity, const std::vector<Value>& values,
                const std::function<std::string()>& text);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t capacity() const noexcept { return capacity_; }

private:
    static bool better(const Entry& a, const Entry& b);

    std::vector<Value> target_;
    bool necessary_;
    std::size_t capacity_;
    std::vector<Entry> entries_;
};

// Default operator sets: bound modes combine invariants arithmetically,
// condition modes combine properties with not/and/or.
Signature default_signature(const KnowledgeBase& kb, ConjectureMode mode);

// Throughput reference for graphs: every stored invariant plus
// is_hamiltonian (ten atoms), not/and/or, <=, plus, min and the default
// constants.
Signature benchmark_signature(const KnowledgeBase& kb);

// Throws NoEligibleObjects, EmptySignature, TypeError, UnknownConcept,
// ComplexityOutOfRange.
ConjectureRun generate_bound_conjectures(const KnowledgeBase& kb, const std::string& target, ConjectureMode mode,
                                         const Signature& sig, const GenerationBudget& budget);

// Throws VacuousHypothesis, EmptySignature, TypeError, UnknownConcept,
// ComplexityOutOfRange.
ConjectureRun generate_condition_conjectures(const KnowledgeBase& kb, const std::string& target, ConjectureMode mode,
                                             const Signature& sig, const GenerationBudget& budget);

// Dispatches on the mode.
ConjectureRun generate_conjectures(const KnowledgeBase& kb, const std::string& target, ConjectureMode mode,
                                   const Signature& sig, const GenerationBudget& budget);

struct RecheckResult {
    ConjectureStatus status = ConjectureStatus::Open;
    std::optional<std::size_t> witness;
    std::size_t evidence = 0;
    std::size_t excluded = 0;
    // True when no stored object is in scope, so the claim holds vacuously.
    bool zero_evidence = false;
};

RecheckResult recheck_conjecture(const Conjecture& c, const KnowledgeBase& kb);

// Claim value of `c` on one object, for counterexample validation.
Value claim_value(const Conjecture& c, const KnowledgeBase& kb, const MathObject& obj);

// One line, e.g. "∀ graphs x: hamiltonian(x) → biconnected(x)  [evidence: 12/12, slack: 0, complexity: 1]".
std::string render_conjecture(const Conjecture& c, const KnowledgeBase& kb);

// Infix rendering with concept applications written name(x).
std::string render_infix(const Expr& e);

} // namespace cforge
