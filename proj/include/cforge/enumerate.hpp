#pragma once

#include "cforge/arena.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cforge {

inline constexpr int kMaxEnumerationComplexity = 12;
inline constexpr int kDefaultMaxComplexity = 7;

struct SignatureAtom {
    std::string name;
    Type type;
};

// Building blocks for enumeration. `binary` holds binary operators and
// comparators alike.
struct Signature {
    std::vector<SignatureAtom> atoms;
    std::vector<Op> unary;
    std::vector<Op> binary;
    std::vector<Rational> constants;

    // Throws EmptySignature when there are no atoms, TypeError when an
    // operator can never receive operands of its type, InvalidArgument on
    // duplicates or misplaced operators.
    void validate() const;

    bool has_op(Op op) const;

    static std::vector<Rational> default_constants();
};

using Deadline = std::chrono::steady_clock::time_point;

struct EnumerationStats {
    int max_complexity = 0;
    // Index k holds level k; index 0 is unused.
    std::vector<std::uint64_t> raw;
    std::vector<std::uint64_t> raw_boolean;
    std::vector<std::uint64_t> raw_number;
    std::vector<std::uint64_t> emitted;
    std::uint64_t total_emitted = 0;
    bool timed_out = false;
    bool stopped = false;
    int completed_levels = 0;
};

// Receives each canonical representative once, in level order. Returning
// false stops enumeration.
using ExprSink = std::function<bool(NodeId)>;

// Streams one representative per canonical class of every type-correct
// expression with at most `max_complexity` nodes. Level k combines unary
// operators on level k-1 with binary operators over (i, k-1-i) splits.
// Throws ComplexityOutOfRange outside 1..12.
EnumerationStats enumerate(ExprArena& arena, const Signature& sig, int max_complexity, const ExprSink& sink,
                           std::optional<Deadline> deadline = std::nullopt);

// Raw (pre-canonicalization) tree counts per level from the recurrence.
EnumerationStats raw_counts(const Signature& sig, int max_complexity);

} // namespace cforge
