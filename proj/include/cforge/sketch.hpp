#pragma once

#include "cforge/enumerate.hpp"
#include "cforge/kb.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace cforge {

enum class TerminationReason { QReached, Timeout, NoProgress, MaxLines };

std::string_view to_string(TerminationReason reason);
TerminationReason termination_reason_from_string(std::string_view text);

struct ProofLine {
    // Conjunction, each entry a concept name or prefix expression text.
    std::vector<std::string> antecedents;
    std::string consequent;
    // Stored objects satisfying every antecedent (all satisfy the consequent).
    std::size_t evidence = 0;

    friend bool operator==(const ProofLine&, const ProofLine&) = default;
};

struct ProofSketch {
    std::string domain;
    std::string hypothesis;
    std::string conclusion;
    std::vector<ProofLine> lines;
    TerminationReason termination_reason = TerminationReason::NoProgress;
    std::vector<TheoremRecord> augmented_with;

    friend bool operator==(const ProofSketch&, const ProofSketch&) = default;
};

struct SketchConfig {
    // Per line; the first line's clock also covers table preparation.
    std::chrono::milliseconds timeout{5000};
    int max_complexity = kDefaultMaxComplexity;
    // Includes the final line to the conclusion.
    int max_lines = 8;
    // Candidate building blocks; defaults to every property with not/and/or.
    std::optional<Signature> signature;
};

// P followed by the conclusions of stored theorems whose hypotheses hold on
// every stored object satisfying P, in theorem order without repeats.
std::vector<std::string> augment_hypothesis(const KnowledgeBase& kb, const std::string& P,
                                            std::vector<TheoremRecord>* used = nullptr);

// Throws RefutedTarget (witness name in detail), VacuousHypothesis,
// UnknownConcept, TypeError.
ProofSketch generate_sketch(const KnowledgeBase& kb, const std::string& P, const std::string& Q,
                            const SketchConfig& config = {});

// Numbered sentences, one per line, the last starting "Therefore".
std::string render_sketch(const ProofSketch& s, const KnowledgeBase& kb);

// Expression over the KB's concepts for a line entry.
Expr sketch_term(const KnowledgeBase& kb, const std::string& text);

} // namespace cforge
