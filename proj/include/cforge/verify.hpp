#pragma once

#include "cforge/dalmatian.hpp"
#include "cforge/kb.hpp"
#include "cforge/sketch.hpp"

#include <string>
#include <vector>

namespace cforge {

struct VerifyFailure {
    // "conjecture 3" or "sketch line 2".
    std::string subject;
    std::string claim;
    std::string witness;
};

struct VerifyReport {
    std::size_t claims = 0;
    // (claim, object) pairs on which the claim was defined and checked.
    std::size_t checks = 0;
    std::size_t excluded = 0;
    std::vector<VerifyFailure> failures;

    bool ok() const noexcept { return failures.empty(); }
};

// Re-evaluates every claim on every stored object from the domain's raw
// evaluators, bypassing the value cache and the expression arena. Refuted
// conjectures are skipped.
VerifyReport verify_conjectures(const KnowledgeBase& kb, const std::vector<Conjecture>& conjectures);
VerifyReport verify_sketch(const KnowledgeBase& kb, const ProofSketch& sketch);

} // namespace cforge
