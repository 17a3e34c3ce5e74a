#include "cforge/verify.hpp"

#include "cforge/error.hpp"

namespace cforge {

namespace {

// Straight recursive evaluation with no memoization.
Value fresh_value(const KnowledgeBase& kb, const Expr& e, const MathObject& obj);

Value fresh_concept(const KnowledgeBase& kb, std::string_view name, const MathObject& obj)
{
    const auto& entry = kb.concept_entry(name);
    try {
        if (entry.definition)
            return fresh_value(kb, *entry.definition, obj);
        return kb.domain().evaluate(entry.name, *obj.payload);
    } catch (const Error& err) {
        if (err.code() != ErrorCode::SizeCapExceeded)
            throw;
        return Value::undefined();
    }
}

Value fresh_value(const KnowledgeBase& kb, const Expr& e, const MathObject& obj)
{
    return evaluate(e, [&](std::string_view name) { return fresh_concept(kb, name, obj); });
}

Expr term(const KnowledgeBase& kb, const std::string& text) { return sketch_term(kb, text); }

} // namespace

VerifyReport verify_conjectures(const KnowledgeBase& kb, const std::vector<Conjecture>& conjectures)
{
    VerifyReport report;
    for (std::size_t i = 0; i < conjectures.size(); ++i) {
        const auto& c = conjectures[i];
        if (c.status == ConjectureStatus::Refuted)
            continue;
        ++report.claims;
        Expr claim = c.claim(kb);
        for (const auto& obj : kb.objects()) {
            Value v = fresh_value(kb, claim, *obj);
            if (v.is_undefined()) {
                ++report.excluded;
                continue;
            }
            ++report.checks;
            if (!v.is_true()) {
                report.failures.push_back({"conjecture " + std::to_string(i + 1), claim.to_string(), obj->name()});
                break;
            }
        }
    }
    return report;
}

VerifyReport verify_sketch(const KnowledgeBase& kb, const ProofSketch& sketch)
{
    VerifyReport report;
    for (std::size_t i = 0; i < sketch.lines.size(); ++i) {
        const auto& line = sketch.lines[i];
        ++report.claims;
        std::vector<Expr> antecedents;
        for (const auto& a : line.antecedents)
            antecedents.push_back(term(kb, a));
        Expr consequent = term(kb, line.consequent);
        std::string claim;
        for (const auto& a : line.antecedents)
            claim += (claim.empty() ? "" : " & ") + a;
        claim += " -> " + line.consequent;
        for (const auto& obj : kb.objects()) {
            bool holds = true;
            for (const auto& a : antecedents)
                holds = holds && fresh_value(kb, a, *obj).is_true();
            if (!holds) {
                ++report.excluded;
                continue;
            }
            ++report.checks;
            if (!fresh_value(kb, consequent, *obj).is_true()) {
                report.failures.push_back({"sketch line " + std::to_string(i + 1), claim, obj->name()});
                break;
            }
        }
    }
    if (!sketch.lines.empty() && sketch.lines.back().consequent != sketch.conclusion)
        report.failures.push_back({"sketch", "final consequent is " + sketch.lines.back().consequent,
                                   "expected " + sketch.conclusion});
    return report;
}

} // namespace cforge
