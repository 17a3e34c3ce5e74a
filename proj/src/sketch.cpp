#include "cforge/sketch.hpp"

#include "cforge/arena.hpp"
#include "cforge/dalmatian.hpp"
#include "cforge/error.hpp"

#include <algorithm>
#include <array>
#include <tuple>

namespace cforge {

namespace {

using Clock = std::chrono::steady_clock;
using Mask = std::vector<bool>;

constexpr std::array<std::string_view, 4> kReasons{"q-reached", "timeout", "no-progress", "max-lines"};

Mask true_mask(const std::vector<Value>& col)
{
    Mask m(col.size());
    for (std::size_t i = 0; i < col.size(); ++i)
        m[i] = col[i].is_true();
    return m;
}

std::size_t count(const Mask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), true)); }

bool subset(const Mask& a, const Mask& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i])
            return false;
    return true;
}

std::string clause(const KnowledgeBase& kb, const std::string& text)
{
    if (const auto* c = kb.find_concept(text); c && !c->description.empty())
        return c->description;
    return render_infix(sketch_term(kb, text)) + " holds";
}

std::string conjunction(const std::vector<std::string>& parts)
{
    if (parts.size() == 1)
        return parts[0];
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0)
            out += i + 1 == parts.size() ? ", and " : ", ";
        out += parts[i];
    }
    return out;
}

std::string sentence(const KnowledgeBase& kb, const std::vector<std::string>& antecedents, const std::string& consequent)
{
    std::vector<std::string> clauses;
    for (const auto& a : antecedents)
        clauses.push_back(clause(kb, a));
    std::string noun(kb.domain().noun());
    noun.pop_back();
    return "for every " + noun + " x, if " + conjunction(clauses) + ", then " + clause(kb, consequent) + ".";
}

} // namespace

std::string_view to_string(TerminationReason reason) { return kReasons[static_cast<std::size_t>(reason)]; }

TerminationReason termination_reason_from_string(std::string_view text)
{
    for (std::size_t i = 0; i < kReasons.size(); ++i)
        if (kReasons[i] == text)
            return static_cast<TerminationReason>(i);
    throw Error(ErrorCode::InvalidArgument, "unknown termination reason '" + std::string(text) + "'");
}

Expr sketch_term(const KnowledgeBase& kb, const std::string& text)
{
    if (const auto* c = kb.find_concept(text))
        return Expr::atom(c->name, c->type());
    return kb.parse_expression(text);
}

std::vector<std::string> augment_hypothesis(const KnowledgeBase& kb, const std::string& P,
                                            std::vector<TheoremRecord>* used)
{
    std::vector<std::string> out{P};
    Mask sat_p = true_mask(kb.column(P));
    for (const auto& thm : kb.theorems()) {
        Mask sat_h(sat_p.size(), true);
        for (const auto& h : thm.hypothesis) {
            Mask m = true_mask(kb.column(h));
            for (std::size_t i = 0; i < m.size(); ++i)
                sat_h[i] = sat_h[i] && m[i];
        }
        if (!subset(sat_p, sat_h))
            continue;
        if (used)
            used->push_back(thm);
        if (std::find(out.begin(), out.end(), thm.conclusion) == out.end())
            out.push_back(thm.conclusion);
    }
    return out;
}

ProofSketch generate_sketch(const KnowledgeBase& kb, const std::string& P, const std::string& Q,
                            const SketchConfig& config)
{
    auto deadline = Clock::now() + config.timeout;
    for (const auto* name : {&P, &Q})
        if (kb.concept_entry(*name).kind != ConceptKind::Property)
            throw Error(ErrorCode::TypeError, "'" + *name + "' is not a property", *name);
    if (config.max_lines < 1)
        throw Error(ErrorCode::InvalidArgument, "max_lines must be at least 1");
    if (config.max_complexity < 1 || config.max_complexity > kMaxEnumerationComplexity)
        throw Error(ErrorCode::ComplexityOutOfRange,
                    "max complexity must be between 1 and " + std::to_string(kMaxEnumerationComplexity));

    const auto& objects = kb.objects();
    const std::size_t n = objects.size();
    Mask sat_p = true_mask(kb.column(P));
    Mask sat_q = true_mask(kb.column(Q));
    if (count(sat_p) == 0)
        throw Error(ErrorCode::VacuousHypothesis, "no stored object satisfies '" + P + "'", P);
    for (std::size_t i = 0; i < n; ++i)
        if (sat_p[i] && !sat_q[i])
            throw Error(ErrorCode::RefutedTarget,
                        "stored object " + objects[i]->name() + " satisfies " + P + " but not " + Q, objects[i]->name());

    ProofSketch sketch;
    sketch.domain = std::string(kb.domain().tag());
    sketch.hypothesis = P;
    sketch.conclusion = Q;
    std::vector<std::string> antecedents = augment_hypothesis(kb, P, &sketch.augmented_with);

    // sat_h: objects satisfying every antecedent. progress: objects
    // satisfying every antecedent other than P itself; each new line must
    // shrink it, and once it lies inside sat(Q) the chain is complete.
    Mask sat_h = sat_p;
    Mask progress(n, true);
    for (std::size_t k = 1; k < antecedents.size(); ++k) {
        Mask m = true_mask(kb.column(antecedents[k]));
        for (std::size_t i = 0; i < n; ++i)
            progress[i] = progress[i] && m[i];
    }

    Signature sig = config.signature ? *config.signature : default_signature(kb, ConjectureMode::Necessary);
    std::erase_if(sig.atoms, [&](const SignatureAtom& a) {
        return a.name == Q || std::find(antecedents.begin(), antecedents.end(), a.name) != antecedents.end();
    });
    for (const auto& a : sig.atoms)
        if (kb.concept_entry(a.name).type() != a.type)
            throw Error(ErrorCode::TypeError, "signature atom '" + a.name + "' has the wrong type", a.name);

    ExprArena arena;
    ArenaEvaluator eval(arena, n, [&kb](std::string_view name) { return kb.column(name); });

    sketch.termination_reason = TerminationReason::NoProgress;
    while (true) {
        if (subset(progress, sat_q)) {
            sketch.termination_reason = TerminationReason::QReached;
            break;
        }
        if (static_cast<int>(sketch.lines.size()) + 1 >= config.max_lines) {
            sketch.termination_reason = TerminationReason::MaxLines;
            break;
        }
        if (sig.atoms.empty())
            break;

        struct Best {
            NodeId id;
            std::size_t slack;
            int complexity;
            std::string text;
        };
        std::optional<Best> best;
        int best_level = 0;
        bool late = false;
        auto sink = [&](NodeId id) {
            const ArenaNode& node = arena.node(id);
            if (best && node.level > best_level)
                return false;
            if (Clock::now() >= deadline) {
                late = true;
                return false;
            }
            if (node.type != Type::Boolean)
                return true;
            const auto& col = eval.column(id);
            bool shrinks = false, equals_q = true;
            std::size_t slack = 0;
            for (std::size_t i = 0; i < n; ++i) {
                bool x = col[i].is_true();
                if (sat_h[i] && !x)
                    return true;
                if (progress[i] && !x)
                    shrinks = true;
                if (x != sat_q[i])
                    equals_q = false;
                if (x && !sat_h[i])
                    ++slack;
            }
            if (!shrinks || equals_q)
                return true;
            int complexity = node.complexity;
            if (best && std::tie(slack, complexity) > std::tie(best->slack, best->complexity))
                return true;
            std::string text = arena.to_string(id);
            if (!best || std::tie(slack, complexity, text) < std::tie(best->slack, best->complexity, best->text)) {
                best = Best{id, slack, complexity, std::move(text)};
                best_level = node.level;
            }
            return true;
        };
        auto stats = enumerate(arena, sig, config.max_complexity, sink, deadline);
        if (late || stats.timed_out || Clock::now() >= deadline) {
            sketch.termination_reason = TerminationReason::Timeout;
            break;
        }
        if (!best)
            break;

        sketch.lines.push_back({antecedents, best->text, count(sat_h)});
        const auto& col = eval.column(best->id);
        for (std::size_t i = 0; i < n; ++i) {
            progress[i] = progress[i] && col[i].is_true();
            sat_h[i] = sat_h[i] && col[i].is_true();
        }
        antecedents.push_back(best->text);
        deadline = Clock::now() + config.timeout;
    }
    sketch.lines.push_back({antecedents, Q, count(sat_h)});
    return sketch;
}

std::string render_sketch(const ProofSketch& s, const KnowledgeBase& kb)
{
    std::string out;
    if (!s.augmented_with.empty()) {
        out += "Using known theorem(s): ";
        for (std::size_t i = 0; i < s.augmented_with.size(); ++i) {
            if (i > 0)
                out += "; ";
            out += sentence(kb, s.augmented_with[i].hypothesis, s.augmented_with[i].conclusion);
            out.pop_back();
        }
        out += ".\n";
    }
    std::size_t k = 1;
    for (const auto& line : s.lines) {
        std::string text = sentence(kb, line.antecedents, line.consequent);
        text[0] = 'F';
        out += "(" + std::to_string(k++) + ") " + text + "  [evidence: " + std::to_string(line.evidence) + "]\n";
    }
    out += "(" + std::to_string(k) + ") Therefore, " + sentence(kb, {s.hypothesis}, s.conclusion) + "\n";
    return out;
}

} // namespace cforge
