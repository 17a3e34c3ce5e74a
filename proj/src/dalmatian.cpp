#include "cforge/dalmatian.hpp"

#include "cforge/error.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <tuple>

namespace cforge {

namespace {

constexpr std::array<std::string_view, 4> kModes{"upper-bound", "lower-bound", "necessary", "sufficient"};
constexpr std::array<std::string_view, 3> kStatuses{"open", "proved", "refuted"};

using Clock = std::chrono::steady_clock;

Signature without_target(const KnowledgeBase& kb, const Signature& sig, const std::string& target)
{
    Signature out = sig;
    out.atoms.clear();
    for (const auto& a : sig.atoms) {
        const auto& entry = kb.concept_entry(a.name);
        if (entry.type() != a.type)
            throw Error(ErrorCode::TypeError, "signature atom '" + a.name + "' has the wrong type", a.name);
        if (a.name != target)
            out.atoms.push_back(a);
    }
    out.validate();
    return out;
}

ArenaEvaluator::AtomColumn columns_of(const KnowledgeBase& kb)
{
    return [&kb](std::string_view name) { return kb.column(name); };
}

Value safe_evaluate(const KnowledgeBase& kb, const Expr& e, const MathObject& obj)
{
    try {
        return kb.evaluate(e, obj);
    } catch (const Error& err) {
        if (err.code() != ErrorCode::SizeCapExceeded)
            throw;
        return Value::undefined();
    }
}

bool is_infix(Op op) { return is_binary(op) && op != Op::Min && op != Op::Max; }

void render(const Expr& e, std::string& out);

void render_wrapped(const Expr& e, std::string& out)
{
    if (is_infix(e.op())) {
        out += '(';
        render(e, out);
        out += ')';
    } else {
        render(e, out);
    }
}

std::string_view infix_symbol(Op op)
{
    switch (op) {
    case Op::And:
        return " ∧ ";
    case Op::Or:
        return " ∨ ";
    case Op::Xor:
        return " ⊕ ";
    case Op::Implies:
        return " → ";
    case Op::Plus:
        return " + ";
    case Op::Minus:
        return " - ";
    case Op::Times:
        return " * ";
    case Op::Div:
        return " / ";
    case Op::Le:
        return " ≤ ";
    case Op::Ge:
        return " ≥ ";
    case Op::Eq:
        return " = ";
    case Op::Lt:
        return " < ";
    case Op::Gt:
        return " > ";
    default:
        return " ? ";
    }
}

std::string applied(std::string_view name)
{
    if (name.starts_with("is_"))
        name.remove_prefix(3);
    return std::string(name) + "(x)";
}

void render(const Expr& e, std::string& out)
{
    switch (e.op()) {
    case Op::Const:
        out += e.constant_value().to_string();
        return;
    case Op::True:
        out += "true";
        return;
    case Op::False:
        out += "false";
        return;
    case Op::Atom:
        out += applied(e.atom_name());
        return;
    case Op::Not:
        out += "¬";
        render_wrapped(e.child(0), out);
        return;
    case Op::Negate:
        out += "-";
        render_wrapped(e.child(0), out);
        return;
    case Op::Floor:
    case Op::Ceil:
        out += e.op() == Op::Floor ? "⌊" : "⌈";
        render(e.child(0), out);
        out += e.op() == Op::Floor ? "⌋" : "⌉";
        return;
    case Op::Square:
        render_wrapped(e.child(0), out);
        out += "²";
        return;
    case Op::Min:
    case Op::Max:
        out += e.op() == Op::Min ? "min(" : "max(";
        render(e.child(0), out);
        out += ", ";
        render(e.child(1), out);
        out += ')';
        return;
    default:
        render_wrapped(e.child(0), out);
        out += infix_symbol(e.op());
        render_wrapped(e.child(1), out);
        return;
    }
}

void require_kind(const ConceptEntry& entry, ConceptKind kind, ConjectureMode mode)
{
    if (entry.kind != kind)
        throw Error(ErrorCode::TypeError,
                    std::string(to_string(mode)) + " conjectures need a" +
                        (kind == ConceptKind::Invariant ? "n invariant" : " property") + " target; '" + entry.name +
                        "' is a" + (entry.kind == ConceptKind::Invariant ? "n invariant" : " property"),
                    entry.name);
}

Conjecture base_conjecture(const KnowledgeBase& kb, const std::string& target, ConjectureMode mode, Expr body)
{
    Conjecture c;
    c.mode = mode;
    c.target = target;
    c.body = std::move(body);
    c.domain = std::string(kb.domain().tag());
    return c;
}

} // namespace

std::string_view to_string(ConjectureMode mode) { return kModes[static_cast<std::size_t>(mode)]; }
std::string_view to_string(ConjectureStatus status) { return kStatuses[static_cast<std::size_t>(status)]; }

ConjectureMode conjecture_mode_from_string(std::string_view text)
{
    for (std::size_t i = 0; i < kModes.size(); ++i)
        if (kModes[i] == text)
            return static_cast<ConjectureMode>(i);
    if (text == "upper")
        return ConjectureMode::UpperBound;
    if (text == "lower")
        return ConjectureMode::LowerBound;
    throw Error(ErrorCode::InvalidArgument,
                "unknown mode '" + std::string(text) + "' (expected upper-bound, lower-bound, necessary or sufficient)");
}

ConjectureStatus conjecture_status_from_string(std::string_view text)
{
    for (std::size_t i = 0; i < kStatuses.size(); ++i)
        if (kStatuses[i] == text)
            return static_cast<ConjectureStatus>(i);
    throw Error(ErrorCode::InvalidArgument, "unknown conjecture status '" + std::string(text) + "'");
}

bool is_bound_mode(ConjectureMode mode) { return mode == ConjectureMode::UpperBound || mode == ConjectureMode::LowerBound; }

Expr Conjecture::claim(const KnowledgeBase& kb) const
{
    Expr t = Expr::atom(target, kb.concept_entry(target).type());
    switch (mode) {
    case ConjectureMode::UpperBound:
        return Expr::binary(Op::Le, t, body);
    case ConjectureMode::LowerBound:
        return Expr::binary(Op::Ge, t, body);
    case ConjectureMode::Necessary:
        return Expr::binary(Op::Implies, t, body);
    case ConjectureMode::Sufficient:
        return Expr::binary(Op::Implies, body, t);
    }
    return t;
}

std::string Conjecture::key() const
{
    return std::string(to_string(mode)) + "|" + target + "|" + canonicalize(body).to_string();
}

BoundStore::BoundStore(std::vector<Value> target, ConjectureMode mode)
    : target_(std::move(target)), upper_(mode == ConjectureMode::UpperBound), aggregate_(target_.size())
{
    if (!is_bound_mode(mode))
        throw Error(ErrorCode::InvalidArgument, "bound store needs a bound mode");
}

Offer BoundStore::offer(std::size_t key, const std::vector<Value>& values)
{
    std::size_t evidence = 0;
    bool improves = false;
    for (std::size_t o = 0; o < target_.size(); ++o) {
        if (!target_[o].is_number() || !values[o].is_number())
            continue;
        const Rational& b = values[o].as_number();
        if (tighter(b, target_[o].as_number()))
            return Offer::FailsTruth;
        ++evidence;
        if (!aggregate_[o] || tighter(b, *aggregate_[o]))
            improves = true;
    }
    if (evidence == 0)
        return Offer::NoEvidence;
    if (!improves)
        return Offer::Insignificant;
    entries_.push_back({key, values});
    prune();
    recompute();
    return Offer::Accepted;
}

void BoundStore::prune()
{
    for (std::size_t i = 0; i < entries_.size();) {
        bool contributes = false;
        for (std::size_t o = 0; o < target_.size() && !contributes; ++o) {
            const Value& v = entries_[i].values[o];
            if (!v.is_number() || !target_[o].is_number())
                continue;
            bool unique_best = true;
            for (std::size_t j = 0; j < entries_.size() && unique_best; ++j) {
                const Value& w = entries_[j].values[o];
                if (j != i && w.is_number() && !tighter(v.as_number(), w.as_number()))
                    unique_best = false;
            }
            contributes = unique_best;
        }
        if (contributes)
            ++i;
        else
            entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(i));
    }
}

void BoundStore::recompute()
{
    std::fill(aggregate_.begin(), aggregate_.end(), std::nullopt);
    for (const auto& c : entries_)
        for (std::size_t o = 0; o < target_.size(); ++o)
            if (c.values[o].is_number() && target_[o].is_number() &&
                (!aggregate_[o] || tighter(c.values[o].as_number(), *aggregate_[o])))
                aggregate_[o] = c.values[o].as_number();
}

ConditionStore::ConditionStore(std::vector<Value> target, ConjectureMode mode, std::size_t capacity)
    : target_(std::move(target)), necessary_(mode == ConjectureMode::Necessary), capacity_(capacity)
{
    if (is_bound_mode(mode))
        throw Error(ErrorCode::InvalidArgument, "condition store needs a condition mode");
}

bool ConditionStore::better(const Entry& a, const Entry& b)
{
    return std::tie(a.slack, a.complexity, a.text) < std::tie(b.slack, b.complexity, b.text);
}

Offer ConditionStore::offer(std::size_t key, int complexity, const std::vector<Value>& values,
                            const std::function<std::string()>& text)
{
    std::size_t evidence = 0, slack = 0, excluded = 0;
    std::vector<bool> sat(target_.size(), false);
    for (std::size_t o = 0; o < target_.size(); ++o) {
        if (!target_[o].is_boolean())
            continue;
        if (!values[o].is_boolean()) {
            ++excluded;
            continue;
        }
        bool tv = target_[o].as_bool();
        bool bv = values[o].as_bool();
        bool antecedent = necessary_ ? tv : bv;
        bool consequent = necessary_ ? bv : tv;
        if (antecedent) {
            if (!consequent)
                return Offer::FailsTruth;
            ++evidence;
        } else if (consequent) {
            ++slack;
        }
        sat[o] = bv;
    }
    if (evidence == 0)
        return Offer::NoEvidence;
    if (capacity_ == 0 || (entries_.size() == capacity_ && std::tie(slack, complexity) > std::tie(entries_.back().slack,
                                                                                              entries_.back().complexity)))
        return Offer::Insignificant;
    Entry e{key, slack, complexity, text(), std::move(sat), evidence, excluded};
    auto dup = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& s) { return s.satisfied == e.satisfied; });
    if (dup != entries_.end()) {
        if (!better(e, *dup))
            return Offer::Insignificant;
        entries_.erase(dup);
    }
    auto pos = std::lower_bound(entries_.begin(), entries_.end(), e, better);
    bool kept = pos != entries_.end() || entries_.size() < capacity_;
    if (!kept)
        return Offer::Insignificant;
    entries_.insert(pos, std::move(e));
    if (entries_.size() > capacity_)
        entries_.pop_back();
    return Offer::Accepted;
}

Signature default_signature(const KnowledgeBase& kb, ConjectureMode mode)
{
    Signature sig;
    bool bound = is_bound_mode(mode);
    for (const auto& c : kb.concepts())
        if ((c.kind == ConceptKind::Invariant) == bound)
            sig.atoms.push_back({c.name, c.type()});
    if (bound) {
        sig.binary = {Op::Plus, Op::Minus, Op::Times, Op::Div, Op::Min, Op::Max};
        sig.constants = Signature::default_constants();
    } else {
        sig.unary = {Op::Not};
        sig.binary = {Op::And, Op::Or};
    }
    return sig;
}

Signature benchmark_signature(const KnowledgeBase& kb)
{
    Signature sig;
    for (const char* name : {"order", "size", "min_degree", "max_degree", "independence_number", "clique_number",
                             "diameter", "radius", "girth", "is_hamiltonian"})
        sig.atoms.push_back({name, kb.concept_entry(name).type()});
    sig.unary = {Op::Not};
    sig.binary = {Op::And, Op::Or, Op::Le, Op::Plus, Op::Min};
    sig.constants = Signature::default_constants();
    return sig;
}

ConjectureRun generate_bound_conjectures(const KnowledgeBase& kb, const std::string& target, ConjectureMode mode,
                                         const Signature& sig, const GenerationBudget& budget)
{
    if (!is_bound_mode(mode))
        throw Error(ErrorCode::InvalidArgument, "bound generation needs upper-bound or lower-bound mode");
    const auto& entry = kb.concept_entry(target);
    require_kind(entry, ConceptKind::Invariant, mode);
    auto start = Clock::now();
    const auto objects = kb.objects().size();
    const auto t = kb.column(target);

    ConjectureRun run;
    run.objects = objects;
    run.in_scope = static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [](const Value& v) { return v.is_number(); }));
    if (run.in_scope < 2)
        throw Error(ErrorCode::NoEligibleObjects,
                    "target '" + target + "' is defined on " + std::to_string(run.in_scope) +
                        " stored object(s); at least 2 are needed");
    Signature s = without_target(kb, sig, target);

    BoundStore store(t, mode);
    ExprArena arena;
    ArenaEvaluator eval(arena, objects, columns_of(kb));
    eval.set_cache_level_limit(budget.max_complexity);

    auto sink = [&](NodeId id) {
        if (arena.node(id).type != Type::Number)
            return true;
        ++run.candidates;
        if (store.offer(id, eval.column(id)) == Offer::Accepted)
            run.max_store_size = std::max(run.max_store_size, store.entries().size());
        return true;
    };
    run.stats = enumerate(arena, s, budget.max_complexity, sink, start + budget.timeout);
    run.timed_out = run.stats.timed_out;

    for (const auto& c : store.entries()) {
        Conjecture conj = base_conjecture(kb, target, mode, arena.materialize(static_cast<NodeId>(c.key)));
        for (std::size_t o = 0; o < objects; ++o) {
            if (!t[o].is_number())
                continue;
            if (!c.values[o].is_number()) {
                ++conj.excluded;
                continue;
            }
            ++conj.evidence;
            if (c.values[o].as_number() == t[o].as_number())
                ++conj.touches;
        }
        run.accepted.push_back(std::move(conj));
    }
    std::stable_sort(run.accepted.begin(), run.accepted.end(), [](const Conjecture& a, const Conjecture& b) {
        return std::make_tuple(-static_cast<long long>(a.touches), a.body.complexity(), a.body.to_string()) <
               std::make_tuple(-static_cast<long long>(b.touches), b.body.complexity(), b.body.to_string());
    });
    return run;
}

ConjectureRun generate_condition_conjectures(const KnowledgeBase& kb, const std::string& target, ConjectureMode mode,
                                             const Signature& sig, const GenerationBudget& budget)
{
    if (is_bound_mode(mode))
        throw Error(ErrorCode::InvalidArgument, "condition generation needs necessary or sufficient mode");
    const auto& entry = kb.concept_entry(target);
    require_kind(entry, ConceptKind::Property, mode);
    auto start = Clock::now();
    const auto objects = kb.objects().size();
    const auto t = kb.column(target);

    ConjectureRun run;
    run.objects = objects;
    run.in_scope = static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [](const Value& v) { return v.is_boolean(); }));
    auto positives = std::count_if(t.begin(), t.end(), [](const Value& v) { return v.is_true(); });
    if (positives == 0)
        throw Error(ErrorCode::VacuousHypothesis, "no stored object satisfies '" + target + "'", target);
    Signature s = without_target(kb, sig, target);

    ExprArena arena;
    ArenaEvaluator eval(arena, objects, columns_of(kb));
    eval.set_cache_level_limit(budget.max_complexity);
    ConditionStore store(t, mode, run.in_scope);

    auto sink = [&](NodeId id) {
        if (arena.node(id).type != Type::Boolean)
            return true;
        ++run.candidates;
        store.offer(id, arena.node(id).complexity, eval.column(id), [&] { return arena.to_string(id); });
        run.max_store_size = std::max(run.max_store_size, store.entries().size());
        return true;
    };
    run.stats = enumerate(arena, s, budget.max_complexity, sink, start + budget.timeout);
    run.timed_out = run.stats.timed_out;

    for (const auto& e : store.entries()) {
        Conjecture conj = base_conjecture(kb, target, mode, arena.materialize(static_cast<NodeId>(e.key)));
        conj.evidence = e.evidence;
        conj.excluded = e.excluded;
        conj.slack = e.slack;
        run.accepted.push_back(std::move(conj));
    }
    return run;
}

ConjectureRun generate_conjectures(const KnowledgeBase& kb, const std::string& target, ConjectureMode mode,
                                   const Signature& sig, const GenerationBudget& budget)
{
    if (is_bound_mode(mode))
        return generate_bound_conjectures(kb, target, mode, sig, budget);
    return generate_condition_conjectures(kb, target, mode, sig, budget);
}

Value claim_value(const Conjecture& c, const KnowledgeBase& kb, const MathObject& obj)
{
    return safe_evaluate(kb, c.claim(kb), obj);
}

RecheckResult recheck_conjecture(const Conjecture& c, const KnowledgeBase& kb)
{
    RecheckResult r;
    Expr claim = c.claim(kb);
    const auto& objects = kb.objects();
    for (std::size_t o = 0; o < objects.size(); ++o) {
        Value v = safe_evaluate(kb, claim, *objects[o]);
        if (v.is_undefined()) {
            ++r.excluded;
            continue;
        }
        ++r.evidence;
        if (v.is_false() && !r.witness) {
            r.witness = o;
            r.status = ConjectureStatus::Refuted;
        }
    }
    if (!r.witness)
        r.status = c.status == ConjectureStatus::Proved ? ConjectureStatus::Proved : ConjectureStatus::Open;
    r.zero_evidence = r.evidence == 0;
    return r;
}

std::string render_infix(const Expr& e)
{
    std::string out;
    render(e, out);
    return out;
}

std::string render_conjecture(const Conjecture& c, const KnowledgeBase& kb)
{
    std::string out = "∀ " + std::string(kb.domain().noun()) + " x: ";
    std::string t = applied(c.target);
    switch (c.mode) {
    case ConjectureMode::UpperBound:
        out += t + " ≤ " + render_infix(c.body);
        break;
    case ConjectureMode::LowerBound:
        out += t + " ≥ " + render_infix(c.body);
        break;
    case ConjectureMode::Necessary:
        out += t + " → ";
        render_wrapped(c.body, out);
        break;
    case ConjectureMode::Sufficient:
        render_wrapped(c.body, out);
        out += " → " + t;
        break;
    }
    out += "  [evidence: " + std::to_string(c.evidence) + "/" + std::to_string(c.evidence);
    if (is_bound_mode(c.mode))
        out += ", touches: " + std::to_string(c.touches);
    else
        out += ", slack: " + std::to_string(c.slack);
    out += ", complexity: " + std::to_string(c.body.complexity());
    if (c.excluded > 0)
        out += ", excluded: " + std::to_string(c.excluded);
    out += "]";
    if (c.status == ConjectureStatus::Refuted)
        out += "  (refuted" + (c.refuting_object ? " by " + *c.refuting_object : std::string()) + ")";
    else if (c.status == ConjectureStatus::Proved)
        out += "  (proved)";
    return out;
}

} // namespace cforge
