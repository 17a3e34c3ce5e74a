#include "cforge/session.hpp"

#include "cforge/catalog.hpp"
#include "cforge/error.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <sstream>

namespace cforge {

namespace {

constexpr std::array<std::string_view, 3> kVerdicts{"proved", "refuted", "needs-justification"};
constexpr std::array<std::string_view, 3> kLineStatuses{"open", "proved", "refuted"};

LineStatus line_status_from_string(std::string_view text)
{
    for (std::size_t i = 0; i < kLineStatuses.size(); ++i)
        if (kLineStatuses[i] == text)
            return static_cast<LineStatus>(i);
    throw Error(ErrorCode::MalformedPayload, "unknown line status '" + std::string(text) + "'");
}

std::string fresh_token()
{
    static std::mutex mutex;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mutex);
    std::ostringstream out;
    out << std::hex << rng();
    return out.str();
}

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null())
        throw Error(ErrorCode::MalformedPayload, std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string text_field(const Json& j, const char* key)
{
    const Json& v = field(j, key);
    if (!v.is_string())
        throw Error(ErrorCode::MalformedPayload, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::string first_text(const Json& j, std::initializer_list<const char*> keys)
{
    for (const char* k : keys)
        if (j.is_object() && j.contains(k) && !j.at(k).is_null())
            return text_field(j, k);
    throw Error(ErrorCode::MalformedPayload, std::string("missing field '") + *keys.begin() + "'");
}

std::chrono::milliseconds timeout_of(const Json& config, std::chrono::milliseconds fallback)
{
    if (config.contains("timeout_ms"))
        return std::chrono::milliseconds(config.at("timeout_ms").get<std::int64_t>());
    if (!config.contains("timeout"))
        return fallback;
    const Json& t = config.at("timeout");
    if (t.is_number())
        return std::chrono::milliseconds(static_cast<std::int64_t>(t.get<double>() * 1000));
    return parse_duration(t.get<std::string>());
}

GenerationBudget budget_of(const Json& request)
{
    GenerationBudget b;
    const Json config = request.contains("config") ? request.at("config") : Json::object();
    if (!config.is_object())
        throw Error(ErrorCode::MalformedPayload, "config must be an object");
    if (config.contains("max_complexity"))
        b.max_complexity = config.at("max_complexity").get<int>();
    b.timeout = timeout_of(config, b.timeout);
    return b;
}

SketchConfig sketch_config_of(const Json& request, const KnowledgeBase& kb)
{
    SketchConfig c;
    const Json config = request.contains("config") ? request.at("config") : Json::object();
    if (!config.is_object())
        throw Error(ErrorCode::MalformedPayload, "config must be an object");
    if (config.contains("max_complexity"))
        c.max_complexity = config.at("max_complexity").get<int>();
    if (config.contains("max_lines"))
        c.max_lines = config.at("max_lines").get<int>();
    c.timeout = timeout_of(config, c.timeout);
    if (request.contains("signature") && !request.at("signature").is_null())
        c.signature = signature_from_json(request.at("signature"), kb, ConjectureMode::Necessary);
    return c;
}

// Cheap checks run before a job is queued so callers get errors synchronously.
void precheck_conjectures(const Json& request, const KnowledgeBase& kb)
{
    std::string target = text_field(request, "target");
    auto mode = conjecture_mode_from_string(text_field(request, "mode"));
    const auto& entry = kb.concept_entry(target);
    auto col = kb.column(target);
    if (is_bound_mode(mode)) {
        if (entry.kind != ConceptKind::Invariant)
            throw Error(ErrorCode::TypeError, "'" + target + "' is not an invariant", target);
        if (std::count_if(col.begin(), col.end(), [](const Value& v) { return v.is_number(); }) < 2)
            throw Error(ErrorCode::NoEligibleObjects, "target '" + target + "' is defined on fewer than 2 objects");
    } else {
        if (entry.kind != ConceptKind::Property)
            throw Error(ErrorCode::TypeError, "'" + target + "' is not a property", target);
        if (std::none_of(col.begin(), col.end(), [](const Value& v) { return v.is_true(); }))
            throw Error(ErrorCode::VacuousHypothesis, "no stored object satisfies '" + target + "'", target);
    }
    auto budget = budget_of(request);
    if (budget.max_complexity < 1 || budget.max_complexity > kMaxEnumerationComplexity)
        throw Error(ErrorCode::ComplexityOutOfRange, "max complexity out of range");
    signature_from_json(request.contains("signature") ? request.at("signature") : Json(), kb, mode).validate();
}

MathObject counterexample_of(const Json& j, const KnowledgeBase& kb)
{
    if (j.is_string())
        return MathObject::parse(kb.domain(), j.get<std::string>(), {}, ObjectOrigin::Counterexample);
    if (!j.is_object())
        throw Error(ErrorCode::MalformedPayload, "counterexample must be an encoding or {encoding, label}");
    std::string label = j.contains("label") && j.at("label").is_string() ? j.at("label").get<std::string>() : "";
    return MathObject::parse(kb.domain(), text_field(j, "encoding"), label, ObjectOrigin::Counterexample);
}

std::string trace_value(const KnowledgeBase& kb, const Expr& e, const MathObject& obj)
{
    try {
        return kb.evaluate(e, obj).to_string();
    } catch (const Error& err) {
        return std::string(to_string(err.code()));
    }
}

Json conjecture_json(const SessionConjecture& c, const KnowledgeBase& kb)
{
    Json j = Json{{"id", c.id}};
    Json body = to_json(c.conjecture, kb);
    for (auto& [k, v] : body.items())
        j[k] = v;
    return j;
}

Json sketch_json(const SessionSketch& s, const KnowledgeBase& kb)
{
    Json j = Json{{"id", s.id}};
    Json body = to_json(s.sketch);
    for (auto& [k, v] : body.items())
        j[k] = v;
    for (std::size_t i = 0; i < s.sketch.lines.size(); ++i) {
        j["lines"][i]["status"] = kLineStatuses[static_cast<std::size_t>(s.line_status[i])];
        j["lines"][i]["refuting_object"] = s.line_witness[i] ? Json(*s.line_witness[i]) : Json(nullptr);
    }
    j["text"] = render_sketch(s.sketch, kb);
    return j;
}

Json subgoal_json(const Subgoal& g)
{
    return Json{{"subject", g.subject}, {"hypothesis", g.hypothesis}, {"conclusion", g.conclusion}, {"note", g.note}};
}

int suffix_number(const std::string& id, char prefix)
{
    if (id.size() < 2 || id[0] != prefix)
        return 0;
    try {
        return std::stoi(id.substr(1));
    } catch (const std::exception&) {
        return 0;
    }
}

SessionSketch make_session_sketch(std::string id, ProofSketch sketch)
{
    SessionSketch s{std::move(id), std::move(sketch), {}, {}};
    s.line_status.assign(s.sketch.lines.size(), LineStatus::Open);
    s.line_witness.assign(s.sketch.lines.size(), std::nullopt);
    return s;
}

void load_items(SessionState& state, const Json& doc)
{
    if (doc.contains("conjectures"))
        for (const auto& j : doc.at("conjectures")) {
            SessionConjecture c{text_field(j, "id"), conjecture_from_json(j, state.kb)};
            state.next_conjecture = std::max(state.next_conjecture, suffix_number(c.id, 'c') + 1);
            state.conjectures.push_back(std::move(c));
        }
    if (doc.contains("sketches"))
        for (const auto& j : doc.at("sketches")) {
            auto s = make_session_sketch(text_field(j, "id"), sketch_from_json(j));
            const Json& lines = j.at("lines");
            for (std::size_t i = 0; i < s.sketch.lines.size(); ++i) {
                if (lines[i].contains("status"))
                    s.line_status[i] = line_status_from_string(lines[i].at("status").get<std::string>());
                if (lines[i].contains("refuting_object") && lines[i].at("refuting_object").is_string())
                    s.line_witness[i] = lines[i].at("refuting_object").get<std::string>();
            }
            state.next_sketch = std::max(state.next_sketch, suffix_number(s.id, 's') + 1);
            state.sketches.push_back(std::move(s));
        }
    if (doc.contains("subgoals"))
        for (const auto& j : doc.at("subgoals")) {
            Subgoal g;
            g.subject = text_field(j, "subject");
            for (const auto& h : field(j, "hypothesis"))
                g.hypothesis.push_back(h.get<std::string>());
            g.conclusion = text_field(j, "conclusion");
            g.note = j.contains("note") ? j.at("note").get<std::string>() : "";
            state.subgoals.push_back(std::move(g));
        }
    for (const auto& c : state.kb.concepts())
        if (c.provenance == ConceptProvenance::PromotedTheorem && c.name.rfind("promoted_", 0) == 0)
            state.next_promoted = std::max(state.next_promoted, suffix_number("p" + c.name.substr(9), 'p') + 1);
}

// Name of a concept equal to `e`, registering a promoted concept if needed.
std::string concept_for(SessionState& state, const Expr& e)
{
    if (e.op() == Op::Atom)
        return e.atom_name();
    std::string text = canonicalize(e).to_string();
    for (const auto& c : state.kb.concepts())
        if (c.definition && canonicalize(*c.definition).to_string() == text)
            return c.name;
    std::string name;
    do {
        name = "promoted_" + std::to_string(state.next_promoted++);
    } while (state.kb.find_concept(name));
    state.kb = state.kb.add_concept(name, e, ConceptProvenance::PromotedTheorem);
    return name;
}

bool line_holds_on(const KnowledgeBase& kb, const ProofLine& line, const MathObject& obj, std::string* trace)
{
    bool antecedents = true;
    for (const auto& a : line.antecedents) {
        Expr e = sketch_term(kb, a);
        if (trace)
            *trace += a + "=" + trace_value(kb, e, obj) + "; ";
        antecedents = antecedents && kb.evaluate(e, obj).is_true();
    }
    Expr c = sketch_term(kb, line.consequent);
    if (trace)
        *trace += line.consequent + "=" + trace_value(kb, c, obj);
    return !(antecedents && kb.evaluate(c, obj).is_false());
}

} // namespace

std::string_view to_string(VerdictKind kind) { return kVerdicts[static_cast<std::size_t>(kind)]; }

VerdictKind verdict_kind_from_string(std::string_view text)
{
    for (std::size_t i = 0; i < kVerdicts.size(); ++i)
        if (kVerdicts[i] == text)
            return static_cast<VerdictKind>(i);
    throw Error(ErrorCode::MalformedPayload,
                "unknown verdict kind '" + std::string(text) + "' (expected proved, refuted or needs-justification)");
}

Json export_state(const SessionState& state)
{
    Json doc = kb_to_json(state.kb);
    Json conjectures = Json::array();
    for (const auto& c : state.conjectures)
        conjectures.push_back(conjecture_json(c, state.kb));
    Json sketches = Json::array();
    for (const auto& s : state.sketches) {
        Json j = sketch_json(s, state.kb);
        j.erase("text");
        sketches.push_back(std::move(j));
    }
    Json subgoals = Json::array();
    for (const auto& g : state.subgoals)
        subgoals.push_back(subgoal_json(g));
    doc["conjectures"] = std::move(conjectures);
    doc["sketches"] = std::move(sketches);
    doc["subgoals"] = std::move(subgoals);
    return doc;
}

void SessionState::apply(const Json& event)
{
    std::string type = text_field(event, "type");
    if (type == "created") {
        const Json& doc = field(event, "kb");
        *this = SessionState{};
        kb = kb_from_json(doc);
        load_items(*this, doc);
    } else if (type == "conjectures") {
        for (const auto& j : field(event, "results")) {
            SessionConjecture c{text_field(j, "id"), conjecture_from_json(j, kb)};
            // The KB may have grown while the job ran on its snapshot.
            if (c.conjecture.status == ConjectureStatus::Open) {
                auto r = recheck_conjecture(c.conjecture, kb);
                if (r.witness) {
                    c.conjecture.status = ConjectureStatus::Refuted;
                    c.conjecture.refuting_object = kb.objects()[*r.witness]->name();
                }
            }
            next_conjecture = std::max(next_conjecture, suffix_number(c.id, 'c') + 1);
            conjectures.push_back(std::move(c));
        }
    } else if (type == "sketch") {
        const Json& j = field(event, "result");
        auto s = make_session_sketch(text_field(j, "id"), sketch_from_json(j));
        next_sketch = std::max(next_sketch, suffix_number(s.id, 's') + 1);
        sketches.push_back(std::move(s));
    } else if (type == "verdict") {
        std::string subject = text_field(event, "subject");
        VerdictKind kind = verdict_kind_from_string(text_field(event, "kind"));
        std::string note = event.contains("note") && event.at("note").is_string() ? event.at("note").get<std::string>() : "";

        SessionConjecture* conj = nullptr;
        SessionSketch* sketch = nullptr;
        std::size_t line = 0;
        if (!subject.empty() && subject[0] == 'c') {
            for (auto& c : conjectures)
                if (c.id == subject)
                    conj = &c;
        } else if (auto colon = subject.find(':'); !subject.empty() && subject[0] == 's' && colon != std::string::npos) {
            std::string sid = subject.substr(0, colon);
            for (auto& s : sketches)
                if (s.id == sid)
                    sketch = &s;
            try {
                line = std::stoul(subject.substr(colon + 1));
            } catch (const std::exception&) {
                sketch = nullptr;
            }
            if (sketch && (line < 1 || line > sketch->sketch.lines.size()))
                sketch = nullptr;
        }
        if (!conj && !sketch)
            throw Error(ErrorCode::UnknownSubject,
                        "no conjecture or sketch line '" + subject + "' (use c<N> or s<N>:<line>)", subject);

        bool open = conj ? conj->conjecture.status == ConjectureStatus::Open
                         : sketch->line_status[line - 1] == LineStatus::Open;
        if (!open && kind != VerdictKind::NeedsJustification)
            throw Error(ErrorCode::UnknownSubject, "'" + subject + "' is not pending", subject);

        if (kind == VerdictKind::NeedsJustification) {
            Subgoal g{subject, {}, {}, note};
            if (conj) {
                const auto& c = conj->conjecture;
                switch (c.mode) {
                case ConjectureMode::Necessary:
                    g.hypothesis = {c.target};
                    g.conclusion = c.body.to_string();
                    break;
                case ConjectureMode::Sufficient:
                    g.hypothesis = {c.body.to_string()};
                    g.conclusion = c.target;
                    break;
                default:
                    g.conclusion = c.claim(kb).to_string();
                    break;
                }
            } else {
                g.hypothesis = sketch->sketch.lines[line - 1].antecedents;
                g.conclusion = sketch->sketch.lines[line - 1].consequent;
            }
            subgoals.push_back(std::move(g));
        } else if (kind == VerdictKind::Proved) {
            SessionState next = *this;
            TheoremRecord thm;
            thm.source = TheoremSource::UserProved;
            if (conj) {
                const auto& c = conj->conjecture;
                if (auto r = recheck_conjecture(c, kb); r.witness)
                    throw Error(ErrorCode::RefutedByStoredObject,
                                "conjecture fails on stored object " + kb.objects()[*r.witness]->name(),
                                kb.objects()[*r.witness]->name());
                switch (c.mode) {
                case ConjectureMode::Necessary:
                    thm.hypothesis = {c.target};
                    thm.conclusion = concept_for(next, c.body);
                    break;
                case ConjectureMode::Sufficient:
                    thm.hypothesis = {concept_for(next, c.body)};
                    thm.conclusion = c.target;
                    break;
                default:
                    thm.conclusion = concept_for(next, c.claim(kb));
                    break;
                }
            } else {
                const auto& l = sketch->sketch.lines[line - 1];
                for (const auto& a : l.antecedents)
                    thm.hypothesis.push_back(concept_for(next, sketch_term(kb, a)));
                thm.conclusion = concept_for(next, sketch_term(kb, l.consequent));
            }
            next.kb = next.kb.add_theorem(thm);
            kb = next.kb;
            next_promoted = next.next_promoted;
            if (conj)
                conj->conjecture.status = ConjectureStatus::Proved;
            else
                sketch->line_status[line - 1] = LineStatus::Proved;
        } else {
            if (!event.contains("counterexample") || event.at("counterexample").is_null())
                throw Error(ErrorCode::MalformedPayload, "a refuted verdict needs a counterexample");
            MathObject obj = counterexample_of(event.at("counterexample"), kb);
            if (conj) {
                const auto& c = conj->conjecture;
                Value v = claim_value(c, kb, obj);
                if (!v.is_false()) {
                    Expr t = Expr::atom(c.target, kb.concept_entry(c.target).type());
                    std::string trace = c.target + "=" + trace_value(kb, t, obj) + "; " + c.body.to_string() + "=" +
                                        trace_value(kb, c.body, obj) + "; claim=" + v.to_string();
                    throw Error(ErrorCode::BogusCounterexample,
                                "object " + obj.name() + " does not violate the claim", trace);
                }
            } else {
                std::string trace;
                if (line_holds_on(kb, sketch->sketch.lines[line - 1], obj, &trace))
                    throw Error(ErrorCode::BogusCounterexample,
                                "object " + obj.name() + " does not violate the line", trace);
            }
            auto added = kb.add_object(std::move(obj));
            kb = added.kb;
            std::string witness = kb.objects()[added.index]->name();
            if (conj) {
                conj->conjecture.status = ConjectureStatus::Refuted;
                conj->conjecture.refuting_object = witness;
            } else {
                sketch->line_status[line - 1] = LineStatus::Refuted;
                sketch->line_witness[line - 1] = witness;
            }
            for (auto& other : conjectures) {
                if (other.conjecture.status != ConjectureStatus::Open)
                    continue;
                if (auto r = recheck_conjecture(other.conjecture, kb); r.witness) {
                    other.conjecture.status = ConjectureStatus::Refuted;
                    other.conjecture.refuting_object = kb.objects()[*r.witness]->name();
                }
            }
        }
    } else {
        throw Error(ErrorCode::MalformedPayload, "unknown event type '" + type + "'");
    }
    ++events;
}

SessionState replay_log(const std::vector<std::string>& lines)
{
    SessionState state;
    for (const auto& line : lines)
        if (!line.empty())
            state.apply(Json::parse(line));
    return state;
}

SessionService::SessionService(std::optional<std::filesystem::path> data_dir) : data_dir_(std::move(data_dir))
{
    if (data_dir_) {
        std::filesystem::create_directories(*data_dir_);
        load_existing();
    }
}

SessionService::~SessionService()
{
    std::lock_guard lock(mutex_);
    for (auto& [id, s] : sessions_)
        if (s->worker.joinable())
            s->worker.join();
}

void SessionService::load_existing()
{
    for (const auto& entry : std::filesystem::directory_iterator(*data_dir_)) {
        if (entry.path().extension() != ".jsonl")
            continue;
        auto s = std::make_shared<Session>();
        s->id = entry.path().stem().string();
        std::ifstream in(entry.path());
        std::string line;
        while (std::getline(in, line))
            if (!line.empty())
                s->log.push_back(line);
        s->state = replay_log(s->log);
        sessions_.emplace(s->id, std::move(s));
    }
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id)
{
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        throw Error(ErrorCode::UnknownSession, "no session '" + id + "'", id);
    return it->second;
}

void SessionService::append(Session& s, const Json& event)
{
    std::string line = event.dump();
    s.log.push_back(line);
    if (data_dir_) {
        std::ofstream out(*data_dir_ / (s.id + ".jsonl"), std::ios::app);
        out << line << '\n';
        out.flush();
        if (!out)
            throw Error(ErrorCode::InvalidArgument, "cannot write the event log for session " + s.id);
    }
}

Json SessionService::summary(const Session& s) const
{
    const auto& st = s.state;
    Json conjectures = Json::array();
    for (const auto& c : st.conjectures)
        conjectures.push_back(conjecture_json(c, st.kb));
    Json sketches = Json::array();
    for (const auto& sk : st.sketches)
        sketches.push_back(sketch_json(sk, st.kb));
    Json theorems = Json::array();
    for (const auto& t : st.kb.theorems())
        theorems.push_back(to_json(t));
    Json subgoals = Json::array();
    for (const auto& g : st.subgoals)
        subgoals.push_back(subgoal_json(g));
    Json objects = Json::array();
    for (const auto& o : st.kb.objects())
        objects.push_back(to_json(*o));
    Json concepts = Json::array();
    for (const auto& c : st.kb.concepts())
        concepts.push_back(Json{{"name", c.name}, {"kind", to_string(c.kind)}, {"provenance", to_string(c.provenance)}});
    return Json{{"id", s.id},
                {"domain", st.kb.domain().tag()},
                {"objects", std::move(objects)},
                {"concepts", std::move(concepts)},
                {"theorems", std::move(theorems)},
                {"conjectures", std::move(conjectures)},
                {"sketches", std::move(sketches)},
                {"subgoals", std::move(subgoals)},
                {"active_job", s.active_job ? Json(*s.active_job) : Json(nullptr)},
                {"events", st.events}};
}

Json SessionService::create_session(const Json& body, std::string_view raw)
{
    if (!body.is_null() && !body.is_object())
        throw Error(ErrorCode::MalformedPayload, "request body must be a JSON object");
    Json kb_doc;
    std::string domain = body.is_object() && body.contains("domain") ? text_field(body, "domain") : "graph";
    domain_for(domain);
    const Json source = body.is_object() && body.contains("kb") ? body.at("kb") : Json(nullptr);
    if (source.is_object()) {
        kb_doc = source;
        if (!kb_doc.contains("domain"))
            kb_doc["domain"] = domain;
        // Validate now so the caller gets MalformedKB with a location.
        kb_from_json(kb_doc, raw);
        SessionState probe;
        probe.apply(Json{{"type", "created"}, {"kb", kb_doc}});
        if (probe.kb.domain().tag() != domain && body.contains("domain"))
            throw Error(ErrorCode::DomainMismatch, "uploaded KB is about " + std::string(probe.kb.domain().tag()));
        kb_doc = export_state(probe);
    } else if (body.is_object() && body.contains("kb_text")) {
        kb_doc = kb_to_json(kb_from_text(text_field(body, "kb_text")));
    } else if (source.is_string() && source.get<std::string>() != "catalog" && source.get<std::string>() != "empty") {
        throw Error(ErrorCode::MalformedPayload, "kb must be \"catalog\", \"empty\" or a KB JSON object");
    } else {
        bool empty = (source.is_string() && source.get<std::string>() == "empty") || domain != "graph";
        if (!empty && domain != "graph")
            throw Error(ErrorCode::DomainMismatch, "the builtin catalog holds graphs");
        kb_doc = kb_to_json(empty ? KnowledgeBase(domain_for(domain)) : catalog_kb());
    }

    auto s = std::make_shared<Session>();
    s->id = fresh_token();
    Json event{{"type", "created"}, {"kb", kb_doc}};
    s->state.apply(event);
    append(*s, event);
    Json out = summary(*s);
    std::lock_guard lock(mutex_);
    sessions_.emplace(s->id, std::move(s));
    return out;
}

Json SessionService::get_session(const std::string& id)
{
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    return summary(*s);
}

Json SessionService::run_job(const std::string& kind, const Json& request, const KnowledgeBase& kb)
{
    if (kind == "conjectures") {
        std::string target = text_field(request, "target");
        auto mode = conjecture_mode_from_string(text_field(request, "mode"));
        Signature sig = signature_from_json(request.contains("signature") ? request.at("signature") : Json(), kb, mode);
        auto run = generate_conjectures(kb, target, mode, sig, budget_of(request));
        Json results = Json::array();
        for (const auto& c : run.accepted)
            results.push_back(to_json(c, kb));
        return Json{{"results", std::move(results)},
                    {"stats",
                     {{"objects", run.objects},
                      {"in_scope", run.in_scope},
                      {"candidates", run.candidates},
                      {"emitted", run.stats.total_emitted},
                      {"timed_out", run.timed_out}}}};
    }
    std::string P = first_text(request, {"P", "hypothesis"});
    std::string Q = first_text(request, {"Q", "conclusion"});
    auto sketch = generate_sketch(kb, P, Q, sketch_config_of(request, kb));
    return Json{{"result", to_json(sketch)}};
}

Json SessionService::start_job(const std::shared_ptr<Session>& s, const std::string& kind, const Json& request,
                               bool sync)
{
    KnowledgeBase snapshot{graph_domain()};
    std::string job_id;
    {
        std::lock_guard lock(s->mutex);
        if (s->active_job)
            throw Error(ErrorCode::JobActive, "session " + s->id + " already runs job " + *s->active_job, *s->active_job);
        snapshot = s->state.kb;
        if (kind == "conjectures")
            precheck_conjectures(request, snapshot);
        else
            sketch_config_of(request, snapshot);
        job_id = "j" + std::to_string(s->next_job++);
        s->jobs[job_id] = Job{job_id, kind, "running", {}, {}};
        s->active_job = job_id;
        if (s->worker.joinable() && !sync)
            s->worker.join();
    }

    auto work = [this, s, kind, request, snapshot, job_id]() -> Json {
        Json outcome;
        Json error;
        try {
            outcome = run_job(kind, request, snapshot);
        } catch (const Error& e) {
            error = error_json(e);
        } catch (const std::exception& e) {
            error = error_json(Error(ErrorCode::InvalidArgument, e.what()));
        }
        std::lock_guard lock(s->mutex);
        Job& job = s->jobs[job_id];
        s->active_job.reset();
        if (!error.is_null()) {
            job.status = "failed";
            job.error = error;
            return Json{{"job", job_id}, {"status", job.status}, {"error", error}};
        }
        Json event;
        if (kind == "conjectures") {
            for (auto& c : outcome["results"])
                c["id"] = "c" + std::to_string(s->state.next_conjecture++);
            event = Json{{"type", "conjectures"}, {"job", job_id}, {"request", request}, {"results", outcome["results"]}};
        } else {
            Json result = Json{{"id", "s" + std::to_string(s->state.next_sketch++)}};
            for (auto& [k, v] : outcome["result"].items())
                result[k] = v;
            event = Json{{"type", "sketch"}, {"job", job_id}, {"request", request}, {"result", result}};
        }
        std::size_t before = s->state.conjectures.size();
        s->state.apply(event);
        append(*s, event);
        Json response{{"job", job_id}, {"status", "done"}};
        if (kind == "conjectures") {
            Json list = Json::array();
            for (std::size_t i = before; i < s->state.conjectures.size(); ++i)
                list.push_back(conjecture_json(s->state.conjectures[i], s->state.kb));
            response["conjectures"] = std::move(list);
            response["stats"] = outcome["stats"];
        } else {
            response["sketch"] = sketch_json(s->state.sketches.back(), s->state.kb);
        }
        job.status = "done";
        job.result = response;
        return response;
    };

    if (sync) {
        Json response = work();
        if (response.contains("error")) {
            const Json& e = response.at("error");
            ErrorCode code = ErrorCode::InvalidArgument;
            for (int c = 0; c <= static_cast<int>(ErrorCode::InvalidArgument); ++c)
                if (to_string(static_cast<ErrorCode>(c)) == e.at("code").get<std::string>())
                    code = static_cast<ErrorCode>(c);
            throw Error(code, e.at("message").get<std::string>(), e.at("detail").get<std::string>());
        }
        return response;
    }
    std::lock_guard lock(s->mutex);
    s->worker = std::thread([work] { work(); });
    return Json{{"job", job_id}, {"status", "running"}};
}

Json SessionService::request_conjectures(const std::string& id, const Json& body)
{
    if (!body.is_object())
        throw Error(ErrorCode::MalformedPayload, "request body must be a JSON object");
    bool sync = body.contains("sync") && body.at("sync").is_boolean() && body.at("sync").get<bool>();
    Json request = body;
    request.erase("sync");
    return start_job(find(id), "conjectures", request, sync);
}

Json SessionService::request_sketch(const std::string& id, const Json& body)
{
    if (!body.is_object())
        throw Error(ErrorCode::MalformedPayload, "request body must be a JSON object");
    bool sync = body.contains("sync") && body.at("sync").is_boolean() && body.at("sync").get<bool>();
    Json request = body;
    request.erase("sync");
    first_text(request, {"P", "hypothesis"});
    first_text(request, {"Q", "conclusion"});
    return start_job(find(id), "sketch", request, sync);
}

Json SessionService::job_status(const std::string& id, const std::string& job)
{
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    auto it = s->jobs.find(job);
    if (it == s->jobs.end())
        throw Error(ErrorCode::UnknownSubject, "no job '" + job + "' in session " + id, job);
    const Job& j = it->second;
    if (j.status == "done")
        return j.result;
    Json out{{"job", j.id}, {"kind", j.kind}, {"status", j.status}};
    if (j.status == "failed")
        out["error"] = j.error;
    return out;
}

Json SessionService::submit_verdict(const std::string& id, const Json& body)
{
    if (!body.is_object())
        throw Error(ErrorCode::MalformedPayload, "request body must be a JSON object");
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    Json event{{"type", "verdict"}, {"subject", text_field(body, "subject")}, {"kind", text_field(body, "kind")}};
    if (body.contains("counterexample"))
        event["counterexample"] = body.at("counterexample");
    if (body.contains("note"))
        event["note"] = body.at("note");

    SessionState next = s->state;
    next.apply(event);
    append(*s, event);
    std::size_t objects_before = s->state.kb.objects().size();
    std::size_t theorems_before = s->state.kb.theorems().size();
    std::vector<std::string> newly_refuted;
    for (std::size_t i = 0; i < next.conjectures.size(); ++i)
        if (next.conjectures[i].conjecture.status == ConjectureStatus::Refuted &&
            (i >= s->state.conjectures.size() || s->state.conjectures[i].conjecture.status != ConjectureStatus::Refuted))
            newly_refuted.push_back(next.conjectures[i].id);
    s->state = std::move(next);

    Json out{{"subject", event["subject"]}, {"kind", event["kind"]}, {"refuted", newly_refuted}};
    if (s->state.kb.theorems().size() > theorems_before)
        out["theorem"] = to_json(s->state.kb.theorems().back());
    if (s->state.kb.objects().size() > objects_before)
        out["object"] = to_json(*s->state.kb.objects().back());
    if (event["kind"] == "needs-justification")
        out["subgoal"] = subgoal_json(s->state.subgoals.back());
    return out;
}

Json SessionService::export_kb(const std::string& id)
{
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    return export_state(s->state);
}

Json SessionService::replay_export(const std::string& id)
{
    return export_state(replay_log(log_lines(id)));
}

std::vector<std::string> SessionService::log_lines(const std::string& id)
{
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    return s->log;
}

std::vector<std::string> SessionService::session_ids()
{
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, s] : sessions_)
        out.push_back(id);
    return out;
}

void SessionService::wait_idle(const std::string& id)
{
    auto s = find(id);
    std::thread worker;
    {
        std::lock_guard lock(s->mutex);
        worker = std::move(s->worker);
    }
    if (worker.joinable())
        worker.join();
}

int http_status(ErrorCode code)
{
    switch (code) {
    case ErrorCode::MalformedPayload:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::BadHeader:
    case ErrorCode::BadLength:
    case ErrorCode::CharOutOfRange:
        return 400;
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownSubject:
        return 404;
    case ErrorCode::JobActive:
        return 409;
    default:
        return 422;
    }
}

} // namespace cforge
