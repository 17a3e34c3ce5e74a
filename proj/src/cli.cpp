#include "cforge/cli.hpp"

#include "cforge/catalog.hpp"
#include "cforge/dalmatian.hpp"
#include "cforge/enumerate.hpp"
#include "cforge/json_io.hpp"
#include "cforge/session.hpp"
#include "cforge/sketch.hpp"
#include "cforge/verify.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace cforge {

namespace {

struct Common {
    std::string kb = "catalog";
    bool json = false;
    std::uint64_t seed = 0;
    int max_complexity = kDefaultMaxComplexity;
    std::string timeout = "5s";
};

void add_common(CLI::App* cmd, Common& c, bool generation)
{
    cmd->add_option("--kb", c.kb, "KB file (JSON or catalog lines) or 'catalog'")->envname("CFORGE_KB");
    cmd->add_flag("--json", c.json, "Emit JSON")->envname("CFORGE_JSON");
    cmd->add_option("--seed", c.seed, "Seed for randomized behavior")->envname("CFORGE_SEED");
    if (generation) {
        cmd->add_option("--max-complexity", c.max_complexity, "Largest expression size")
            ->envname("CFORGE_MAX_COMPLEXITY");
        cmd->add_option("--timeout", c.timeout, "Time budget, e.g. 500ms, 5s")->envname("CFORGE_TIMEOUT");
    }
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f)
        throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'", path);
}

const MathObject& object_ref(const KnowledgeBase& kb, const std::string& ref, std::optional<MathObject>& scratch)
{
    if (auto i = kb.find_object_by_label(ref))
        return *kb.objects()[*i];
    scratch = MathObject::parse(kb.domain(), ref, {}, ObjectOrigin::User);
    return *scratch;
}

Json enumeration_json(const EnumerationStats& stats, double seconds)
{
    Json levels = Json::array();
    for (int k = 1; k <= stats.max_complexity; ++k)
        levels.push_back(Json{{"level", k},
                              {"raw", stats.raw[k]},
                              {"canonical", k < static_cast<int>(stats.emitted.size()) ? stats.emitted[k] : 0}});
    return Json{{"max_complexity", stats.max_complexity},
                {"canonical", stats.total_emitted},
                {"levels", std::move(levels)},
                {"timed_out", stats.timed_out},
                {"seconds", seconds}};
}

std::atomic<bool> g_stop_requested{false};

void on_signal(int) { g_stop_requested = true; }

int serve(const std::string& listen, const std::string& data_dir, std::ostream& out, std::ostream& err)
{
    auto colon = listen.rfind(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--listen", "expected host:port, got '" + listen + "'");
    std::string host = listen.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--listen", "bad port in '" + listen + "'");
    }
    std::optional<std::filesystem::path> dir;
    if (!data_dir.empty())
        dir = data_dir;
    SessionService service(dir);
    Server server(service, host, port);
    int bound = port;
    if (port == 0) {
        bound = server.bind_any();
        if (bound < 0) {
            err << "error: cannot bind " << listen << '\n';
            return kExitDomainError;
        }
    }
    g_stop_requested = false;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::thread watcher([&server] {
        while (!g_stop_requested)
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
    });
    out << "listening on " << host << ':' << bound << std::endl;
    bool ok = port == 0 ? (server.listen_after_bind(), true) : server.listen();
    g_stop_requested = true;
    watcher.join();
    if (!ok) {
        err << "error: cannot listen on " << listen << '\n';
        return kExitDomainError;
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Conjecture generation and proof sketching over a knowledge base", "cforge"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Common common;
    std::string target, mode, hypothesis, conclusion, signature_path, input, object, label, concept_text, out_path;
    std::string listen = "127.0.0.1:8080", data_dir;
    int max_lines = 8, count = 10, order = 8;
    double density = 0.5;

    auto* kb_cmd = app.add_subcommand("kb", "Inspect and edit knowledge bases");
    kb_cmd->require_subcommand(1);
    auto* kb_info = kb_cmd->add_subcommand("info", "Summarize a KB");
    add_common(kb_info, common, false);
    auto* kb_export = kb_cmd->add_subcommand("export", "Write a KB as JSON");
    add_common(kb_export, common, false);
    kb_export->add_option("--out", out_path, "Output file (default stdout)");
    auto* kb_add = kb_cmd->add_subcommand("add", "Add an object to a KB");
    add_common(kb_add, common, false);
    kb_add->add_option("--object", object, "Encoding (graph6 or integer)")->required();
    kb_add->add_option("--label", label, "Display label");
    kb_add->add_option("--out", out_path, "Output file (default stdout)");
    auto* kb_eval = kb_cmd->add_subcommand("eval", "Evaluate concepts on an object");
    add_common(kb_eval, common, false);
    kb_eval->add_option("--object", object, "Stored label or encoding")->required();
    kb_eval->add_option("--concept", concept_text, "One concept or expression (default all concepts)");
    auto* kb_sample = kb_cmd->add_subcommand("sample", "Print random objects");
    add_common(kb_sample, common, false);
    kb_sample->add_option("--count", count, "Number of objects")->check(CLI::Range(1, 100000));
    kb_sample->add_option("--order", order, "Vertices per graph, or the upper value for integers")
        ->check(CLI::Range(1, 64));
    kb_sample->add_option("--density", density, "Edge probability")->check(CLI::Range(0.0, 1.0));

    auto* conj_cmd = app.add_subcommand("conjecture", "Generate conjectures about a target concept");
    add_common(conj_cmd, common, true);
    conj_cmd->add_option("--target", target, "Target concept")->required()->envname("CFORGE_TARGET");
    conj_cmd->add_option("--mode", mode,
                         "upper-bound, lower-bound, necessary or sufficient; defaults to upper-bound for "
                         "invariants and necessary for properties")
        ->envname("CFORGE_MODE");
    conj_cmd->add_option("--signature", signature_path, "Signature JSON file");

    auto* sketch_cmd = app.add_subcommand("sketch", "Build a proof sketch from P to Q");
    add_common(sketch_cmd, common, true);
    sketch_cmd->add_option("--hypothesis", hypothesis, "Property P")->required()->envname("CFORGE_HYPOTHESIS");
    sketch_cmd->add_option("--conclusion", conclusion, "Property Q")->required()->envname("CFORGE_CONCLUSION");
    sketch_cmd->add_option("--max-lines", max_lines, "Line budget including the final line")
        ->check(CLI::Range(1, 64))
        ->envname("CFORGE_MAX_LINES");
    sketch_cmd->add_option("--signature", signature_path, "Signature JSON file");

    auto* verify_cmd = app.add_subcommand("verify", "Re-check conjectures or a sketch against a KB");
    add_common(verify_cmd, common, false);
    verify_cmd->add_option("input", input, "Conjectures, sketch or session export JSON")->required();

    auto* bench_cmd = app.add_subcommand("bench", "Benchmarks");
    bench_cmd->require_subcommand(1);
    auto* bench_enum = bench_cmd->add_subcommand("enumerate", "Count canonical expressions and time the enumerator");
    add_common(bench_enum, common, true);
    bench_enum->add_option("--signature", signature_path, "Signature JSON file");
    common.timeout = "5s";

    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
    serve_cmd->add_option("--listen", listen, "host:port (port 0 picks one)")->envname("CFORGE_LISTEN");
    serve_cmd->add_option("--data-dir", data_dir, "Directory for session event logs")->envname("CFORGE_DATA_DIR");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help("", CLI::AppFormatMode::Normal);
        return kExitUsage;
    }

    try {
        if (serve_cmd->parsed())
            return serve(listen, data_dir, out, err);

        KnowledgeBase kb = load_kb(common.kb);
        auto timeout = parse_duration(common.timeout);

        if (kb_info->parsed()) {
            if (common.json) {
                Json concepts = Json::array();
                for (const auto& c : kb.concepts())
                    concepts.push_back(Json{{"name", c.name},
                                            {"kind", to_string(c.kind)},
                                            {"provenance", to_string(c.provenance)}});
                write_json(out, Json{{"domain", kb.domain().tag()},
                                     {"objects", kb.objects().size()},
                                     {"theorems", kb.theorems().size()},
                                     {"concepts", std::move(concepts)}});
            } else {
                out << "domain: " << kb.domain().tag() << '\n'
                    << "objects: " << kb.objects().size() << '\n'
                    << "theorems: " << kb.theorems().size() << '\n'
                    << "concepts: " << kb.concepts().size() << '\n';
                for (const auto& c : kb.concepts())
                    out << "  " << c.name << " (" << to_string(c.kind) << ", " << to_string(c.provenance) << ")\n";
                for (const auto& t : kb.theorems())
                    out << "  theorem: " << to_json(t).dump() << '\n';
            }
            return kExitOk;
        }
        if (kb_export->parsed() || kb_add->parsed()) {
            bool duplicate = false;
            if (kb_add->parsed()) {
                auto added = kb.add_object(MathObject::parse(kb.domain(), object, label, ObjectOrigin::User));
                duplicate = added.duplicate;
                kb = added.kb;
            }
            std::string text = kb_to_json(kb).dump(2) + "\n";
            if (out_path.empty())
                out << text;
            else
                write_text_file(out_path, text);
            if (duplicate)
                err << "note: " << object << " is isomorphic to a stored object; KB unchanged\n";
            return kExitOk;
        }
        if (kb_eval->parsed()) {
            std::optional<MathObject> scratch;
            const MathObject& obj = object_ref(kb, object, scratch);
            Json values = Json::object();
            auto record = [&](const std::string& name, const Value& v) {
                if (common.json)
                    values[name] = v.to_string();
                else
                    out << name << " = " << v.to_string() << '\n';
            };
            if (!concept_text.empty()) {
                record(concept_text, kb.evaluate(kb.parse_expression(concept_text), obj));
            } else {
                for (const auto& c : kb.concepts()) {
                    try {
                        record(c.name, kb.evaluate(c.name, obj));
                    } catch (const Error& e) {
                        record(c.name, Value::undefined());
                    }
                }
            }
            if (common.json)
                write_json(out, Json{{"object", obj.name()}, {"values", std::move(values)}});
            return kExitOk;
        }
        if (kb_sample->parsed()) {
            std::mt19937_64 rng(common.seed);
            Json items = Json::array();
            for (int i = 0; i < count; ++i) {
                std::string encoding;
                if (kb.domain().tag() == "graph") {
                    Graph g(order);
                    std::bernoulli_distribution edge(density);
                    for (int u = 0; u < order; ++u)
                        for (int v = u + 1; v < order; ++v)
                            if (edge(rng))
                                g.add_edge(u, v);
                    encoding = to_graph6(g);
                } else {
                    std::uniform_int_distribution<int> pick(1, order);
                    encoding = std::to_string(pick(rng));
                }
                if (common.json)
                    items.push_back(encoding);
                else
                    out << encoding << '\n';
            }
            if (common.json)
                write_json(out, items);
            return kExitOk;
        }
        if (conj_cmd->parsed()) {
            if (mode.empty())
                mode = kb.concept_entry(target).kind == ConceptKind::Invariant ? "upper-bound" : "necessary";
            auto m = conjecture_mode_from_string(mode);
            Json sig_doc = signature_path.empty() ? Json() : Json::parse(read_file(signature_path));
            Signature sig = signature_from_json(sig_doc, kb, m);
            GenerationBudget budget{common.max_complexity, timeout};
            auto run = generate_conjectures(kb, target, m, sig, budget);
            if (common.json) {
                Json list = Json::array();
                for (const auto& c : run.accepted)
                    list.push_back(to_json(c, kb));
                write_json(out, Json{{"conjectures", std::move(list)},
                                     {"objects", run.objects},
                                     {"in_scope", run.in_scope},
                                     {"candidates", run.candidates},
                                     {"timed_out", run.timed_out}});
            } else {
                for (const auto& c : run.accepted)
                    out << render_conjecture(c, kb) << '\n';
                if (run.timed_out)
                    err << "note: time budget exhausted after " << run.candidates << " candidates\n";
            }
            return kExitOk;
        }
        if (sketch_cmd->parsed()) {
            SketchConfig config;
            config.timeout = timeout;
            config.max_complexity = common.max_complexity;
            config.max_lines = max_lines;
            if (!signature_path.empty())
                config.signature =
                    signature_from_json(Json::parse(read_file(signature_path)), kb, ConjectureMode::Necessary);
            auto sketch = generate_sketch(kb, hypothesis, conclusion, config);
            if (common.json) {
                Json j = to_json(sketch);
                j["text"] = render_sketch(sketch, kb);
                write_json(out, j);
            } else {
                out << render_sketch(sketch, kb);
                out << "[termination: " << to_string(sketch.termination_reason) << "]\n";
            }
            return kExitOk;
        }
        if (verify_cmd->parsed()) {
            Json doc = Json::parse(read_file(input));
            std::vector<VerifyReport> reports;
            std::vector<Conjecture> conjectures;
            auto collect = [&](const Json& list) {
                for (const auto& j : list)
                    conjectures.push_back(conjecture_from_json(j, kb));
            };
            if (doc.is_array()) {
                collect(doc);
            } else if (doc.contains("lines")) {
                reports.push_back(verify_sketch(kb, sketch_from_json(doc)));
            } else {
                if (doc.contains("conjectures"))
                    collect(doc.at("conjectures"));
                if (doc.contains("sketches"))
                    for (const auto& s : doc.at("sketches"))
                        reports.push_back(verify_sketch(kb, sketch_from_json(s)));
            }
            if (!conjectures.empty())
                reports.insert(reports.begin(), verify_conjectures(kb, conjectures));
            VerifyReport total;
            for (auto& r : reports) {
                total.claims += r.claims;
                total.checks += r.checks;
                total.excluded += r.excluded;
                total.failures.insert(total.failures.end(), r.failures.begin(), r.failures.end());
            }
            if (common.json) {
                Json failures = Json::array();
                for (const auto& f : total.failures)
                    failures.push_back(Json{{"subject", f.subject}, {"claim", f.claim}, {"witness", f.witness}});
                write_json(out, Json{{"ok", total.ok()},
                                     {"claims", total.claims},
                                     {"checks", total.checks},
                                     {"excluded", total.excluded},
                                     {"failures", std::move(failures)}});
            } else {
                for (const auto& f : total.failures)
                    out << "FAIL " << f.subject << ": " << f.claim << "  [witness: " << f.witness << "]\n";
                out << (total.ok() ? "ok" : "failed") << ": " << total.claims << " claims, " << total.checks
                    << " checks, " << total.excluded << " excluded, " << total.failures.size() << " failures\n";
            }
            return total.ok() ? kExitOk : kExitDomainError;
        }
        if (bench_enum->parsed()) {
            Json sig_doc = signature_path.empty() ? Json() : Json::parse(read_file(signature_path));
            Signature sig = sig_doc.is_null() ? benchmark_signature(kb)
                                              : signature_from_json(sig_doc, kb, ConjectureMode::UpperBound);
            sig.validate();
            ExprArena arena;
            auto start = std::chrono::steady_clock::now();
            auto stats = enumerate(arena, sig, common.max_complexity, [](NodeId) { return true; }, start + timeout);
            double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            auto raw = raw_counts(sig, common.max_complexity);
            stats.raw = raw.raw;
            if (common.json) {
                write_json(out, enumeration_json(stats, seconds));
            } else {
                for (int k = 1; k <= stats.max_complexity; ++k)
                    out << "level " << k << ": raw " << stats.raw[k] << ", canonical "
                        << (k < static_cast<int>(stats.emitted.size()) ? stats.emitted[k] : 0) << '\n';
                out << "canonical expressions: " << stats.total_emitted << '\n';
                out << "wall time: " << std::fixed << std::setprecision(3) << seconds << " s\n";
                if (stats.timed_out)
                    out << "timed out\n";
            }
            return stats.timed_out ? kExitDomainError : kExitOk;
        }
    } catch (const Error& e) {
        if (common.json)
            write_json(err, error_json(e));
        else
            err << "error: " << to_string(e.code()) << ": " << e.what()
                << (e.detail().empty() ? "" : " (" + e.detail() + ")") << '\n';
        return kExitDomainError;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Json::exception& e) {
        err << "error: MalformedPayload: " << e.what() << '\n';
        return kExitDomainError;
    }
    return kExitUsage;
}

} // namespace cforge
