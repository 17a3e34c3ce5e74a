#pragma once

#include "cforge/dalmatian.hpp"
#include "cforge/json_io.hpp"
#include "cforge/kb.hpp"
#include "cforge/sketch.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace cforge {

enum class VerdictKind { Proved, Refuted, NeedsJustification };
enum class LineStatus { Open, Proved, Refuted };

std::string_view to_string(VerdictKind kind);
VerdictKind verdict_kind_from_string(std::string_view text);

struct SessionConjecture {
    std::string id;
    Conjecture conjecture;
};

struct SessionSketch {
    std::string id;
    ProofSketch sketch;
    std::vector<LineStatus> line_status;
    std::vector<std::optional<std::string>> line_witness;
};

// A claim the human asked to see justified; a target for a future sketch.
struct Subgoal {
    std::string subject;
    std::vector<std::string> hypothesis;
    std::string conclusion;
    std::string note;
};

// Everything reconstructible from the event log.
struct SessionState {
    KnowledgeBase kb{graph_domain()};
    std::vector<SessionConjecture> conjectures;
    std::vector<SessionSketch> sketches;
    std::vector<Subgoal> subgoals;
    std::size_t events = 0;
    int next_conjecture = 1;
    int next_sketch = 1;
    int next_promoted = 1;

    // Applies one logged event. Throws on events that no longer apply.
    void apply(const Json& event);
};

// KB JSON plus "conjectures", "sketches" and "subgoals".
Json export_state(const SessionState& state);

// Rebuilds a session from its log lines.
SessionState replay_log(const std::vector<std::string>& lines);

// Transport-independent session API; the HTTP server is a thin shell on top.
// All request and response bodies are JSON.
class SessionService {
public:
    // With a data directory, each session's log is written to <dir>/<id>.jsonl
    // and existing logs are reloaded.
    explicit SessionService(std::optional<std::filesystem::path> data_dir = std::nullopt);
    ~SessionService();

    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    // `raw` is the request text, used to cite lines in MalformedKB errors.
    Json create_session(const Json& body, std::string_view raw = {});
    Json get_session(const std::string& id);
    // Starts a background job; with "sync": true waits and returns the result.
    Json request_conjectures(const std::string& id, const Json& body);
    Json request_sketch(const std::string& id, const Json& body);
    Json job_status(const std::string& id, const std::string& job);
    Json submit_verdict(const std::string& id, const Json& body);
    Json export_kb(const std::string& id);

    // Export obtained by replaying the session's log from scratch.
    Json replay_export(const std::string& id);
    std::vector<std::string> log_lines(const std::string& id);
    std::vector<std::string> session_ids();

    // Blocks until the session has no running job.
    void wait_idle(const std::string& id);

private:
    struct Job {
        std::string id;
        std::string kind;
        std::string status = "running";
        Json result;
        Json error;
    };
    struct Session {
        std::string id;
        std::mutex mutex;
        SessionState state;
        std::vector<std::string> log;
        std::map<std::string, Job> jobs;
        std::optional<std::string> active_job;
        int next_job = 1;
        std::thread worker;
    };

    std::shared_ptr<Session> find(const std::string& id);
    void append(Session& s, const Json& event);
    Json start_job(const std::shared_ptr<Session>& s, const std::string& kind, const Json& request, bool sync);
    Json run_job(const std::string& kind, const Json& request, const KnowledgeBase& kb);
    Json summary(const Session& s) const;
    void load_existing();

    std::optional<std::filesystem::path> data_dir_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

// Maps an error code to its HTTP status.
int http_status(ErrorCode code);

// Serves the API until stop() is called from another thread or a signal.
class Server {
public:
    Server(SessionService& service, std::string host, int port);
    ~Server();
    // Returns false when the address cannot be bound.
    bool listen();
    // Binds to an ephemeral port; returns it, or -1.
    int bind_any();
    void listen_after_bind();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace cforge
