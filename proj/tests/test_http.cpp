#include "doctest.h"

#include "cforge/catalog.hpp"
#include "cforge/session.hpp"

#include "httplib.h"

#include <thread>

using namespace cforge;

namespace {

struct LiveServer {
    SessionService service;
    Server server{service, "127.0.0.1", 0};
    int port = -1;
    std::thread thread;

    LiveServer()
    {
        port = server.bind_any();
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
    }
    ~LiveServer()
    {
        server.stop();
        thread.join();
    }
};

struct Reply {
    int status = 0;
    Json body;
};

Reply post(httplib::Client& cli, const std::string& path, const std::string& body)
{
    auto r = cli.Post(path, body, "application/json");
    REQUIRE(r);
    return {r->status, Json::parse(r->body)};
}

Reply post(httplib::Client& cli, const std::string& path, const Json& body) { return post(cli, path, body.dump()); }

Reply get(httplib::Client& cli, const std::string& path)
{
    auto r = cli.Get(path);
    REQUIRE(r);
    CHECK(r->get_header_value("Content-Type") == "application/json");
    return {r->status, Json::parse(r->body)};
}

} // namespace

TEST_SUITE("http api")
{
    TEST_CASE("every endpoint over a live socket")
    {
        LiveServer live;
        httplib::Client cli("127.0.0.1", live.port);

        auto health = get(cli, "/health");
        CHECK(health.status == 200);
        CHECK(health.body["status"] == "ok");

        auto created = post(cli, "/sessions", Json{{"kb", "catalog"}});
        CHECK(created.status == 201);
        std::string id = created.body["id"].get<std::string>();
        CHECK(created.body["objects"].size() == catalog_kb().objects().size());
        std::string base = "/sessions/" + id;

        auto session = get(cli, base);
        CHECK(session.status == 200);
        CHECK(session.body["id"] == id);

        // Polled job.
        auto job = post(cli, base + "/conjectures",
                        Json{{"target", "is_hamiltonian"}, {"mode", "necessary"}, {"config", {{"max_complexity", 2}}}});
        CHECK(job.status == 200);
        std::string job_id = job.body["job"].get<std::string>();
        Reply polled;
        for (int i = 0; i < 600; ++i) {
            polled = get(cli, base + "/jobs/" + job_id);
            if (polled.body["status"] != "running")
                break;
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
        }
        CHECK(polled.status == 200);
        CHECK(polled.body["status"] == "done");
        CHECK_FALSE(polled.body["conjectures"].empty());

        auto sketch = post(cli, base + "/sketches",
                           Json{{"P", "dirac_condition"}, {"Q", "is_hamiltonian"}, {"sync", true}});
        CHECK(sketch.status == 200);
        CHECK(sketch.body["sketch"]["lines"].size() == 3);

        auto verdict = post(cli, base + "/verdicts", Json{{"subject", "s1:1"}, {"kind", "proved"}});
        CHECK(verdict.status == 200);
        CHECK(verdict.body["theorem"]["conclusion"] == "longest_path_induced_hamiltonian");

        auto ex = get(cli, base + "/export");
        CHECK(ex.status == 200);
        CHECK(ex.body["theorems"].size() == 1);
        CHECK(ex.body == live.service.export_kb(id));
    }

    TEST_CASE("error statuses carry code, message and detail")
    {
        LiveServer live;
        httplib::Client cli("127.0.0.1", live.port);

        auto bad_json = post(cli, "/sessions", std::string("{not json"));
        CHECK(bad_json.status == 400);
        CHECK(bad_json.body["code"] == "MalformedPayload");
        CHECK(bad_json.body.contains("message"));
        CHECK(bad_json.body.contains("detail"));

        std::string raw = "{\"kb\": {\"domain\": \"graph\",\n \"objects\": [\n {\"label\": \"x\", \"encoding\": \"B~~\"}]}}";
        auto bad_kb = post(cli, "/sessions", raw);
        CHECK(bad_kb.status == 422);
        CHECK(bad_kb.body["code"] == "MalformedKB");
        CHECK(bad_kb.body["detail"].get<std::string>().find("line 3") != std::string::npos);

        auto missing = get(cli, "/sessions/unknown");
        CHECK(missing.status == 404);
        CHECK(missing.body["code"] == "UnknownSession");

        auto route = get(cli, "/nowhere");
        CHECK(route.status == 404);

        std::string id = post(cli, "/sessions", Json{{"kb", "catalog"}}).body["id"].get<std::string>();
        std::string base = "/sessions/" + id;
        auto unknown = post(cli, base + "/conjectures", Json{{"target", "nonexistent"}, {"mode", "necessary"}, {"sync", true}});
        CHECK(unknown.status == 422);
        CHECK(unknown.body["code"] == "UnknownConcept");

        auto subject = post(cli, base + "/verdicts", Json{{"subject", "c7"}, {"kind", "proved"}});
        CHECK(subject.status == 404);
        CHECK(subject.body["code"] == "UnknownSubject");

        auto slow = post(cli, base + "/conjectures",
                         Json{{"target", "independence_number"}, {"mode", "upper"},
                              {"config", {{"max_complexity", 9}, {"timeout", "2s"}}}});
        CHECK(slow.status == 200);
        auto busy = post(cli, base + "/sketches", Json{{"P", "dirac_condition"}, {"Q", "is_hamiltonian"}});
        CHECK(busy.status == 409);
        CHECK(busy.body["code"] == "JobActive");
        live.service.wait_idle(id);
    }

    TEST_CASE("status mapping")
    {
        CHECK(http_status(ErrorCode::MalformedPayload) == 400);
        CHECK(http_status(ErrorCode::UnknownSession) == 404);
        CHECK(http_status(ErrorCode::UnknownSubject) == 404);
        CHECK(http_status(ErrorCode::JobActive) == 409);
        CHECK(http_status(ErrorCode::BogusCounterexample) == 422);
        CHECK(http_status(ErrorCode::VacuousHypothesis) == 422);
    }
}
