#include "cforge/session.hpp"

#include "httplib.h"

namespace cforge {

struct Server::Impl {
    SessionService& service;
    std::string host;
    int port;
    httplib::Server http;

    Impl(SessionService& s, std::string h, int p) : service(s), host(std::move(h)), port(p) { routes(); }

    static void reply(httplib::Response& res, int status, const Json& body)
    {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static Json body_of(const httplib::Request& req)
    {
        if (req.body.empty())
            return Json::object();
        try {
            return Json::parse(req.body);
        } catch (const Json::parse_error& e) {
            throw Error(ErrorCode::MalformedPayload, "request body is not valid JSON",
                        "offset " + std::to_string(e.byte));
        }
    }

    template <class F>
    static httplib::Server::Handler guarded(F f, int ok_status = 200)
    {
        return [f, ok_status](const httplib::Request& req, httplib::Response& res) {
            try {
                reply(res, ok_status, f(req));
            } catch (const Error& e) {
                reply(res, http_status(e.code()), error_json(e));
            } catch (const Json::exception& e) {
                reply(res, 400, error_json(Error(ErrorCode::MalformedPayload, e.what())));
            } catch (const std::exception& e) {
                reply(res, 500, error_json(Error(ErrorCode::InvalidArgument, e.what())));
            }
        };
    }

    void routes()
    {
        http.Get("/health", guarded([](const httplib::Request&) { return Json{{"status", "ok"}}; }));
        http.Post("/sessions", guarded([this](const httplib::Request& req) { return service.create_session(body_of(req), req.body); },
                                       201));
        http.Get(R"(/sessions/([^/]+))",
                 guarded([this](const httplib::Request& req) { return service.get_session(req.matches[1]); }));
        http.Post(R"(/sessions/([^/]+)/conjectures)", guarded([this](const httplib::Request& req) {
                      return service.request_conjectures(req.matches[1], body_of(req));
                  }));
        http.Post(R"(/sessions/([^/]+)/sketches)", guarded([this](const httplib::Request& req) {
                      return service.request_sketch(req.matches[1], body_of(req));
                  }));
        http.Get(R"(/sessions/([^/]+)/jobs/([^/]+))", guarded([this](const httplib::Request& req) {
                     return service.job_status(req.matches[1], req.matches[2]);
                 }));
        http.Post(R"(/sessions/([^/]+)/verdicts)", guarded([this](const httplib::Request& req) {
                      return service.submit_verdict(req.matches[1], body_of(req));
                  }));
        http.Get(R"(/sessions/([^/]+)/export)",
                 guarded([this](const httplib::Request& req) { return service.export_kb(req.matches[1]); }));
        http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty())
                reply(res, res.status,
                      error_json(Error(res.status == 404 ? ErrorCode::UnknownSubject : ErrorCode::MalformedPayload,
                                       "no such endpoint")));
        });
    }
};

Server::Server(SessionService& service, std::string host, int port)
    : impl_(std::make_unique<Impl>(service, std::move(host), port))
{
}

Server::~Server() = default;

bool Server::listen() { return impl_->http.listen(impl_->host, impl_->port); }

int Server::bind_any() { return impl_->http.bind_to_any_port(impl_->host); }

void Server::listen_after_bind() { impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

} // namespace cforge
