#include "sarplan/service.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "sarplan/core.hpp"
#include "sarplan/error.hpp"

namespace sarplan::service {

namespace {

constexpr std::size_t kMaxBodyBytes = 256u << 20;

Response failure(std::exception_ptr e)
{
    const auto f = core::classify(e);
    spdlog::warn("request failed ({}): {}", f.http_status, f.message);
    return {f.http_status, core::error_document(f)};
}

nlohmann::json parse_body(const std::string& body)
{
    auto doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw InvalidParameter("body", "request body is not valid JSON");
    return doc;
}

} // namespace

struct Service::Impl {
    explicit Impl(terrain::DemRaster d) : dem(std::move(d)) {}
    terrain::DemRaster dem;
    httplib::Server server;
};

Service::Service(terrain::DemRaster dem) : impl_(std::make_unique<Impl>(std::move(dem)))
{
    auto& srv = impl_->server;
    srv.set_payload_max_length(kMaxBodyBytes);
    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Headers", "Content-Type"},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        const auto out = handle(req.method, req.path, req.body);
        res.status = out.status;
        res.set_content(out.body, "application/json");
    };
    srv.Get("/api/health", route);
    srv.Post("/api/plan", route);
    srv.Post("/api/audit", route);
    srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    srv.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::info("{} {} -> {}", req.method, req.path, res.status);
    });
}

Service::~Service() = default;

Response Service::handle(const std::string& method, const std::string& path, const std::string& body) const
{
    try {
        if (method == "GET" && path == "/api/health") {
            const nlohmann::json doc = {{"status", "ok"}, {"version", core::version()}};
            return {200, doc.dump(2) + "\n"};
        }
        if (method == "POST" && path == "/api/plan")
            return {200, core::plan_document(impl_->dem, core::plan_request_from_json(parse_body(body)))};
        if (method == "POST" && path == "/api/audit")
            return {200, core::audit_document(core::audit_request_from_json(parse_body(body)))};
        const nlohmann::json doc = {{"error", "no route for " + method + " " + path}, {"field", nullptr}};
        return {404, doc.dump(2) + "\n"};
    } catch (...) {
        return failure(std::current_exception());
    }
}

int Service::bind(const std::string& host, int port)
{
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

} // namespace sarplan::service
