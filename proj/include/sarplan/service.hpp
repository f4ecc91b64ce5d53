#pragma once

#include <memory>
#include <string>

#include "sarplan/terrain.hpp"

namespace sarplan::service {

struct Response {
    int status = 200;
    std::string body;
};

// HTTP front end over the shared core. The DEM is loaded once and read-only
// afterwards; requests are otherwise stateless.
class Service {
public:
    explicit Service(terrain::DemRaster dem);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Routing without sockets; the HTTP handlers call this.
    Response handle(const std::string& method, const std::string& path, const std::string& body) const;

    // Binds to host:port (0 picks a free port) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace sarplan::service
