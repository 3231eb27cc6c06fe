#pragma once

// In-memory sessions of the dynamic mechanism behind a small JSON protocol:
//
//   POST /sessions                 {fixture} or {instance}
//   GET  /sessions/{id}
//   POST /sessions/{id}/rankings   {officer_id, ranking}
//   GET  /sessions/{id}/report
//   GET  /fixtures, GET /health
//
// Errors are {"error": {"code", "message"}} with a matching HTTP status.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "vfair/cli/commands.hpp"

namespace vfair::cli {

/// What a session view reveals about other officers. Aggregate shows remaining
/// capacities and binding bounds only; Full adds every committed assignment.
enum class Disclosure { Aggregate, Full };
const char* to_string(Disclosure d);
Disclosure parse_disclosure(const std::string& name);

struct ServiceOptions
{
    std::filesystem::path fixture_dir = default_fixture_dir();
    Disclosure disclosure = Disclosure::Aggregate;
};

struct Response
{
    int status = 200;
    ojson body;
};

class SessionService
{
public:
    explicit SessionService(ServiceOptions options = {});

    /// Transport-independent dispatch; safe to call from many threads.
    Response handle(const std::string& method, const std::string& path, const std::string& body);

    /// Blocks serving HTTP until stop(). Returns false if the port could not be bound.
    bool serve(const std::string& host, int port);
    /// Binds an ephemeral port and serves on a background thread; returns the port.
    int serve_background(const std::string& host);
    void stop();

    ~SessionService();

private:
    struct Session;

    Response create(const std::string& body);
    Response view(const std::string& id);
    Response submit(const std::string& id, const std::string& body);
    Response report(const std::string& id);

    std::shared_ptr<Session> find(const std::string& id);
    ojson session_json(const Session& s) const;
    ojson menu_json(const Session& s) const;

    ServiceOptions options_;
    std::mutex registry_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 1;

    struct Http;
    std::unique_ptr<Http> http_;
};

} // namespace vfair::cli
