#include "vfair/cli/service.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>

namespace vfair::cli {

namespace {

Response error(int status, const std::string& code, const std::string& message)
{
    return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

std::vector<std::string> split_path(const std::string& path)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : path) {
        if (c == '/') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

} // namespace

const char* to_string(Disclosure d)
{
    return d == Disclosure::Full ? "full" : "aggregate";
}

Disclosure parse_disclosure(const std::string& name)
{
    if (name == "aggregate")
        return Disclosure::Aggregate;
    if (name == "full")
        return Disclosure::Full;
    throw ParseError("unknown disclosure '" + name + "'");
}

struct SessionService::Session
{
    std::string id;
    Instance instance;
    DynamicModularSession engine;
    std::vector<std::vector<StateIndex>> rankings;
    std::mutex busy;

    Session(std::string i, Instance inst)
        : id(std::move(i)), instance(std::move(inst)), engine(instance.problem, instance.bounds)
    {
    }

    bool blocked() const { return !engine.complete() && engine.menu().z1 == 0; }
    std::string status() const
    {
        if (engine.complete())
            return "complete";
        return blocked() ? "blocked" : "awaiting-input";
    }
};

struct SessionService::Http
{
    httplib::Server server;
    std::thread thread;
};

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {}

SessionService::~SessionService()
{
    stop();
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id)
{
    std::lock_guard lock(registry_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

ojson SessionService::menu_json(const Session& s) const
{
    const Problem& pr = s.instance.problem;
    Menu m = s.engine.menu();
    ojson states = ojson::array();
    for (StateIndex x : pr.states().sorted(m.z1))
        states.push_back({{"id", pr.states().id(x).value}, {"remaining", m.remaining[x]}});
    ojson binding = ojson::array();
    for (std::size_t b : m.binding)
        binding.push_back(bound_json(pr, s.instance.bounds, b));
    return {{"round", m.round + 1},
            {"officer_id", pr.officer(m.officer).id.value},
            {"officer_type", pr.type(pr.type_of(m.officer)).value},
            {"states", states},
            {"binding", binding}};
}

ojson SessionService::session_json(const Session& s) const
{
    const Problem& pr = s.instance.problem;
    ojson j;
    j["session_id"] = s.id;
    j["instance"] = s.instance.name;
    j["status"] = s.status();
    j["disclosure"] = to_string(options_.disclosure);
    j["officer_count"] = pr.officer_count();
    j["committed_count"] = s.engine.round();
    ojson remaining = ojson::object();
    for (StateIndex x = 0; x < pr.state_count(); ++x)
        remaining[pr.states().id(x).value] = s.engine.remaining()[x];
    j["remaining"] = remaining;
    Allocation partial = s.engine.allocation();
    partial.resize(pr.officer_count(), kUnassigned);
    ojson binding = ojson::array();
    for (std::size_t b = 0; b < s.instance.bounds.size(); ++b)
        if (bound_count(s.instance.bounds.bound(b), pr, partial) >= s.instance.bounds.bound(b).ceiling)
            binding.push_back(bound_json(pr, s.instance.bounds, b));
    j["binding"] = binding;
    if (options_.disclosure == Disclosure::Full) {
        ojson a = ojson::object();
        for (std::size_t k = 0; k < s.engine.round(); ++k)
            a[pr.officer(k).id.value] = pr.states().id(partial[k]).value;
        j["assignments"] = a;
    }
    if (s.engine.complete())
        j["allocation"] = allocation_json(pr, s.engine.allocation());
    else
        j["menu"] = menu_json(s);
    return j;
}

Response SessionService::create(const std::string& body)
{
    ojson req;
    try {
        req = ojson::parse(body);
    } catch (const ojson::parse_error& e) {
        return error(400, "malformed_request", e.what());
    }
    if (!req.is_object() || req.size() != 1 || !(req.contains("fixture") || req.contains("instance")))
        return error(400, "malformed_request", "body must be {\"fixture\": name} or {\"instance\": {...}}");
    Instance inst;
    try {
        if (req.contains("fixture")) {
            if (!req["fixture"].is_string())
                return error(400, "malformed_request", "fixture must be a string");
            std::string name = req["fixture"].get<std::string>();
            auto names = fixture_names(options_.fixture_dir);
            if (std::find(names.begin(), names.end(), name) == names.end())
                return error(404, "unknown_fixture", "no fixture named '" + name + "'");
            inst = load_instance(options_.fixture_dir / (name + ".json"));
        } else {
            inst = parse_instance(req["instance"]);
        }
    } catch (const Error& e) {
        return error(422, "invalid_instance", e.what());
    }
    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(registry_);
        std::string id = "session-" + std::to_string(next_id_++);
        s = std::make_shared<Session>(id, std::move(inst));
        sessions_[id] = s;
    }
    std::lock_guard lock(s->busy);
    return {201, session_json(*s)};
}

Response SessionService::view(const std::string& id)
{
    auto s = find(id);
    if (!s)
        return error(404, "unknown_session", "no session '" + id + "'");
    std::lock_guard lock(s->busy);
    return {200, session_json(*s)};
}

Response SessionService::submit(const std::string& id, const std::string& body)
{
    auto s = find(id);
    if (!s)
        return error(404, "unknown_session", "no session '" + id + "'");
    std::unique_lock lock(s->busy, std::try_to_lock);
    if (!lock.owns_lock())
        return error(409, "session_busy", "another submission for this session is in flight");
    const Problem& pr = s->instance.problem;
    ojson req;
    try {
        req = ojson::parse(body);
    } catch (const ojson::parse_error& e) {
        return error(400, "malformed_request", e.what());
    }
    if (!req.is_object() || req.size() != 2 || !req.contains("officer_id") || !req.contains("ranking") ||
        !req["officer_id"].is_string() || !req["ranking"].is_array())
        return error(400, "malformed_request", "body must be {\"officer_id\": id, \"ranking\": [state, ...]}");
    if (s->engine.complete())
        return error(409, "session_complete", "every officer has been assigned");
    std::string officer = req["officer_id"].get<std::string>();
    Menu menu = s->engine.menu();
    if (officer != pr.officer(menu.officer).id.value)
        return error(409, "stale_round", "round " + std::to_string(menu.round + 1) + " belongs to " +
                                             pr.officer(menu.officer).id.value + ", not " + officer);
    std::vector<StateIndex> ranking;
    for (const auto& x : req["ranking"]) {
        if (!x.is_string())
            return error(400, "malformed_request", "ranking entries must be state ids");
        if (!pr.states().has(x.get<std::string>()))
            return error(422, "invalid_ranking", "unknown state '" + x.get<std::string>() + "'");
        ranking.push_back(pr.states().index(x.get<std::string>()));
    }
    StateIndex got = 0;
    try {
        got = s->engine.submit(ranking);
    } catch (const InvalidRanking& e) {
        return error(422, "invalid_ranking", e.what());
    } catch (const NoAdmissibleZone& e) {
        return error(409, "no_admissible_state", e.what());
    }
    s->rankings.push_back(ranking);
    ojson out = session_json(*s);
    out["committed"] = {{"officer_id", officer}, {"state", pr.states().id(got).value}};
    return {200, out};
}

Response SessionService::report(const std::string& id)
{
    auto s = find(id);
    if (!s)
        return error(404, "unknown_session", "no session '" + id + "'");
    std::lock_guard lock(s->busy);
    if (!s->engine.complete())
        return error(409, "session_incomplete", "the report is available once every officer has ranked");
    const Instance& inst = s->instance;
    AuditReport rep;
    rep.instance = inst.name;
    rep.mechanism = to_string(MechanismKind::DynamicModular);
    rep.allocation = s->engine.allocation();
    rep.messages = s->engine.messages();
    rep.trace = s->engine.trace();
    AuditInputs in{inst.problem, inst.bounds, rep.allocation, rep.messages, inst.preferences};
    for (AuditKind a : default_audits(inst))
        rep.audits.push_back(run_audit(a, in));
    return {200, report_json(inst.problem, inst.bounds, rep)};
}

Response SessionService::handle(const std::string& method, const std::string& path, const std::string& body)
{
    auto parts = split_path(path);
    try {
        if (parts.size() == 1 && parts[0] == "health") {
            if (method != "GET")
                return error(405, "method_not_allowed", method + " " + path);
            return {200, {{"status", "ok"}}};
        }
        if (parts.size() == 1 && parts[0] == "fixtures") {
            if (method != "GET")
                return error(405, "method_not_allowed", method + " " + path);
            return {200, fixtures_list(options_.fixture_dir)};
        }
        if (parts.empty() || parts[0] != "sessions" || parts.size() > 3)
            return error(404, "not_found", path);
        if (parts.size() == 1) {
            if (method != "POST")
                return error(405, "method_not_allowed", method + " " + path);
            return create(body);
        }
        if (parts.size() == 2) {
            if (method != "GET")
                return error(405, "method_not_allowed", method + " " + path);
            return view(parts[1]);
        }
        if (parts[2] == "rankings") {
            if (method != "POST")
                return error(405, "method_not_allowed", method + " " + path);
            return submit(parts[1], body);
        }
        if (parts[2] == "report") {
            if (method != "GET")
                return error(405, "method_not_allowed", method + " " + path);
            return report(parts[1]);
        }
        return error(404, "not_found", path);
    } catch (const std::exception& e) {
        return error(500, "internal_error", e.what());
    }
}

namespace {

void install(httplib::Server& server, SessionService& svc)
{
    auto dispatch = [&svc](const httplib::Request& req, httplib::Response& res) {
        Response r = svc.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body.dump(), "application/json");
    };
    server.Get(".*", dispatch);
    server.Post(".*", dispatch);
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

} // namespace

bool SessionService::serve(const std::string& host, int port)
{
    if (!http_)
        http_ = std::make_unique<Http>();
    install(http_->server, *this);
    return http_->server.listen(host, port);
}

int SessionService::serve_background(const std::string& host)
{
    if (!http_)
        http_ = std::make_unique<Http>();
    install(http_->server, *this);
    int port = http_->server.bind_to_any_port(host);
    if (port < 0)
        return -1;
    http_->thread = std::thread([this] { http_->server.listen_after_bind(); });
    http_->server.wait_until_ready();
    return port;
}

void SessionService::stop()
{
    if (!http_)
        return;
    http_->server.stop();
    if (http_->thread.joinable())
        http_->thread.join();
}

} // namespace vfair::cli
