#include "vfair/cli/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace vfair::cli {

using json = nlohmann::ordered_json;

namespace {

void allow_only(const json& j, const std::string& where, std::initializer_list<const char*> keys)
{
    if (!j.is_object())
        throw ParseError(where + ": expected an object");
    for (const auto& [k, _] : j.items())
        if (std::find_if(keys.begin(), keys.end(), [&](const char* x) { return k == x; }) == keys.end())
            throw ParseError(where + ": unknown field '" + k + "'");
}

const json& need(const json& j, const char* key, const std::string& where)
{
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

std::string need_string(const json& j, const std::string& where)
{
    if (!j.is_string())
        throw ParseError(where + ": expected a string");
    return j.get<std::string>();
}

std::size_t need_count(const json& j, const std::string& where)
{
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        throw ParseError(where + ": expected a non-negative integer");
    return j.get<std::size_t>();
}

const json& need_array(const json& j, const std::string& where)
{
    if (!j.is_array())
        throw ParseError(where + ": expected an array");
    return j;
}

StateIndex state_ref(const json& j, const Problem& pr, const std::string& where)
{
    std::string id = need_string(j, where);
    if (!pr.states().has(id))
        throw ParseError(where + ": unknown state '" + id + "'");
    return pr.states().index(id);
}

std::size_t officer_ref(const std::string& id, const Problem& pr, const std::string& where)
{
    for (std::size_t k = 0; k < pr.officer_count(); ++k)
        if (pr.officer(k).id.value == id)
            return k;
    throw ParseError(where + ": unknown officer '" + id + "'");
}

TypeIndex type_ref(const std::string& id, const Problem& pr, const std::string& where)
{
    for (TypeIndex t = 0; t < pr.type_count(); ++t)
        if (pr.type(t).value == id)
            return t;
    throw ParseError(where + ": unknown type '" + id + "'");
}

Partition parse_zones(const json& j, const Problem& pr, const std::string& where)
{
    std::vector<StateMask> zones;
    std::size_t k = 0;
    for (const auto& z : need_array(j, where)) {
        StateMask mask = 0;
        for (StateIndex s : parse_state_list(z, pr, where + "[" + std::to_string(k) + "]"))
            mask |= bit(s);
        zones.push_back(mask);
        ++k;
    }
    try {
        return Partition(pr.state_count(), zones);
    } catch (const PreconditionError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

MessageSpaceSpec parse_space(const json& j, const Problem& pr, const UpperBoundSystem& h, TypeIndex type,
                             const std::string& where)
{
    allow_only(j, where, {"kind", "zones", "messages"});
    std::string kind = need_string(need(j, "kind", where), where + ".kind");
    auto forbid = [&](const char* key) {
        if (j.contains(key))
            throw ParseError(where + ": field '" + key + "' does not apply to kind '" + kind + "'");
    };
    if (kind == "complete" || kind == "modular") {
        forbid("zones");
        forbid("messages");
        return kind == "complete" ? MessageSpaceSpec::complete(pr.state_count())
                                  : MessageSpaceSpec::modular_induced(h, type, pr.state_count());
    }
    if (kind == "zonal" || kind == "ranked_zonal") {
        forbid("messages");
        Partition p = parse_zones(need(j, "zones", where), pr, where + ".zones");
        return kind == "zonal" ? MessageSpaceSpec::zonal(p) : MessageSpaceSpec::ranked_zonal(p);
    }
    if (kind == "explicit") {
        forbid("zones");
        std::vector<Message> ms;
        std::size_t k = 0;
        for (const auto& m : need_array(need(j, "messages", where), where + ".messages"))
            ms.push_back(parse_message(m, pr, where + ".messages[" + std::to_string(k++) + "]"));
        if (ms.empty())
            throw ParseError(where + ": an explicit space needs at least one message");
        return MessageSpaceSpec::explicit_list(pr.state_count(), std::move(ms));
    }
    throw ParseError(where + ".kind: unknown message space kind '" + kind + "'");
}

// Object keyed by officer id, each value parsed by `f`; absent officers stay empty.
template <class T, class F>
std::vector<std::optional<T>> per_officer(const json& j, const Problem& pr, const std::string& where, F&& f)
{
    if (!j.is_object())
        throw ParseError(where + ": expected an object keyed by officer id");
    std::vector<std::optional<T>> out(pr.officer_count());
    for (const auto& [id, v] : j.items()) {
        std::size_t k = officer_ref(id, pr, where);
        out[k] = f(v, where + "." + id, k);
    }
    return out;
}

Problem parse_problem(const json& doc)
{
    std::vector<StateSlot> states;
    std::set<std::string> state_ids;
    std::size_t k = 0;
    for (const auto& s : need_array(need(doc, "states", "instance"), "states")) {
        std::string where = "states[" + std::to_string(k++) + "]";
        allow_only(s, where, {"id", "capacity"});
        std::string id = need_string(need(s, "id", where), where + ".id");
        if (!state_ids.insert(id).second)
            throw ParseError(where + ": duplicate state id '" + id + "'");
        std::size_t cap = need_count(need(s, "capacity", where), where + ".capacity");
        if (cap == 0)
            throw ParseError(where + ": capacity must be positive");
        states.push_back({StateId{id}, cap});
    }
    if (states.size() > kMaxStates)
        throw ParseError("states: at most " + std::to_string(kMaxStates) + " states are supported");

    struct Row
    {
        std::string id;
        std::string type;
        std::size_t priority;
    };
    std::vector<Row> rows;
    k = 0;
    for (const auto& o : need_array(need(doc, "officers", "instance"), "officers")) {
        std::string where = "officers[" + std::to_string(k++) + "]";
        allow_only(o, where, {"id", "type", "priority"});
        rows.push_back({need_string(need(o, "id", where), where + ".id"),
                        need_string(need(o, "type", where), where + ".type"),
                        need_count(need(o, "priority", where), where + ".priority")});
    }
    std::vector<bool> seen(rows.size() + 1, false);
    for (const auto& r : rows) {
        if (r.priority < 1 || r.priority > rows.size() || seen[r.priority])
            throw ParseError("officers: priority ranks must be a permutation of 1.." + std::to_string(rows.size()) +
                             " (officer '" + r.id + "' has " + std::to_string(r.priority) + ")");
        seen[r.priority] = true;
    }

    std::vector<OfficerType> types;
    if (auto it = doc.find("types"); it != doc.end()) {
        std::size_t t = 0;
        for (const auto& x : need_array(*it, "types"))
            types.emplace_back(need_string(x, "types[" + std::to_string(t++) + "]"));
    } else {
        for (const auto& r : rows)
            if (std::none_of(types.begin(), types.end(), [&](const OfficerType& x) { return x.value == r.type; }))
                types.emplace_back(r.type);
    }
    if (types.empty())
        types.emplace_back("t");

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.priority < b.priority; });
    std::vector<Officer> officers;
    for (const auto& r : rows) {
        auto t = std::find_if(types.begin(), types.end(), [&](const OfficerType& x) { return x.value == r.type; });
        if (t == types.end())
            throw ParseError("officers: officer '" + r.id + "' references unknown type '" + r.type + "'");
        officers.push_back({OfficerId{r.id}, static_cast<TypeIndex>(t - types.begin())});
    }
    try {
        return Problem(std::move(states), std::move(types), std::move(officers));
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
}

UpperBoundSystem parse_bounds(const json& doc, const Problem& pr)
{
    std::vector<UpperBound> out;
    auto it = doc.find("bounds");
    if (it == doc.end())
        return {};
    std::size_t k = 0;
    for (const auto& b : need_array(*it, "bounds")) {
        std::string where = "bounds[" + std::to_string(k++) + "]";
        allow_only(b, where, {"types", "states", "ceiling"});
        UpperBound h;
        for (const auto& t : need_array(need(b, "types", where), where + ".types"))
            h.types |= bit(type_ref(need_string(t, where + ".types"), pr, where + ".types"));
        if (h.types == 0)
            throw ParseError(where + ".types: a bound needs at least one type");
        for (StateIndex s : parse_state_list(need(b, "states", where), pr, where + ".states"))
            h.states |= bit(s);
        h.ceiling = need_count(need(b, "ceiling", where), where + ".ceiling");
        out.push_back(h);
    }
    return UpperBoundSystem(std::move(out));
}

std::vector<MessageSpaceSpec> parse_spaces(const json& doc, const Problem& pr, const UpperBoundSystem& h)
{
    std::optional<json> def;
    std::map<TypeIndex, json> by_type;
    std::map<std::size_t, json> by_officer;
    if (auto it = doc.find("message_spaces"); it != doc.end()) {
        allow_only(*it, "message_spaces", {"default", "types", "officers"});
        if (it->contains("default"))
            def = (*it)["default"];
        if (it->contains("types")) {
            const json& t = (*it)["types"];
            if (!t.is_object())
                throw ParseError("message_spaces.types: expected an object keyed by type");
            for (const auto& [id, v] : t.items())
                by_type[type_ref(id, pr, "message_spaces.types")] = v;
        }
        if (it->contains("officers")) {
            const json& o = (*it)["officers"];
            if (!o.is_object())
                throw ParseError("message_spaces.officers: expected an object keyed by officer");
            for (const auto& [id, v] : o.items())
                by_officer[officer_ref(id, pr, "message_spaces.officers")] = v;
        }
    }
    std::vector<MessageSpaceSpec> out;
    for (std::size_t k = 0; k < pr.officer_count(); ++k) {
        TypeIndex t = pr.type_of(k);
        const std::string& id = pr.officer(k).id.value;
        if (auto o = by_officer.find(k); o != by_officer.end())
            out.push_back(parse_space(o->second, pr, h, t, "message_spaces.officers." + id));
        else if (auto ty = by_type.find(t); ty != by_type.end())
            out.push_back(parse_space(ty->second, pr, h, t, "message_spaces.types." + pr.type(t).value));
        else if (def)
            out.push_back(parse_space(*def, pr, h, t, "message_spaces.default"));
        else
            out.push_back(MessageSpaceSpec::complete(pr.state_count()));
    }
    return out;
}

ZoneRankings parse_zone_rankings(const json& j, const Problem& pr, const UpperBoundSystem& h)
{
    allow_only(j, "zone_rankings", {"types", "officers"});
    auto parts = induced_partitions(pr, h);
    auto ranking_from = [&](const json& v, TypeIndex t, const std::string& where) {
        const Partition& p = parts[t];
        std::vector<std::size_t> order;
        std::size_t k = 0;
        for (const auto& z : need_array(v, where)) {
            StateMask mask = 0;
            std::string zw = where + "[" + std::to_string(k++) + "]";
            for (StateIndex s : parse_state_list(z, pr, zw))
                mask |= bit(s);
            auto found = p.find(mask);
            if (!found)
                throw ParseError(zw + ": " + pr.states().format(mask) + " is not a zone of type '" +
                                 pr.type(t).value + "'");
            order.push_back(*found);
        }
        try {
            return ZoneRanking(p.size(), order);
        } catch (const PreconditionError&) {
            throw ParseError(where + ": every zone of type '" + pr.type(t).value + "' must appear exactly once");
        }
    };
    std::map<TypeIndex, ZoneRanking> by_type;
    if (j.contains("types")) {
        if (!j["types"].is_object())
            throw ParseError("zone_rankings.types: expected an object keyed by type");
        for (const auto& [id, v] : j["types"].items()) {
            TypeIndex t = type_ref(id, pr, "zone_rankings.types");
            by_type[t] = ranking_from(v, t, "zone_rankings.types." + id);
        }
    }
    std::vector<std::optional<ZoneRanking>> by_officer(pr.officer_count());
    if (j.contains("officers"))
        by_officer = per_officer<ZoneRanking>(j["officers"], pr, "zone_rankings.officers",
                                              [&](const json& v, const std::string& where, std::size_t k) {
                                                  return ranking_from(v, pr.type_of(k), where);
                                              });
    ZoneRankings out;
    for (std::size_t k = 0; k < pr.officer_count(); ++k) {
        TypeIndex t = pr.type_of(k);
        if (by_officer[k])
            out.push_back(*by_officer[k]);
        else if (auto it = by_type.find(t); it != by_type.end())
            out.push_back(it->second);
        else
            out.push_back(ZoneRanking::identity(parts[t].size()));
    }
    return out;
}

Profile parse_profile_rows(const json& j, const Problem& pr, const std::string& where)
{
    auto rows = per_officer<Message>(j, pr, where, [&](const json& v, const std::string& w, std::size_t) {
        return parse_message(v, pr, w);
    });
    Profile out;
    for (auto& m : rows)
        out.push_back(m ? *m : Message(pr.state_count()));
    return out;
}

std::string position_of(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

std::vector<StateIndex> parse_state_list(const json& j, const Problem& pr, const std::string& where)
{
    std::vector<StateIndex> out;
    StateMask seen = 0;
    for (const auto& x : need_array(j, where)) {
        StateIndex s = state_ref(x, pr, where);
        if (contains(seen, s))
            throw ParseError(where + ": state '" + pr.states().id(s).value + "' listed twice");
        seen |= bit(s);
        out.push_back(s);
    }
    return out;
}

Message parse_message(const json& j, const Problem& pr, const std::string& where)
{
    std::vector<std::pair<StateId, StateId>> pairs;
    for (const auto& p : need_array(j, where)) {
        if (!p.is_array() || p.size() != 2)
            throw ParseError(where + ": each pair must be [above, below]");
        pairs.emplace_back(StateId{need_string(p[0], where)}, StateId{need_string(p[1], where)});
    }
    try {
        return validate_message(pairs, pr.states());
    } catch (const UnknownId& e) {
        throw ParseError(where + ": " + e.what());
    } catch (const InvalidMessage& e) {
        throw ParseError(where + ": " + e.what());
    }
}

Instance parse_instance(const json& doc)
{
    allow_only(doc, "instance",
               {"name", "description", "mechanism", "officers", "types", "states", "bounds", "message_spaces",
                "preferences", "messages", "zone_rankings", "state_order", "selector_rules", "outcome_table"});
    Instance inst;
    inst.source = doc;
    if (doc.contains("name"))
        inst.name = need_string(doc["name"], "name");
    if (doc.contains("description"))
        inst.description = need_string(doc["description"], "description");
    if (doc.contains("mechanism"))
        inst.mechanism = need_string(doc["mechanism"], "mechanism");
    inst.problem = parse_problem(doc);
    const Problem& pr = inst.problem;
    inst.bounds = parse_bounds(doc, pr);
    inst.spaces = parse_spaces(doc, pr, inst.bounds);

    if (doc.contains("preferences")) {
        auto rows = per_officer<PreferenceOrder>(doc["preferences"], pr, "preferences",
                                                 [&](const json& v, const std::string& where, std::size_t) {
                                                     auto r = parse_state_list(v, pr, where);
                                                     if (r.size() != pr.state_count())
                                                         throw ParseError(where + ": a preference must rank every state");
                                                     return PreferenceOrder(r);
                                                 });
        std::vector<PreferenceOrder> prefs;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (!rows[k])
                throw ParseError("preferences: missing officer '" + pr.officer(k).id.value + "'");
            prefs.push_back(*rows[k]);
        }
        inst.preferences = std::move(prefs);
    }
    if (doc.contains("messages")) {
        inst.messages = parse_profile_rows(doc["messages"], pr, "messages");
        for (std::size_t k = 0; k < pr.officer_count(); ++k)
            if (!inst.spaces[k].contains((*inst.messages)[k]))
                throw ParseError("messages." + pr.officer(k).id.value + ": not in the officer's message space");
    }
    if (doc.contains("zone_rankings"))
        inst.zone_rankings = parse_zone_rankings(doc["zone_rankings"], pr, inst.bounds);
    if (doc.contains("state_order")) {
        inst.state_order = parse_state_list(doc["state_order"], pr, "state_order");
        if (inst.state_order.size() != pr.state_count())
            throw ParseError("state_order: must list every state");
    }
    if (doc.contains("selector_rules")) {
        std::size_t k = 0;
        for (const auto& r : need_array(doc["selector_rules"], "selector_rules")) {
            std::string where = "selector_rules[" + std::to_string(k++) + "]";
            allow_only(r, where, {"officer", "when", "zone"});
            SelectorRule rule;
            rule.officer = officer_ref(need_string(need(r, "officer", where), where + ".officer"), pr, where);
            if (r.contains("when")) {
                auto rows = per_officer<Message>(r["when"], pr, where + ".when", [&](const json& v, const std::string& w, std::size_t) {
                    return parse_message(v, pr, w);
                });
                for (std::size_t o = 0; o < rows.size(); ++o)
                    if (rows[o])
                        rule.when.emplace_back(o, *rows[o]);
            }
            rule.zone_state = state_ref(need(r, "zone", where), pr, where + ".zone");
            inst.selector_rules.push_back(std::move(rule));
        }
    }
    if (doc.contains("outcome_table")) {
        std::size_t k = 0;
        for (const auto& r : need_array(doc["outcome_table"], "outcome_table")) {
            std::string where = "outcome_table[" + std::to_string(k++) + "]";
            allow_only(r, where, {"messages", "allocation"});
            OutcomeRow row;
            row.messages = r.contains("messages") ? parse_profile_rows(r["messages"], pr, where + ".messages")
                                                  : Profile(pr.officer_count(), Message(pr.state_count()));
            auto cells = per_officer<StateIndex>(need(r, "allocation", where), pr, where + ".allocation",
                                                 [&](const json& v, const std::string& w, std::size_t) { return state_ref(v, pr, w); });
            for (std::size_t o = 0; o < cells.size(); ++o) {
                if (!cells[o])
                    throw ParseError(where + ".allocation: missing officer '" + pr.officer(o).id.value + "'");
                row.allocation.push_back(*cells[o]);
            }
            if (!pr.is_feasible(row.allocation))
                throw ParseError(where + ".allocation: exceeds a state's capacity");
            inst.outcome_table.push_back(std::move(row));
        }
    }
    return inst;
}

Instance parse_instance_text(const std::string& text, const std::string& origin)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": JSON syntax error at " + position_of(text, e.byte) + ": " + e.what());
    }
    try {
        return parse_instance(doc);
    } catch (const ParseError& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

Instance load_instance(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open instance file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance_text(ss.str(), path.string());
}

std::filesystem::path default_fixture_dir()
{
    if (const char* env = std::getenv("VFAIR_FIXTURE_DIR"))
        return env;
#ifdef VFAIR_FIXTURE_DIR
    return VFAIR_FIXTURE_DIR;
#else
    return "fixtures";
#endif
}

std::vector<std::string> fixture_names(const std::filesystem::path& dir)
{
    std::vector<std::string> out;
    if (!std::filesystem::is_directory(dir))
        return out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json")
            out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

Instance resolve_instance(const std::string& ref, const std::filesystem::path& dir)
{
    std::filesystem::path p(ref);
    if (std::filesystem::is_regular_file(p))
        return load_instance(p);
    auto fixture = dir / (ref + ".json");
    if (ref.find('/') == std::string::npos && std::filesystem::is_regular_file(fixture))
        return load_instance(fixture);
    throw ParseError("no instance file or fixture named '" + ref + "'");
}

Profile reported_profile(const Instance& inst)
{
    if (inst.messages)
        return *inst.messages;
    if (!inst.preferences)
        throw PreconditionError("the instance gives neither messages nor preferences");
    Profile out;
    for (std::size_t k = 0; k < inst.problem.officer_count(); ++k)
        out.push_back(truthful_message(inst.spaces[k], (*inst.preferences)[k]));
    return out;
}

ZoneRankings exogenous_rankings(const Instance& inst)
{
    return inst.zone_rankings ? *inst.zone_rankings : default_zone_rankings(inst.problem, inst.bounds);
}

} // namespace vfair::cli
