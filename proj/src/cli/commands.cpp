#include "vfair/cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vfair/combinatorics.hpp"

namespace vfair::cli {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::vector<Partition> officer_partitions(const Instance& inst)
{
    std::vector<Partition> out;
    for (const auto& sp : inst.spaces) {
        if (!sp.has_partition())
            throw PreconditionError("an explicit message space has no zones");
        out.push_back(sp.partition());
    }
    return out;
}

ZoneSelector with_rules(const Instance& inst, ZoneSelector fallback)
{
    if (inst.selector_rules.empty())
        return fallback;
    return [rules = inst.selector_rules, fallback](const ZoneContext& ctx) -> std::size_t {
        for (const auto& r : rules) {
            if (r.officer != ctx.officer)
                continue;
            bool match = true;
            for (const auto& [o, m] : r.when)
                if (!(ctx.profile.at(o) == m))
                    match = false;
            std::size_t z = ctx.partition.zone_of(r.zone_state);
            if (match && (ctx.partition.zone(z) & ctx.available) != 0)
                return z;
        }
        return fallback(ctx);
    };
}

void require_complete_spaces(const Instance& inst)
{
    for (std::size_t k = 0; k < inst.spaces.size(); ++k)
        if (inst.spaces[k].kind() != SpaceKind::Complete)
            throw PreconditionError("serial dictatorship needs complete preferences, but officer " +
                                    inst.problem.officer(k).id.value + " has a " + to_string(inst.spaces[k].kind()) +
                                    " message space");
}

} // namespace

const char* to_string(MechanismKind k)
{
    switch (k) {
    case MechanismKind::Sd: return "sd";
    case MechanismKind::MQueue: return "mqueue";
    case MechanismKind::Pp: return "pp";
    case MechanismKind::Rpp: return "rpp";
    case MechanismKind::Modular: return "modular";
    case MechanismKind::DynamicModular: return "dynamic-modular";
    case MechanismKind::Table: return "table";
    }
    return "?";
}

MechanismKind parse_mechanism(const std::string& name)
{
    for (auto k : {MechanismKind::Sd, MechanismKind::MQueue, MechanismKind::Pp, MechanismKind::Rpp,
                   MechanismKind::Modular, MechanismKind::DynamicModular, MechanismKind::Table})
        if (name == to_string(k))
            return k;
    throw ParseError("unknown mechanism '" + name + "'");
}

MechanismKind choose_mechanism(const Instance& inst, const std::optional<std::string>& flag)
{
    if (flag)
        return parse_mechanism(*flag);
    if (!inst.mechanism.empty())
        return parse_mechanism(inst.mechanism);
    throw ParseError("no mechanism given: pass --mechanism or set the instance's mechanism field");
}

MechanismUnderTest::Outcome outcome_function(const Instance& inst, MechanismKind kind)
{
    const Problem& pr = inst.problem;
    switch (kind) {
    case MechanismKind::Sd:
        require_complete_spaces(inst);
        return [pr](const Profile& p) { return m_queue_run(pr, p, first_maximal_state()).allocation; };
    case MechanismKind::MQueue: {
        StateSelector sel = inst.state_order.empty() ? first_maximal_state() : fixed_state_order(inst.state_order);
        return [pr, sel](const Profile& p) { return m_queue_run(pr, p, sel).allocation; };
    }
    case MechanismKind::Pp: {
        auto parts = officer_partitions(inst);
        auto sel = with_rules(inst, first_available_zone());
        return [pr, parts, sel](const Profile& p) { return partitioned_priority_run(pr, parts, p, sel).allocation; };
    }
    case MechanismKind::Rpp: {
        for (std::size_t k = 0; k < inst.spaces.size(); ++k)
            if (inst.spaces[k].kind() != SpaceKind::RankedZonal)
                throw PreconditionError("ranked partitioned priority needs ranked_zonal spaces; officer " +
                                        pr.officer(k).id.value + " has " + to_string(inst.spaces[k].kind()));
        auto parts = officer_partitions(inst);
        auto sel = with_rules(inst, highest_ranked_available_zone());
        return [pr, parts, sel](const Profile& p) {
            return ranked_partitioned_priority_run(pr, parts, p, sel).allocation;
        };
    }
    case MechanismKind::Modular: {
        auto h = inst.bounds;
        auto exo = exogenous_rankings(inst);
        return [pr, h, exo](const Profile& p) { return modular_priority_run(pr, h, exo, p).allocation; };
    }
    case MechanismKind::Table: {
        if (inst.outcome_table.empty())
            throw PreconditionError("the instance has no outcome_table");
        auto rows = inst.outcome_table;
        return [rows, pr](const Profile& p) {
            for (const auto& r : rows)
                if (r.messages == p)
                    return r.allocation;
            std::string text;
            for (std::size_t k = 0; k < p.size(); ++k)
                text += (k ? "; " : "") + pr.officer(k).id.value + ": " + format_message(p[k], pr.states());
            throw PreconditionError("outcome_table has no row for profile " + text);
        };
    }
    case MechanismKind::DynamicModular:
        break;
    }
    throw PreconditionError("the dynamic mechanism elicits rankings over menus, not messages");
}

RunResult run_engine(const Instance& inst, MechanismKind kind, const Profile& profile)
{
    const Problem& pr = inst.problem;
    switch (kind) {
    case MechanismKind::Sd:
        require_complete_spaces(inst);
        return m_queue_run(pr, profile, first_maximal_state());
    case MechanismKind::MQueue:
        return m_queue_run(pr, profile,
                           inst.state_order.empty() ? first_maximal_state() : fixed_state_order(inst.state_order));
    case MechanismKind::Pp:
        return partitioned_priority_run(pr, officer_partitions(inst), profile, with_rules(inst, first_available_zone()));
    case MechanismKind::Rpp:
        outcome_function(inst, kind);  // space check
        return ranked_partitioned_priority_run(pr, officer_partitions(inst), profile,
                                               with_rules(inst, highest_ranked_available_zone()));
    case MechanismKind::Modular:
        return modular_priority_run(pr, inst.bounds, exogenous_rankings(inst), profile);
    case MechanismKind::Table: {
        RunResult r;
        r.allocation = outcome_function(inst, kind)(profile);
        r.messages = profile;
        return r;
    }
    case MechanismKind::DynamicModular:
        break;
    }
    throw PreconditionError("the dynamic mechanism elicits rankings over menus, not messages");
}

RankingProvider file_provider(const Instance& inst, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open provider file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    ojson doc;
    try {
        doc = ojson::parse(ss.str());
    } catch (const ojson::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!doc.is_object())
        throw ParseError(path.string() + ": expected an object keyed by officer id");
    std::vector<std::optional<std::vector<StateIndex>>> lists(inst.problem.officer_count());
    for (const auto& [id, v] : doc.items()) {
        std::size_t k = 0;
        try {
            k = inst.problem.officer_index(id);
        } catch (const UnknownId&) {
            throw ParseError(path.string() + ": unknown officer '" + id + "'");
        }
        lists[k] = parse_state_list(v, inst.problem, path.string() + "." + id);
    }
    return [lists, pr = inst.problem](const Menu& menu) {
        const auto& l = lists.at(menu.officer);
        if (!l)
            throw InvalidRanking("provider file has no ranking for officer " + pr.officer(menu.officer).id.value);
        std::vector<StateIndex> out;
        for (StateIndex s : *l)
            if (contains(menu.z1, s))
                out.push_back(s);
        return out;
    };
}

RunResult prompt_run(const Problem& problem, const UpperBoundSystem& h, std::istream& in, std::ostream& out)
{
    DynamicModularSession session(problem, h);
    while (!session.complete()) {
        Menu menu = session.menu();
        out << "officer " << problem.officer(menu.officer).id.value << " (round " << menu.round + 1 << "): rank";
        for (StateIndex s : problem.states().sorted(menu.z1))
            out << ' ' << problem.states().id(s).value << " (" << menu.remaining[s] << " left)";
        out << '\n';
        for (std::size_t b : menu.binding)
            out << "  binding: " << bound_json(problem, h, b)["description"].get<std::string>() << '\n';
        out << "> " << std::flush;
        std::string line;
        if (!std::getline(in, line))
            throw PreconditionError("input ended before every officer ranked");
        for (char& c : line)
            if (c == ',' || c == '>')
                c = ' ';
        std::istringstream words(line);
        std::vector<StateIndex> ranking;
        std::string w;
        bool known = true;
        while (words >> w) {
            if (!problem.states().has(w)) {
                out << "unknown state '" << w << "'\n";
                known = false;
                break;
            }
            ranking.push_back(problem.states().index(w));
        }
        if (!known)
            continue;
        try {
            StateIndex s = session.submit(ranking);
            out << problem.officer(menu.officer).id.value << " -> " << problem.states().id(s).value << '\n';
        } catch (const InvalidRanking& e) {
            out << e.what() << '\n';
        }
    }
    return RunResult{session.allocation(), session.trace(), session.messages()};
}

std::vector<AuditKind> default_audits(const Instance& inst)
{
    std::vector<AuditKind> out{AuditKind::Fairness, AuditKind::Bounds};
    if (inst.preferences)
        out.push_back(AuditKind::Cpe);
    return out;
}

AuditReport run_command(const Instance& inst, const RunOptions& options)
{
    auto start = std::chrono::steady_clock::now();
    MechanismKind kind = choose_mechanism(inst, options.mechanism);
    RunResult r;
    if (kind == MechanismKind::DynamicModular) {
        if (options.provider == "truth") {
            if (!inst.preferences)
                throw PreconditionError("the truth provider needs preferences in the instance");
            r = dynamic_modular_priority_run(inst.problem, inst.bounds, truthful_provider(*inst.preferences));
        } else if (options.provider == "file") {
            if (!options.provider_file)
                throw ParseError("--provider file needs --rankings <file>");
            r = dynamic_modular_priority_run(inst.problem, inst.bounds, file_provider(inst, *options.provider_file));
        } else if (options.provider == "prompt") {
            r = prompt_run(inst.problem, inst.bounds, options.in ? *options.in : std::cin,
                           options.out ? *options.out : std::cerr);
        } else {
            throw ParseError("unknown provider '" + options.provider + "'");
        }
    } else {
        r = run_engine(inst, kind, reported_profile(inst));
    }
    AuditReport rep;
    rep.instance = inst.name;
    rep.mechanism = to_string(kind);
    rep.allocation = r.allocation;
    rep.messages = r.messages;
    rep.trace = r.trace;
    AuditInputs in{inst.problem, inst.bounds, rep.allocation, rep.messages, inst.preferences, options.budget};
    for (AuditKind a : options.audits ? *options.audits : default_audits(inst))
        rep.audits.push_back(run_audit(a, in));
    if (options.timing)
        rep.elapsed_ms = elapsed_since(start);
    return rep;
}

namespace {

CheckResult inconclusive(ojson report, const CapExceeded& e)
{
    report["verdict"] = "inconclusive";
    report["note"] = e.what();
    report["count"] = e.count();
    report["cap"] = e.cap();
    return {Verdict::Inconclusive, std::move(report)};
}

CheckResult finish(ojson report, Verdict v)
{
    report["verdict"] = to_string(v);
    return {v, std::move(report)};
}

std::optional<Property> property_named(const std::string& name)
{
    if (name == "sp")
        return Property::StrategyProof;
    if (name == "coherence")
        return Property::Coherence;
    if (name == "expressiveness")
        return Property::Expressiveness;
    if (name == "availability")
        return Property::Availability;
    if (name == "weak-availability")
        return Property::WeakAvailability;
    return std::nullopt;
}

CheckResult check_dynamic_sp(const Instance& inst, ojson report)
{
    const Problem& pr = inst.problem;
    std::vector<std::vector<PreferenceOrder>> candidates;
    if (inst.preferences) {
        candidates.push_back(*inst.preferences);
    } else {
        auto all = all_preferences(pr.state_count());
        std::uint64_t count = 1;
        for (std::size_t k = 0; k < pr.officer_count(); ++k)
            count = saturating_mul(count, all.size());
        if (count > kDefaultProfileCap)
            return inconclusive(std::move(report), CapExceeded("preference profiles", count, kDefaultProfileCap));
        std::vector<std::size_t> radix(pr.officer_count(), all.size());
        MixedRadix digits(radix);
        do {
            std::vector<PreferenceOrder> prefs;
            for (std::size_t d : digits.digits())
                prefs.push_back(all[d]);
            candidates.push_back(std::move(prefs));
        } while (digits.next());
    }
    report["profiles"] = candidates.size();
    for (const auto& prefs : candidates) {
        if (auto w = check_dynamic_stepwise_dominance(pr, inst.bounds, prefs)) {
            ojson r = ojson::array();
            for (StateIndex s : w->ranking)
                r.push_back(pr.states().id(s).value);
            report["witness"] = {{"officer", pr.officer(w->officer).id.value}, {"ranking", r},
                                 {"truthful", pr.states().id(w->truthful).value},
                                 {"deviated", pr.states().id(w->deviated).value}};
            return finish(std::move(report), Verdict::Fail);
        }
    }
    return finish(std::move(report), Verdict::Pass);
}

} // namespace

CheckResult check_command(const Instance& inst, const CheckOptions& options)
{
    auto start = std::chrono::steady_clock::now();
    const Problem& pr = inst.problem;
    ojson report;
    report["instance"] = inst.name;
    report["check"] = options.check;
    CheckResult result;
    try {
        if (options.check == "solvency") {
            auto r = check_sequential_solvency(pr, inst.bounds, SolvencyOptions{options.budget});
            report["nodes"] = r.nodes;
            if (r.counterexample) {
                const auto& cx = *r.counterexample;
                ojson occ = ojson::object();
                for (TypeIndex t = 0; t < pr.type_count(); ++t) {
                    ojson row = ojson::object();
                    for (StateIndex s = 0; s < pr.state_count(); ++s)
                        if (cx.occupancy[t][s] > 0)
                            row[pr.states().id(s).value] = cx.occupancy[t][s];
                    occ[pr.type(t).value] = row;
                }
                ojson w = {{"stranded_type", pr.type(cx.officer_type).value}, {"occupancy", occ}};
                w["verified"] = verify_solvency_counterexample(pr.capacities(), pr.type_counts(), inst.bounds, cx);
                auto replay = build_solvency_replay(pr, inst.bounds, cx);
                try {
                    modular_priority_run(replay.problem, inst.bounds, replay.exo, replay.profile);
                    w["replayed"] = false;
                } catch (const NoAdmissibleZone& e) {
                    w["replayed"] = true;
                    w["replay_error"] = e.what();
                }
                report["witness"] = w;
            }
            result = finish(std::move(report), r.verdict);
        } else if (options.check == "richness") {
            Verdict v = Verdict::Pass;
            for (std::size_t k = 0; k < inst.spaces.size() && v == Verdict::Pass; ++k) {
                auto r = check_richness(inst.spaces[k]);
                if (!r.rich) {
                    v = Verdict::Fail;
                    report["witness"] = {{"officer", pr.officer(k).id.value},
                                         {"message", message_json(pr, *r.message)},
                                         {"pair", {pr.states().id(r.pair->first).value, pr.states().id(r.pair->second).value}},
                                         {"text", "no message reverses " + pr.states().id(r.pair->first).value + ">" +
                                                      pr.states().id(r.pair->second).value}};
                }
            }
            result = finish(std::move(report), v);
        } else if (options.check == "fairness-sweep") {
            MechanismKind kind = choose_mechanism(inst, options.mechanism);
            report["mechanism"] = to_string(kind);
            MechanismUnderTest mech(to_string(kind), pr, inst.spaces, outcome_function(inst, kind));
            report["profiles"] = mech.profile_count();
            Verdict v = Verdict::Pass;
            for (std::uint64_t x = 0; x < mech.profile_count() && v == Verdict::Pass; ++x) {
                Profile p = mech.profile(mech.digits(x));
                Allocation a = mech.allocation(x);
                if (auto w = visibly_unfair_witness(pr, a, p)) {
                    v = Verdict::Fail;
                    report["witness"] = {{"profile", profile_json(pr, p)}, {"allocation", allocation_json(pr, a)},
                                         {"fairness", witness_json(pr, *w)}};
                } else if (!reconstruct_m_queue(pr, a, p)) {
                    v = Verdict::Fail;
                    report["witness"] = {{"profile", profile_json(pr, p)}, {"allocation", allocation_json(pr, a)},
                                         {"note", "allocation is not an m-queue outcome"}};
                }
            }
            result = finish(std::move(report), v);
        } else if (auto prop = property_named(options.check)) {
            MechanismKind kind = choose_mechanism(inst, options.mechanism);
            report["mechanism"] = to_string(kind);
            if (kind == MechanismKind::DynamicModular) {
                if (*prop != Property::StrategyProof)
                    throw PreconditionError("only sp is checked for the dynamic mechanism");
                result = check_dynamic_sp(inst, std::move(report));
            } else {
                MechanismUnderTest mech(to_string(kind), pr, inst.spaces, outcome_function(inst, kind));
                report["profiles"] = mech.profile_count();
                auto w = check_property(mech, *prop);
                if (w) {
                    report["witness"] = deviation_json(mech, *w);
                    report["witness"]["replays"] = witness_replays(mech, *prop, *w);
                }
                result = finish(std::move(report), w ? Verdict::Fail : Verdict::Pass);
            }
        } else {
            throw ParseError("unknown check '" + options.check + "'");
        }
    } catch (const CapExceeded& e) {
        report["instance"] = inst.name;
        report["check"] = options.check;
        result = inconclusive(std::move(report), e);
    }
    if (options.timing)
        result.report["elapsed_ms"] = elapsed_since(start);
    return result;
}

ojson fixtures_list(const std::filesystem::path& dir)
{
    ojson out = ojson::array();
    for (const auto& name : fixture_names(dir)) {
        Instance inst = load_instance(dir / (name + ".json"));
        out.push_back({{"name", name}, {"description", inst.description}});
    }
    return out;
}

} // namespace vfair::cli
