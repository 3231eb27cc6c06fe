// One line per acceptance criterion. Exit status is 0 only when every line passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>

#include "vfair/cli/commands.hpp"
#include "vfair/combinatorics.hpp"
#include "vfair/cli/impossibility.hpp"

#include "helpers.hpp"

using namespace vt;
using namespace vfair::cli;

namespace {

struct Result
{
    bool ok = true;
    std::string detail;
};

Result fail(std::string why)
{
    return {false, std::move(why)};
}

Instance fixture(const std::string& name)
{
    return resolve_instance(name, default_fixture_dir());
}

// Independent oracles. None of these call into the audit code.

bool brute_fair(const Problem& pr, const Allocation& a, const Profile& m)
{
    std::vector<std::size_t> used(pr.state_count(), 0);
    for (StateIndex s : a)
        ++used[s];
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[j] != a[i] && m[i].prefers(a[j], a[i]))
                return false;
        for (StateIndex s = 0; s < pr.state_count(); ++s)
            if (s != a[i] && used[s] < pr.capacity(s) && m[i].prefers(s, a[i]))
                return false;
    }
    return true;
}

bool brute_respects(const Problem& pr, const UpperBoundSystem& h, const Allocation& a)
{
    for (const auto& b : h.bounds()) {
        std::size_t count = 0;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (((b.types >> pr.type_of(k)) & 1) && ((b.states >> a[k]) & 1))
                ++count;
        if (count > b.ceiling)
            return false;
    }
    return true;
}

using Better = std::function<bool(std::size_t, StateIndex, StateIndex)>;

std::optional<Allocation> brute_dominator(const Allocation& a, const std::vector<Allocation>& alternatives,
                                          const Better& better)
{
    for (const auto& b : alternatives) {
        if (b == a)
            continue;
        bool all = true;
        for (std::size_t i = 0; i < a.size() && all; ++i)
            if (b[i] != a[i] && !better(i, b[i], a[i]))
                all = false;
        if (all)
            return b;
    }
    return std::nullopt;
}

Better by_prefs(const std::vector<PreferenceOrder>& p)
{
    return [&p](std::size_t i, StateIndex x, StateIndex y) { return p[i].prefers(x, y); };
}

Better by_messages(const Profile& m)
{
    return [&m](std::size_t i, StateIndex x, StateIndex y) { return m[i].prefers(x, y); };
}

Allocation brute_sd(const Problem& pr, const std::vector<PreferenceOrder>& prefs)
{
    std::vector<std::size_t> left = pr.capacities();
    Allocation a;
    for (const auto& p : prefs)
        for (StateIndex s : p.ranking())
            if (left[s] > 0) {
                --left[s];
                a.push_back(s);
                break;
            }
    return a;
}

std::vector<Allocation> respecting(const Problem& pr, const UpperBoundSystem& h)
{
    std::vector<Allocation> out;
    for (auto& a : all_feasible(pr))
        if (brute_respects(pr, h, a))
            out.push_back(std::move(a));
    return out;
}

/// Set partitions of {0..m-1} with every block of size <= max_block, blocks ordered by first state.
std::vector<Partition> partitions(std::size_t m, std::size_t max_block)
{
    std::vector<Partition> out;
    std::vector<std::size_t> rgs(m, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t blocks) {
        if (pos == m) {
            std::vector<StateMask> zones(blocks, 0);
            for (std::size_t s = 0; s < m; ++s)
                zones[rgs[s]] |= bit(s);
            for (StateMask z : zones)
                if (popcount(z) > max_block)
                    return;
            out.emplace_back(m, zones);
            return;
        }
        for (std::size_t b = 0; b <= blocks; ++b) {
            rgs[pos] = b;
            rec(pos + 1, std::max(blocks, b + 1));
        }
    };
    rec(0, 0);
    return out;
}

std::vector<std::vector<std::size_t>> capacity_vectors(std::size_t m, std::size_t n)
{
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t code = 0; code < (std::size_t{1} << m); ++code) {
        std::vector<std::size_t> caps(m);
        std::size_t total = 0;
        for (std::size_t s = 0; s < m; ++s)
            total += caps[s] = 1 + ((code >> s) & 1);
        if (total >= n)
            out.push_back(caps);
    }
    return out;
}

/// Calls f(profile) for every profile drawn from per-officer message lists.
void for_each_profile(const std::vector<std::vector<Message>>& spaces, const std::function<void(const Profile&)>& f)
{
    std::vector<std::size_t> radices;
    for (const auto& s : spaces)
        radices.push_back(s.size());
    MixedRadix odo(radices);
    Profile p(spaces.size());
    do {
        for (std::size_t k = 0; k < spaces.size(); ++k)
            p[k] = spaces[k][odo.digits()[k]];
        f(p);
    } while (odo.next());
}

void for_each_preference_profile(std::size_t n, std::size_t m,
                                 const std::function<void(const std::vector<PreferenceOrder>&)>& f)
{
    auto orders = all_preferences(m);
    std::vector<std::size_t> radices(n, orders.size());
    MixedRadix odo(radices);
    std::vector<PreferenceOrder> prefs(n);
    do {
        for (std::size_t k = 0; k < n; ++k)
            prefs[k] = orders[odo.digits()[k]];
        f(prefs);
    } while (odo.next());
}

// ---------------------------------------------------------------------------

Result fixture_exactness()
{
    Instance inst = fixture("example_6_1");
    const Problem& pr = inst.problem;
    auto u = pr.states();
    Profile truthful = modular_truthful_profile(pr, inst.bounds, *inst.preferences);
    Allocation modular = modular_priority_run(pr, inst.bounds, exogenous_rankings(inst), truthful).allocation;
    if (modular != alloc(u, {"s1", "s2"}))
        return fail("modular run differs from (s1,s2)");
    Allocation dynamic = dynamic_modular_priority_run(pr, inst.bounds, truthful_provider(*inst.preferences)).allocation;
    if (dynamic != alloc(u, {"s2", "s1"}))
        return fail("dynamic run differs from (s2,s1)");
    auto cpe = constrained_pareto_efficient(pr, modular, *inst.preferences, inst.bounds);
    if (cpe.efficient || cpe.dominated_by != alloc(u, {"s2", "s1"}))
        return fail("(s1,s2) not flagged as dominated by (s2,s1)");
    return {true, "modular (s1,s2), dynamic (s2,s1), (s1,s2) dominated by (s2,s1)"};
}

Result example_battery()
{
    struct Expect
    {
        const char* fixture;
        const char* check;
        Verdict verdict;
    };
    const Expect expected[] = {
        {"example_4_1", "sp", Verdict::Pass},
        {"example_4_1", "availability", Verdict::Fail},
        {"example_4_1", "weak-availability", Verdict::Pass},
        {"example_4_1", "expressiveness", Verdict::Pass},
        {"example_4_2", "sp", Verdict::Fail},
        {"example_4_2", "expressiveness", Verdict::Pass},
        {"example_4_2", "weak-availability", Verdict::Fail},
        {"example_pp", "sp", Verdict::Fail},
        {"example_rpp", "expressiveness", Verdict::Fail},
    };
    for (const auto& e : expected) {
        CheckResult r = check_command(fixture(e.fixture), {e.check});
        if (r.verdict != e.verdict)
            return fail(std::string(e.fixture) + " " + e.check + ": " + to_string(r.verdict));
        if (r.verdict == Verdict::Fail && !r.report["witness"]["replays"].get<bool>())
            return fail(std::string(e.fixture) + " " + e.check + ": witness does not replay");
        if (std::string(e.fixture) == "example_pp" && r.report["witness"]["officer"] != "i3")
            return fail("pp witness officer is " + r.report["witness"]["officer"].dump());
    }
    return {true, "9 verdicts match, pp witness i3"};
}

Result m_queue_audit()
{
    std::uint64_t runs = 0;
    std::string problem;
    auto audit = [&](const Problem& pr, const Profile& m, const Allocation& a, const char* engine) {
        ++runs;
        if (!problem.empty())
            return;
        if (!brute_fair(pr, a, m) || visibly_unfair_witness(pr, a, m) || !reconstruct_m_queue(pr, a, m))
            problem = std::string(engine) + " on " + std::to_string(pr.officer_count()) + " officers";
    };
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t m = 2; m <= 4; ++m) {
            std::vector<StateIndex> reverse(m);
            for (std::size_t s = 0; s < m; ++s)
                reverse[s] = m - 1 - s;
            for (const auto& caps : capacity_vectors(m, n)) {
                Problem pr = Problem::uniform(caps, n);
                for (const auto& p : partitions(m, 3)) {
                    std::vector<std::size_t> zones_rev(p.size());
                    for (std::size_t z = 0; z < p.size(); ++z)
                        zones_rev[z] = p.size() - 1 - z;
                    std::vector<Partition> parts(n, p);
                    auto zonal = enumerate_messages(MessageSpaceSpec::zonal(p));
                    for_each_profile(std::vector(n, zonal), [&](const Profile& prof) {
                        audit(pr, prof, m_queue_run(pr, prof, first_maximal_state()).allocation, "m-queue");
                        audit(pr, prof, m_queue_run(pr, prof, fixed_state_order(reverse)).allocation, "m-queue");
                        audit(pr, prof, partitioned_priority_run(pr, parts, prof, first_available_zone()).allocation,
                              "pp");
                        audit(pr, prof,
                              partitioned_priority_run(pr, parts, prof, zone_order_selector(zones_rev)).allocation,
                              "pp");
                    });
                    if (p.size() < 2)
                        continue;
                    auto ranked = enumerate_messages(MessageSpaceSpec::ranked_zonal(p));
                    for_each_profile(std::vector(n, ranked), [&](const Profile& prof) {
                        audit(pr, prof, m_queue_run(pr, prof, first_maximal_state()).allocation, "m-queue");
                        audit(pr, prof, ranked_partitioned_priority_run(pr, parts, prof).allocation, "rpp");
                    });
                }
            }
        }

    // modular engine under a few solvent bound systems, two types
    for (std::size_t n = 2; n <= 3; ++n)
        for (std::size_t m = 2; m <= 4; ++m)
            for (const auto& caps : capacity_vectors(m, n)) {
                std::vector<std::size_t> types(n);
                for (std::size_t k = 0; k < n; ++k)
                    types[k] = k % 2;
                Problem pr = typed_problem(caps, types, 2);
                std::vector<UpperBoundSystem> systems{
                    UpperBoundSystem({{1, 1, 1}}),
                    UpperBoundSystem({{3, 3, 1}}),
                    UpperBoundSystem({{1, 1, 0}, {2, StateMask{6}, 1}}),
                };
                for (const auto& h : systems) {
                    bool fits = true;
                    for (const auto& b : h.bounds())
                        fits = fits && (b.states >> m) == 0;
                    if (!fits || check_sequential_solvency(pr, h).verdict != Verdict::Pass)
                        continue;
                    bool small = true;
                    std::vector<std::vector<Message>> spaces;
                    for (std::size_t k = 0; k < n; ++k) {
                        auto spec = MessageSpaceSpec::modular_induced(h, pr.type_of(k), m);
                        for (StateMask z : spec.partition().zones())
                            small = small && popcount(z) <= 3;
                        spaces.push_back(enumerate_messages(spec));
                    }
                    if (!small)
                        continue;
                    ZoneRankings exo = default_zone_rankings(pr, h);
                    for_each_profile(spaces, [&](const Profile& prof) {
                        auto r = modular_priority_run(pr, h, exo, prof);
                        if (!brute_respects(pr, h, r.allocation))
                            problem = "modular broke a bound";
                        audit(pr, prof, r.allocation, "modular");
                    });
                }
            }
    if (!problem.empty())
        return fail(problem);

    Problem a8 = Problem::uniform({1, 1}, 2);
    auto u = a8.states();
    Profile both{order_msg(u, {"s1", "s2"}), order_msg(u, {"s1", "s2"})};
    if (reconstruct_m_queue(a8, alloc(u, {"s2", "s1"}), both) || brute_fair(a8, alloc(u, {"s2", "s1"}), both))
        return fail("the unfair allocation (s2,s1) reconstructs");
    return {true, std::to_string(runs) + " runs fair and reconstructed; (s2,s1) rejected"};
}

Result complete_spaces_are_sd()
{
    std::uint64_t runs = 0;
    for (const auto& caps : std::vector<std::vector<std::size_t>>{{1, 1, 1}, {2, 1, 1}}) {
        Problem pr = Problem::uniform(caps, 3);
        UpperBoundSystem none;
        std::vector<Partition> single(3, Partition::single(3));
        ZoneRankings exo = default_zone_rankings(pr, none);
        std::vector<StateSelector> policies{first_maximal_state()};
        for_each_permutation(std::vector<StateIndex>{0, 1, 2}, [&](const std::vector<StateIndex>& order) {
            policies.push_back(fixed_state_order(order));
            return true;
        });
        std::string bad;
        for_each_preference_profile(3, 3, [&](const std::vector<PreferenceOrder>& prefs) {
            Allocation sd = brute_sd(pr, prefs);
            Profile prof;
            for (const auto& p : prefs)
                prof.push_back(complete_message(p));
            std::vector<std::pair<const char*, Allocation>> got{
                {"serial_dictatorship", serial_dictatorship(pr, prefs)},
                {"pp", partitioned_priority_run(pr, single, prof, first_available_zone()).allocation},
                {"rpp", ranked_partitioned_priority_run(pr, single, prof).allocation},
                {"modular", modular_priority_run(pr, none, exo, prof).allocation},
                {"dynamic", dynamic_modular_priority_run(pr, none, truthful_provider(prefs)).allocation},
            };
            for (const auto& pol : policies)
                got.emplace_back("m-queue", m_queue_run(pr, prof, pol).allocation);
            for (const auto& [name, a] : got) {
                ++runs;
                if (a != sd && bad.empty())
                    bad = name;
            }
        });
        if (!bad.empty())
            return fail(std::string(bad) + " differs from serial dictatorship");
    }
    return {true, std::to_string(runs) + " runs equal serial dictatorship"};
}

struct Battery
{
    std::string name;
    Problem problem;
    std::vector<MessageSpaceSpec> spaces;
    MechanismUnderTest::Outcome outcome;
};

std::vector<Battery> engine_battery()
{
    std::vector<Battery> out;
    struct Shape
    {
        std::vector<std::size_t> caps;
        std::size_t n;
    };
    const Shape shapes[] = {{{1, 1}, 2}, {{2, 1}, 2}, {{2, 1}, 3}, {{2, 2}, 3},
                            {{1, 1, 1}, 2}, {{1, 1, 1}, 3}, {{2, 1, 1}, 3}};
    for (const auto& sh : shapes) {
        Problem pr = Problem::uniform(sh.caps, sh.n);
        const std::size_t m = sh.caps.size(), n = sh.n;
        std::string tag = std::to_string(n) + "x" + std::to_string(m) + " caps";
        for (auto c : sh.caps)
            tag += " " + std::to_string(c);
        std::vector<StateIndex> reverse(m);
        for (std::size_t s = 0; s < m; ++s)
            reverse[s] = m - 1 - s;
        // picks depend on the last officer's message, so some of these are manipulable
        StateSelector swayed = [](const SelectionContext& c) -> StateIndex {
            StateMask g = c.maximal;
            bool flip = c.officer + 1 < c.profile.size() && c.profile.back().prefers(0, 1);
            StateIndex pick = lowest(g);
            if (flip)
                for (StateIndex s = 0; s < c.problem.state_count(); ++s)
                    if (contains(g, s))
                        pick = s;
            return pick;
        };
        ZoneSelector swayed_zone = [](const ZoneContext& c) -> std::size_t {
            std::vector<std::size_t> open;
            for (std::size_t z = 0; z < c.partition.size(); ++z)
                if (c.partition.zone(z) & c.available)
                    open.push_back(z);
            bool flip = c.officer + 1 < c.profile.size() && c.profile.back().prefers(0, 1);
            return flip ? open.back() : open.front();
        };
        for (const auto& p : partitions(m, m)) {
            std::vector<Partition> parts(n, p);
            std::vector<MessageSpaceSpec> zonal(n, p.size() == 1 ? MessageSpaceSpec::complete(m)
                                                                 : MessageSpaceSpec::zonal(p));
            std::string where = tag + (p.size() == 1 ? " complete" : " zonal/" + std::to_string(p.size()));
            out.push_back({where + " m-queue", pr, zonal,
                           [pr](const Profile& x) { return m_queue_run(pr, x, first_maximal_state()).allocation; }});
            out.push_back({where + " m-queue reverse", pr, zonal,
                           [pr, reverse](const Profile& x) { return m_queue_run(pr, x, fixed_state_order(reverse)).allocation; }});
            out.push_back({where + " m-queue swayed", pr, zonal,
                           [pr, swayed](const Profile& x) { return m_queue_run(pr, x, swayed).allocation; }});
            out.push_back({where + " pp", pr, zonal, [pr, parts](const Profile& x) {
                               return partitioned_priority_run(pr, parts, x, first_available_zone()).allocation;
                           }});
            out.push_back({where + " pp swayed", pr, zonal, [pr, parts, swayed_zone](const Profile& x) {
                               return partitioned_priority_run(pr, parts, x, swayed_zone).allocation;
                           }});
            if (p.size() < 2)
                continue;
            std::vector<MessageSpaceSpec> ranked(n, MessageSpaceSpec::ranked_zonal(p));
            std::string rwhere = tag + " ranked/" + std::to_string(p.size());
            out.push_back({rwhere + " m-queue", pr, ranked,
                           [pr](const Profile& x) { return m_queue_run(pr, x, first_maximal_state()).allocation; }});
            out.push_back({rwhere + " m-queue swayed", pr, ranked,
                           [pr, swayed](const Profile& x) { return m_queue_run(pr, x, swayed).allocation; }});
            out.push_back({rwhere + " rpp", pr, ranked, [pr, parts](const Profile& x) {
                               return ranked_partitioned_priority_run(pr, parts, x).allocation;
                           }});
        }
    }
    for (const char* name : {"example_pp", "example_rpp", "example_zone_rank"}) {
        Instance inst = fixture(name);
        out.push_back({name, inst.problem, inst.spaces,
                       outcome_function(inst, choose_mechanism(inst, std::nullopt))});
    }
    return out;
}

Result sp_by_deviation_conditions()
{
    std::size_t sp_pass = 0, sp_fail = 0;
    for (const auto& b : engine_battery()) {
        MechanismUnderTest mech(b.name, b.problem, b.spaces, b.outcome);
        for (std::uint64_t l = 0; l < mech.profile_count(); ++l)
            if (!brute_fair(b.problem, mech.allocation(l), mech.profile(mech.digits(l))))
                return fail(b.name + " is not visibly fair");
        bool sp = !check_strategy_proof(mech);
        bool ex = !check_expressiveness(mech);
        bool wa = !check_weak_availability(mech);
        if (sp != (ex && wa))
            return fail(b.name + ": sp " + (sp ? "pass" : "fail") + ", expressiveness " + (ex ? "pass" : "fail") +
                        ", weak availability " + (wa ? "pass" : "fail"));
        ++(sp ? sp_pass : sp_fail);
    }
    return {true, std::to_string(sp_pass + sp_fail) + " mechanisms agree (" + std::to_string(sp_pass) +
                      " strategy-proof, " + std::to_string(sp_fail) + " not)"};
}

Result sp_by_coherence()
{
    std::mt19937_64 rng(5);
    Problem shapes[] = {Problem::uniform({1, 1}, 2), Problem::uniform({2, 1}, 2), Problem::uniform({2, 2}, 2)};
    const Message options[] = {Message(2), Message::from_order(2, std::vector<StateIndex>{0, 1}),
                               Message::from_order(2, std::vector<StateIndex>{1, 0})};
    std::size_t sp_pass = 0, sp_fail = 0;
    auto compare = [&](const MechanismUnderTest& mech) -> bool {
        bool sp = !check_strategy_proof(mech);
        bool coh = !check_coherence(mech);
        ++(sp ? sp_pass : sp_fail);
        return sp == coh;
    };
    for (int t = 0; t < 1000; ++t) {
        const Problem& pr = shapes[rng() % 3];
        std::vector<MessageSpaceSpec> spaces;
        for (int k = 0; k < 2; ++k) {
            std::vector<Message> list;
            while (list.empty())
                for (const auto& m : options)
                    if (rng() % 2)
                        list.push_back(m);
            spaces.push_back(MessageSpaceSpec::explicit_list(2, list));
        }
        auto feasible = all_feasible(pr);
        auto table = std::make_shared<std::map<Profile, Allocation>>();
        for_each_profile({spaces[0].explicit_messages(), spaces[1].explicit_messages()},
                         [&](const Profile& p) { (*table)[p] = feasible[rng() % feasible.size()]; });
        MechanismUnderTest mech("random table", pr, spaces, [table](const Profile& p) { return table->at(p); });
        if (!compare(mech))
            return fail("random table " + std::to_string(t) + " disagrees");
    }
    for (const char* name : {"example_4_1", "example_4_2"}) {
        Instance inst = fixture(name);
        MechanismUnderTest mech(name, inst.problem, inst.spaces, outcome_function(inst, MechanismKind::Table));
        if (!compare(mech))
            return fail(std::string(name) + " disagrees");
    }
    return {true, "1002 tables agree (" + std::to_string(sp_pass) + " strategy-proof, " + std::to_string(sp_fail) +
                      " not)"};
}

Result modular_properties()
{
    std::mt19937_64 rng(6);
    std::uint64_t deviations = 0;
    for (auto [name, scanned] : {std::pair{"example_5_1", std::size_t{8}}, std::pair{"example_5_2", std::size_t{6}}}) {
        Instance inst = fixture(name);
        const Problem& pr = inst.problem;
        const std::size_t n = pr.officer_count(), m = pr.state_count();
        ZoneRankings exo = exogenous_rankings(inst);
        std::vector<std::vector<Message>> by_type;
        for (TypeIndex t = 0; t < pr.type_count(); ++t)
            by_type.push_back(enumerate_messages(MessageSpaceSpec::modular_induced(inst.bounds, t, m)));
        for (int round = 0; round < 200; ++round) {
            std::vector<PreferenceOrder> prefs;
            for (std::size_t k = 0; k < n; ++k)
                prefs.push_back(random_pref(m, rng));
            Profile prof = modular_truthful_profile(pr, inst.bounds, prefs);
            Allocation a = modular_priority_run(pr, inst.bounds, exo, prof).allocation;
            if (!brute_respects(pr, inst.bounds, a) || !respects_bounds(a, inst.bounds, pr).respected())
                return fail(std::string(name) + ": bounds violated");
            if (!brute_fair(pr, a, prof) || visibly_unfair_witness(pr, a, prof))
                return fail(std::string(name) + ": unfair outcome");
            for (std::size_t k = 0; k < scanned; ++k)
                for (const auto& alt : by_type[pr.type_of(k)]) {
                    if (alt == prof[k])
                        continue;
                    Profile dev = prof;
                    dev[k] = alt;
                    ++deviations;
                    StateIndex got = modular_priority_run(pr, inst.bounds, exo, dev).allocation[k];
                    if (prefs[k].prefers(got, a[k]))
                        return fail(std::string(name) + ": " + pr.officer(k).id.value + " gains by deviating");
                }
        }
    }
    return {true, "400 profiles fair and bound-respecting; " + std::to_string(deviations) +
                      " deviations, none profitable"};
}

Result impossibility_replay()
{
    Instance inst = fixture("two_state_impossibility");
    const Problem& pr = inst.problem;
    auto u = pr.states();
    auto r = impossibility_search(pr, inst.bounds);
    // the four configurations of the argument, with the reporting officer's message at the pivot
    const std::map<std::string, int> reporter{{"(Y,N,N)", 0}, {"(N,N,Y)", 2}, {"(N,Y,N)", 1}, {"(N,N,N)", -1}};
    std::size_t domination = 0, violation = 0;
    Message s2_first = order_msg(u, {"s2", "s1"});
    for (const auto& c : r.cases) {
        auto it = reporter.find(c.label);
        if (it != reporter.end()) {
            if (c.outcome != CaseOutcome::Domination || !c.pivot)
                return fail(c.label + " has no domination witness");
            for (std::size_t k = 0; k < 3; ++k) {
                bool expected = static_cast<int>(k) == it->second;
                if ((*c.pivot)[k] != (expected ? s2_first : Message(2)))
                    return fail(c.label + ": pivot differs from the argument");
            }
            if (c.witnesses.empty())
                return fail(c.label + ": empty certificate");
            for (const auto& w : c.witnesses) {
                for (std::size_t k = 0; k < 3; ++k)
                    if (!is_truthful((*c.pivot)[k], w.truth[k]))
                        return fail(c.label + ": witness truth inconsistent with the pivot");
                if (!brute_respects(pr, inst.bounds, w.dominated_by) ||
                    !brute_dominator(w.candidate, {w.dominated_by}, by_prefs(w.truth)) ||
                    !brute_fair(pr, w.candidate, *c.pivot) || !brute_respects(pr, inst.bounds, w.candidate))
                    return fail(c.label + ": witness does not check out");
            }
            // the certificate must cover every admissible outcome at the pivot
            std::size_t admissible = 0;
            for (const auto& a : respecting(pr, inst.bounds))
                admissible += brute_fair(pr, a, *c.pivot);
            if (admissible != c.witnesses.size())
                return fail(c.label + ": certificate misses an outcome");
            ++domination;
        } else {
            if (c.outcome != CaseOutcome::BoundViolation)
                return fail(c.label + " should break the bound");
            for (const auto& a : all_feasible(pr))
                if (brute_fair(pr, a, *c.pivot) && brute_respects(pr, inst.bounds, a))
                    return fail(c.label + ": a fair outcome respects the bound");
            ++violation;
        }
    }
    if (domination != 4 || impossibility_verdict(r) != Verdict::Pass)
        return fail("expected four domination cases");
    return {true, "4 domination cases as argued; " + std::to_string(violation) +
                      " configurations eliciting two or three officers break the bound"};
}

Result dynamic_properties()
{
    std::mt19937_64 rng(8);
    struct Case
    {
        Problem problem;
        UpperBoundSystem h;
    };
    std::vector<Case> cases;
    Instance ex = fixture("example_6_1");
    cases.push_back({ex.problem, ex.bounds});
    while (cases.size() < 101) {
        std::size_t n = 1 + rng() % 4, m = 2 + rng() % 3;
        std::vector<std::size_t> caps(m);
        std::size_t total = 0;
        for (auto& c : caps)
            total += c = 1 + rng() % 2;
        if (total < n)
            caps[0] += n - total;
        std::vector<std::size_t> types(n);
        for (auto& t : types)
            t = rng() % 2;
        Problem pr = typed_problem(caps, types, 2);
        std::vector<UpperBound> bounds;
        for (std::size_t b = rng() % 3; b > 0; --b) {
            StateMask states = 1 + rng() % ((StateMask{1} << m) - 1);
            bounds.push_back({static_cast<TypeMask>(1 + rng() % 3), states, static_cast<std::size_t>(rng() % 3)});
        }
        UpperBoundSystem h(bounds);
        if (check_sequential_solvency(pr, h).verdict == Verdict::Pass)
            cases.push_back({pr, h});
    }
    std::uint64_t profiles = 0;
    for (const auto& c : cases) {
        const Problem& pr = c.problem;
        auto alternatives = respecting(pr, c.h);
        std::string bad;
        for_each_preference_profile(pr.officer_count(), pr.state_count(), [&](const std::vector<PreferenceOrder>& prefs) {
            if (!bad.empty())
                return;
            ++profiles;
            RunResult r;
            try {
                r = dynamic_modular_priority_run(pr, c.h, truthful_provider(prefs));
            } catch (const NoAdmissibleZone&) {
                bad = "an officer was stranded";
                return;
            }
            if (!brute_fair(pr, r.allocation, r.messages))
                bad = "unfair under the elicited messages";
            else if (!brute_respects(pr, c.h, r.allocation))
                bad = "bound violated";
            else if (brute_dominator(r.allocation, alternatives, by_prefs(prefs)))
                bad = "constrained Pareto dominated";
            else if (check_dynamic_stepwise_dominance(pr, c.h, prefs))
                bad = "a stepwise deviation pays";
        });
        if (!bad.empty())
            return fail(bad + " on a " + std::to_string(pr.officer_count()) + "x" + std::to_string(pr.state_count()) +
                        " instance");
    }
    return {true, "101 instances, " + std::to_string(profiles) + " preference profiles"};
}

Result solvency()
{
    auto r51 = check_sequential_solvency(fixture("example_5_1").problem, fixture("example_5_1").bounds);
    if (r51.verdict != Verdict::Pass)
        return fail("example 5.1 is " + std::string(to_string(r51.verdict)));
    Instance ex52 = fixture("example_5_2");
    auto r52 = check_sequential_solvency(ex52.problem, ex52.bounds);
    if (r52.verdict != Verdict::Pass)
        return fail("example 5.2 is " + std::string(to_string(r52.verdict)));
    CheckResult bad = check_command(fixture("solvency_violation"), {"solvency"});
    if (bad.verdict != Verdict::Fail || !bad.report["witness"]["verified"].get<bool>() ||
        !bad.report["witness"]["replayed"].get<bool>())
        return fail("forced violation not caught with a replayable counterexample");
    return {true, "5.1 pass (" + std::to_string(r51.nodes) + " nodes), 5.2 pass (" + std::to_string(r52.nodes) +
                      " nodes), forced violation replayed"};
}

Result lattice()
{
    std::mt19937_64 rng(10);
    std::uint64_t checked = 0;
    for (int round = 0; round < 300; ++round) {
        std::size_t n = 2 + rng() % 2, m = 2 + rng() % 2;
        std::vector<std::size_t> caps(m);
        std::size_t total = 0;
        for (auto& c : caps)
            total += c = 1 + rng() % 2;
        if (total < n)
            caps[0] += n - total;
        Problem pr = Problem::uniform(caps, n);
        std::vector<PreferenceOrder> prefs;
        Profile fine, coarse;
        for (std::size_t k = 0; k < n; ++k) {
            prefs.push_back(random_pref(m, rng));
            fine.push_back(complete_message(prefs.back()));
            Message c(m);
            for (auto [a, b] : fine.back().pairs())
                if (rng() % 2)
                    c.add_unchecked(a, b);
            coarse.push_back(c);
        }
        auto feasible = all_feasible(pr);
        for (const auto& a : feasible) {
            ++checked;
            bool fair_fine = brute_fair(pr, a, fine), fair_coarse = brute_fair(pr, a, coarse);
            bool ve_fine = !brute_dominator(a, feasible, by_messages(fine));
            bool ve_coarse = !brute_dominator(a, feasible, by_messages(coarse));
            bool pareto = !brute_dominator(a, feasible, by_prefs(prefs));
            if (fair_fine != !visibly_unfair_witness(pr, a, fine) || ve_fine != visibly_efficient(pr, a, fine).efficient ||
                ve_coarse != visibly_efficient(pr, a, coarse).efficient ||
                pareto != pareto_efficient(pr, a, prefs).efficient)
                return fail("library and brute force disagree");
            if ((fair_coarse && !ve_coarse) || (fair_fine && !ve_fine))
                return fail("a visibly fair allocation is not visibly efficient");
            if (pareto && !ve_fine)
                return fail("a Pareto efficient allocation is not visibly efficient under truthful messages");
            if ((fair_fine && !fair_coarse) || (ve_fine && !ve_coarse))
                return fail("refinement lost fairness or efficiency");
        }
    }

    // the counterexamples, exactly as stated
    Problem two = Problem::uniform({1, 1}, 2);
    auto u2 = two.states();
    Profile same{order_msg(u2, {"s1", "s2"}), order_msg(u2, {"s1", "s2"})};
    Allocation swapped = alloc(u2, {"s2", "s1"});
    if (!visibly_efficient(two, swapped, same).efficient || !visibly_unfair_witness(two, swapped, same))
        return fail("(s2,s1) should be visibly efficient and not visibly fair");

    Problem three = Problem::uniform({1, 1, 1}, 2);
    auto u3 = three.states();
    std::vector<PreferenceOrder> p{pref(u3, {"s3", "s1", "s2"}), pref(u3, {"s1", "s3", "s2"})};
    Partition zones(3, {states(u3, {"s1", "s2"}), states(u3, {"s3"})});
    Profile m, m_hat;
    for (const auto& x : p) {
        m.push_back(x.prefers(0, 1) ? order_msg(u3, {"s1", "s2"}) : order_msg(u3, {"s2", "s1"}));
        m_hat.push_back(complete_message(x));
    }
    if (!MessageSpaceSpec::zonal(zones).contains(m[0]) || !contains_more_information(m_hat[0], m[0]) ||
        !contains_more_information(m_hat[1], m[1]))
        return fail("counterexample messages malformed");
    Allocation a = alloc(u3, {"s1", "s3"});
    if (visibly_unfair_witness(three, a, m) || !visibly_efficient(three, a, m).efficient)
        return fail("(s1,s3) should be visibly fair and visibly efficient under zonal messages");
    auto pe = pareto_efficient(three, a, p);
    if (pe.efficient || pe.dominated_by != alloc(u3, {"s3", "s1"}))
        return fail("(s1,s3) should be Pareto dominated by (s3,s1)");
    if (!visibly_unfair_witness(three, a, m_hat) || visibly_efficient(three, a, m_hat).efficient)
        return fail("(s1,s3) should be neither visibly fair nor visibly efficient under complete messages");
    return {true, std::to_string(checked) + " allocations satisfy the implications; 3 counterexamples reproduced"};
}

} // namespace

int main()
{
    struct Criterion
    {
        const char* name;
        double limit_s;
        Result (*run)();
    };
    const Criterion criteria[] = {
        {"fixture exactness", 1, fixture_exactness},
        {"example battery", 10, example_battery},
        {"m-queue characterisation audit", 120, m_queue_audit},
        {"complete spaces give serial dictatorship", 10, complete_spaces_are_sd},
        {"strategy-proofness = expressiveness + weak availability", 300, sp_by_deviation_conditions},
        {"strategy-proofness = coherence", 60, sp_by_coherence},
        {"modular priority mechanism properties", 300, modular_properties},
        {"static impossibility replay", 120, impossibility_replay},
        {"dynamic modular mechanism properties", 300, dynamic_properties},
        {"sequential solvency", 120, solvency},
        {"efficiency lattice", 60, lattice},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r = fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = r.ok && secs <= c.limit_s;
        if (r.ok && !ok)
            r.detail += "; over the time limit";
        failures += !ok;
        std::printf("%s  %-58s %8.2fs / %4.0fs  %s\n", ok ? "PASS" : "FAIL", c.name, secs, c.limit_s,
                    r.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
