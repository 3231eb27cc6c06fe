#include "vfair/mechanisms.hpp"

#include <algorithm>

namespace vfair {

namespace detail {
void check_profile(const Problem& problem, const Profile& profile);
StateMask available_states(const std::vector<std::size_t>& remaining);
} // namespace detail

namespace {

BoundSet binding_now(const UpperBoundSystem& h, const Problem& problem, const Allocation& a)
{
    BoundSet out;
    for (std::size_t b = 0; b < h.size(); ++b)
        if (bound_count(h.bound(b), problem, a) == h.bound(b).ceiling)
            out.push_back(b);
    return out;
}

void check_types(const Problem& problem, const UpperBoundSystem& h)
{
    for (const auto& b : h.bounds()) {
        if (problem.type_count() < 64 && (b.types >> problem.type_count()) != 0)
            throw PreconditionError("bound names a type the problem does not have");
        if ((b.states & ~full_mask(problem.state_count())) != 0)
            throw PreconditionError("bound names a state the problem does not have");
    }
}

} // namespace

std::vector<Partition> induced_partitions(const Problem& problem, const UpperBoundSystem& h)
{
    check_types(problem, h);
    std::vector<Partition> out;
    for (TypeIndex t = 0; t < problem.type_count(); ++t)
        out.push_back(induced_partition(h, t, problem.state_count()));
    return out;
}

ZoneRankings default_zone_rankings(const Problem& problem, const UpperBoundSystem& h)
{
    auto parts = induced_partitions(problem, h);
    ZoneRankings out;
    for (std::size_t k = 0; k < problem.officer_count(); ++k)
        out.push_back(ZoneRanking::identity(parts[problem.type_of(k)].size()));
    return out;
}

Profile modular_truthful_profile(const Problem& problem, const UpperBoundSystem& h,
                                 const std::vector<PreferenceOrder>& prefs)
{
    if (prefs.size() != problem.officer_count())
        throw PreconditionError("one preference per officer is required");
    auto parts = induced_partitions(problem, h);
    Profile out;
    for (std::size_t k = 0; k < prefs.size(); ++k)
        out.push_back(truthful_message(MessageSpaceSpec::zonal(parts[problem.type_of(k)]), prefs[k]));
    return out;
}

RunResult modular_priority_run(const Problem& problem, const UpperBoundSystem& h, const ZoneRankings& exo,
                               const Profile& profile)
{
    detail::check_profile(problem, profile);
    auto parts = induced_partitions(problem, h);
    if (exo.size() != problem.officer_count())
        throw PreconditionError("one exogenous zone ranking per officer is required");
    for (std::size_t k = 0; k < profile.size(); ++k) {
        const Partition& p = parts[problem.type_of(k)];
        if (exo[k].size() != p.size())
            throw PreconditionError("exogenous ranking of officer " + problem.officer(k).id.value +
                                    " does not cover the zones of its type");
        if (!MessageSpaceSpec::zonal(p).contains(profile[k]))
            throw PreconditionError("message of officer " + problem.officer(k).id.value +
                                    " is not in the modular-induced space of its type");
    }

    RunResult out;
    out.messages = profile;
    out.allocation.assign(problem.officer_count(), kUnassigned);
    std::vector<std::size_t> remaining = problem.capacities();
    std::vector<std::vector<bool>> flags;
    for (const auto& p : parts)
        flags.emplace_back(p.size(), false);

    auto update_flags = [&] {
        for (std::size_t b = 0; b < h.size(); ++b) {
            const UpperBound& hb = h.bound(b);
            if (bound_count(hb, problem, out.allocation) != hb.ceiling)
                continue;
            for (TypeIndex t = 0; t < problem.type_count(); ++t) {
                if (!contains(hb.types, t))
                    continue;
                for (std::size_t z = 0; z < parts[t].size(); ++z)
                    if ((parts[t].zone(z) & hb.states) != 0)
                        flags[t][z] = true;
            }
        }
    };
    // A zero ceiling binds before anyone is placed.
    update_flags();

    for (std::size_t k = 0; k < problem.officer_count(); ++k) {
        const TypeIndex t = problem.type_of(k);
        const Partition& p = parts[t];
        TraceStep step;
        step.officer = k;
        step.available = detail::available_states(remaining);
        step.maximal = maximal_elements(step.available, profile[k]);
        std::optional<std::size_t> chosen;
        for (std::size_t z : exo[k].order()) {
            if (!flags[t][z] && (p.zone(z) & step.available) != 0) {
                chosen = z;
                break;
            }
        }
        if (!chosen)
            throw NoAdmissibleZone("officer " + problem.officer(k).id.value +
                                   " finds every zone flagged or full; the bound system is not sequentially solvent",
                                   k);
        step.zone = *chosen;
        step.zone_states = p.zone(*chosen);
        StateMask g = maximal_elements(step.zone_states & step.available, profile[k]);
        StateIndex s = lowest(g);
        step.assigned = s;
        --remaining[s];
        out.allocation[k] = s;
        update_flags();
        step.flags = flags;
        step.binding = binding_now(h, problem, out.allocation);
        out.trace.steps.push_back(std::move(step));
    }
    return out;
}

DynamicModularSession::DynamicModularSession(Problem problem, UpperBoundSystem h)
    : problem_(std::move(problem)), h_(std::move(h))
{
    check_types(problem_, h_);
    allocation_.assign(problem_.officer_count(), kUnassigned);
    remaining_ = problem_.capacities();
    binding_.assign(problem_.type_count(), {});
    update_binding();
}

void DynamicModularSession::update_binding()
{
    for (std::size_t b = 0; b < h_.size(); ++b) {
        const UpperBound& hb = h_.bound(b);
        if (bound_count(hb, problem_, allocation_) != hb.ceiling)
            continue;
        for (TypeIndex t = 0; t < problem_.type_count(); ++t) {
            if (!contains(hb.types, t))
                continue;
            auto& set = binding_[t];
            auto it = std::lower_bound(set.begin(), set.end(), b);
            if (it == set.end() || *it != b)
                set.insert(it, b);
        }
    }
}

Menu DynamicModularSession::menu() const
{
    if (complete())
        throw PreconditionError("session is complete");
    Menu m;
    m.round = round_;
    m.officer = round_;
    m.remaining = remaining_;
    m.binding = binding_[problem_.type_of(round_)];
    StateMask blocked = 0;
    for (std::size_t b : m.binding)
        blocked |= h_.bound(b).states;
    m.z1 = detail::available_states(remaining_) & ~blocked;
    m.z2 = full_mask(problem_.state_count()) & ~m.z1;
    return m;
}

StateIndex DynamicModularSession::submit(const std::vector<StateIndex>& ranking)
{
    const Menu current = menu();
    if (current.z1 == 0)
        throw NoAdmissibleZone("officer " + problem_.officer(round_).id.value +
                                   " faces an empty menu; the bound system is not sequentially solvent",
                               round_);
    StateMask listed = 0;
    for (StateIndex s : ranking) {
        if (s >= problem_.state_count())
            throw InvalidRanking("ranking names an unknown state");
        if (contains(listed, s))
            throw InvalidRanking("ranking lists " + problem_.states().id(s).value + " twice");
        if (!contains(current.z1, s))
            throw InvalidRanking("ranking lists " + problem_.states().id(s).value + ", which is not on the menu");
        listed |= bit(s);
    }
    if (listed != current.z1)
        throw InvalidRanking("ranking must order every menu state " + problem_.states().format(current.z1));

    Message m = Message::from_order(problem_.state_count(), ranking);
    const StateIndex s = ranking.front();
    TraceStep step;
    step.officer = round_;
    step.available = detail::available_states(remaining_);
    step.maximal = maximal_elements(step.available, m);
    step.zone = 0;
    step.zone_states = current.z1;
    step.menu = current.z1;
    step.rest = current.z2;
    step.assigned = s;

    --remaining_[s];
    allocation_[round_] = s;
    update_binding();
    step.binding = binding_now(h_, problem_, allocation_);
    trace_.steps.push_back(std::move(step));
    messages_.push_back(std::move(m));
    ++round_;
    return s;
}

RankingProvider truthful_provider(std::vector<PreferenceOrder> prefs)
{
    return [prefs = std::move(prefs)](const Menu& menu) { return prefs.at(menu.officer).restricted(menu.z1); };
}

RunResult dynamic_modular_priority_run(const Problem& problem, const UpperBoundSystem& h,
                                       const RankingProvider& provider)
{
    DynamicModularSession session(problem, h);
    while (!session.complete()) {
        Menu menu = session.menu();
        if (menu.z1 == 0)
            throw NoAdmissibleZone("officer " + problem.officer(menu.officer).id.value +
                                       " faces an empty menu; the bound system is not sequentially solvent",
                                   menu.officer);
        session.submit(provider(menu));
    }
    return {session.allocation(), session.trace(), session.messages()};
}

SolvencyReplay build_solvency_replay(const Problem& problem, const UpperBoundSystem& h,
                                     const SolvencyCounterexample& cx)
{
    const std::size_t m = problem.state_count();
    if (cx.occupancy.size() != problem.type_count())
        throw PreconditionError("counterexample occupancy does not match the problem's types");

    std::vector<std::vector<std::size_t>> by_type(problem.type_count());
    for (std::size_t k = 0; k < problem.officer_count(); ++k)
        by_type[problem.type_of(k)].push_back(k);
    std::vector<std::size_t> next(problem.type_count(), 0);

    auto parts = induced_partitions(problem, h);
    std::vector<Officer> officers;
    std::vector<StateIndex> target;
    for (StateIndex s = 0; s < m; ++s) {
        for (TypeIndex t = 0; t < problem.type_count(); ++t) {
            for (std::size_t c = 0; c < cx.occupancy[t].at(s); ++c) {
                if (next[t] >= by_type[t].size())
                    throw PreconditionError("counterexample places more officers of a type than exist");
                officers.push_back(problem.officer(by_type[t][next[t]++]));
                target.push_back(s);
            }
        }
    }
    const TypeIndex lone = cx.officer_type;
    if (next[lone] >= by_type[lone].size())
        throw PreconditionError("counterexample must leave an officer of the stranded type unplaced");
    officers.push_back(problem.officer(by_type[lone][next[lone]++]));
    // officers the placement leaves out come last; the run stops before them
    for (TypeIndex t = 0; t < problem.type_count(); ++t)
        while (next[t] < by_type[t].size())
            officers.push_back(problem.officer(by_type[t][next[t]++]));

    std::vector<StateSlot> slots;
    for (StateIndex s = 0; s < m; ++s)
        slots.push_back({problem.states().id(s), problem.capacity(s)});
    std::vector<OfficerType> types;
    for (TypeIndex t = 0; t < problem.type_count(); ++t)
        types.push_back(problem.type(t));

    SolvencyReplay out{Problem(std::move(slots), std::move(types), officers), {}, {}};
    for (std::size_t k = 0; k < officers.size(); ++k) {
        const Partition& p = parts[officers[k].type];
        std::vector<StateIndex> pref;
        std::vector<std::size_t> zones;
        if (k < target.size()) {
            pref.push_back(target[k]);
            zones.push_back(p.zone_of(target[k]));
        }
        for (StateIndex s = 0; s < m; ++s)
            if (pref.empty() || s != pref.front())
                pref.push_back(s);
        for (std::size_t z = 0; z < p.size(); ++z)
            if (zones.empty() || z != zones.front())
                zones.push_back(z);
        out.exo.emplace_back(p.size(), zones);
        out.profile.push_back(truthful_message(MessageSpaceSpec::zonal(p), PreferenceOrder(pref)));
    }
    return out;
}

} // namespace vfair
