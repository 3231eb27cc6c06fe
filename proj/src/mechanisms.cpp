#include "vfair/mechanisms.hpp"

#include <algorithm>

namespace vfair {

namespace detail {

void check_profile(const Problem& problem, const Profile& profile)
{
    if (profile.size() != problem.officer_count())
        throw PreconditionError("profile has " + std::to_string(profile.size()) + " messages for " +
                                std::to_string(problem.officer_count()) + " officers");
    for (const auto& m : profile)
        if (m.universe_size() != problem.state_count())
            throw PreconditionError("message over a different set of states");
}

StateMask available_states(const std::vector<std::size_t>& remaining)
{
    StateMask x = 0;
    for (StateIndex s = 0; s < remaining.size(); ++s)
        if (remaining[s] > 0)
            x |= bit(s);
    return x;
}

} // namespace detail

namespace {

using detail::available_states;
using detail::check_profile;

// Runs the common queue loop; `choose` fills zone fields of the step and returns the state.
template <class Choose>
RunResult queue_walk(const Problem& problem, const Profile& profile, Choose&& choose)
{
    check_profile(problem, profile);
    RunResult out;
    out.messages = profile;
    out.allocation.assign(problem.officer_count(), kUnassigned);
    std::vector<std::size_t> remaining = problem.capacities();
    for (std::size_t k = 0; k < problem.officer_count(); ++k) {
        TraceStep step;
        step.officer = k;
        step.available = available_states(remaining);
        step.maximal = maximal_elements(step.available, profile[k]);
        StateIndex s = choose(k, step, out.allocation);
        if (s >= problem.state_count() || !contains(step.maximal, s))
            throw SelectorViolation("officer " + problem.officer(k).id.value + " was given " +
                                    (s < problem.state_count() ? problem.states().id(s).value : std::string("?")) +
                                    ", which is not maximal among the available states");
        step.assigned = s;
        --remaining[s];
        out.allocation[k] = s;
        out.trace.steps.push_back(std::move(step));
    }
    return out;
}

StateIndex unique_max(StateMask x, const Message& m)
{
    StateMask g = maximal_elements(x, m);
    if (popcount(g) != 1)
        throw PreconditionError("message does not order the states of the selected zone");
    return lowest(g);
}

void check_partitions(const Problem& problem, const std::vector<Partition>& partitions)
{
    if (partitions.size() != problem.officer_count())
        throw PreconditionError("one partition per officer is required");
    for (const auto& p : partitions)
        if (p.universe_size() != problem.state_count())
            throw PreconditionError("partition over a different set of states");
}

std::size_t checked_zone(const ZoneContext& ctx, std::size_t z)
{
    if (z >= ctx.partition.size())
        throw SelectorViolation("zone selector returned zone " + std::to_string(z) + " of " +
                                std::to_string(ctx.partition.size()));
    if ((ctx.partition.zone(z) & ctx.available) == 0)
        throw SelectorViolation("zone selector chose a zone with no available state");
    return z;
}

} // namespace

StateSelector fixed_state_order(std::vector<StateIndex> order)
{
    return [order = std::move(order)](const SelectionContext& ctx) {
        if (order.size() != ctx.problem.state_count())
            throw PreconditionError("state order must list every state once");
        for (StateIndex s : order)
            if (contains(ctx.maximal, s))
                return s;
        throw PreconditionError("state order misses every maximal state");
    };
}

StateSelector first_maximal_state()
{
    return [](const SelectionContext& ctx) { return lowest(ctx.maximal); };
}

RunResult m_queue_run(const Problem& problem, const Profile& profile, const StateSelector& select)
{
    return queue_walk(problem, profile, [&](std::size_t k, TraceStep& step, const Allocation& partial) {
        SelectionContext ctx{problem, k, step.available, step.maximal, profile, partial};
        return select(ctx);
    });
}

Allocation serial_dictatorship(const Problem& problem, const std::vector<PreferenceOrder>& prefs)
{
    if (prefs.size() != problem.officer_count())
        throw PreconditionError("one preference per officer is required");
    std::vector<std::size_t> remaining = problem.capacities();
    Allocation a(problem.officer_count(), kUnassigned);
    for (std::size_t k = 0; k < prefs.size(); ++k) {
        if (prefs[k].size() != problem.state_count())
            throw PreconditionError("preference over a different set of states");
        StateIndex s = prefs[k].best_in(available_states(remaining));
        a[k] = s;
        --remaining[s];
    }
    return a;
}

ZoneSelector first_available_zone()
{
    return [](const ZoneContext& ctx) {
        for (std::size_t j = 0; j < ctx.partition.size(); ++j)
            if ((ctx.partition.zone(j) & ctx.available) != 0)
                return j;
        throw PreconditionError("no zone holds an available state");
    };
}

ZoneSelector zone_order_selector(std::vector<std::size_t> order)
{
    return [order = std::move(order)](const ZoneContext& ctx) {
        for (std::size_t j : order)
            if (j < ctx.partition.size() && (ctx.partition.zone(j) & ctx.available) != 0)
                return j;
        throw PreconditionError("no zone in the selector order holds an available state");
    };
}

ZoneSelector highest_ranked_available_zone()
{
    return [](const ZoneContext& ctx) {
        auto ranking = implied_zone_ranking(ctx.partition, ctx.profile.at(ctx.officer));
        if (!ranking)
            throw PreconditionError("message carries no zone ranking");
        for (std::size_t j : ranking->order())
            if ((ctx.partition.zone(j) & ctx.available) != 0)
                return j;
        throw PreconditionError("no zone holds an available state");
    };
}

RunResult partitioned_priority_run(const Problem& problem, const std::vector<Partition>& partitions,
                                   const Profile& profile, const ZoneSelector& select)
{
    check_partitions(problem, partitions);
    check_profile(problem, profile);
    for (std::size_t k = 0; k < profile.size(); ++k)
        if (!MessageSpaceSpec::zonal(partitions[k]).contains(profile[k]))
            throw PreconditionError("message of officer " + problem.officer(k).id.value + " is not zonal");
    return queue_walk(problem, profile, [&](std::size_t k, TraceStep& step, const Allocation& partial) {
        ZoneContext ctx{problem, k, step.available, partitions[k], profile, partial};
        std::size_t z = checked_zone(ctx, select(ctx));
        step.zone = z;
        step.zone_states = partitions[k].zone(z);
        return unique_max(step.zone_states & step.available, profile[k]);
    });
}

RunResult ranked_partitioned_priority_run(const Problem& problem, const std::vector<Partition>& partitions,
                                          const Profile& profile, const ZoneSelector& select)
{
    check_partitions(problem, partitions);
    check_profile(problem, profile);
    std::vector<ZoneRanking> rankings;
    std::vector<std::vector<std::vector<StateIndex>>> orders;
    for (std::size_t k = 0; k < profile.size(); ++k) {
        auto r = implied_zone_ranking(partitions[k], profile[k]);
        if (!r)
            throw PreconditionError("message of officer " + problem.officer(k).id.value +
                                    " is not ranked-zonal");
        rankings.push_back(*r);
        orders.push_back(*zone_orders(partitions[k], profile[k]));
    }
    return queue_walk(problem, profile, [&](std::size_t k, TraceStep& step, const Allocation& partial) {
        const Partition& p = partitions[k];
        ZoneContext ctx{problem, k, step.available, p, profile, partial};
        std::size_t z = select(ctx);
        if (z >= p.size() || (p.zone(z) & step.available) == 0)
            throw SelectorViolation("ranked zone selector breaks condition 1: the chosen zone has no available state");
        StateMask left = p.zone(z) & step.available;
        if (left == bit(orders[k][z].back())) {
            for (std::size_t w = 0; w < p.size(); ++w)
                if (rankings[k].above(w, z) && contains(step.available, orders[k][w].front()))
                    throw SelectorViolation(
                        "ranked zone selector breaks condition 2: only the bottom of the chosen zone is left "
                        "while a higher-ranked zone still offers its top state");
        }
        step.zone = z;
        step.zone_states = p.zone(z);
        return unique_max(left, profile[k]);
    });
}

} // namespace vfair
