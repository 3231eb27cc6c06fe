#include "vfair/axioms.hpp"

namespace vfair {

namespace {

void check_allocation(const Problem& problem, const Allocation& a)
{
    if (!problem.is_feasible(a))
        throw PreconditionError("allocation " + problem.format(a) + " is not feasible");
}

using Better = std::function<bool(std::size_t officer, StateIndex candidate, StateIndex current)>;
using Accept = std::function<bool(const Allocation&)>;

// Depth-first over "keep a_i or move somewhere officer i counts as better".
class DominationSearch
{
public:
    DominationSearch(const Problem& problem, const Allocation& a, Better better, Accept accept, std::uint64_t budget)
        : problem_(problem), a_(a), better_(std::move(better)), accept_(std::move(accept)), budget_(budget),
          remaining_(problem.capacities()), current_(a.size(), kUnassigned)
    {
    }

    std::optional<Allocation> run()
    {
        if (dfs(0, false))
            return current_;
        return std::nullopt;
    }

private:
    bool dfs(std::size_t k, bool moved)
    {
        if (++nodes_ > budget_)
            throw CapExceeded("domination search exceeded its node budget", nodes_, budget_);
        if (k == a_.size())
            return moved && accept_(current_);
        if (try_state(k, a_[k], moved))
            return true;
        for (StateIndex s = 0; s < problem_.state_count(); ++s)
            if (s != a_[k] && better_(k, s, a_[k]) && try_state(k, s, true))
                return true;
        return false;
    }

    bool try_state(std::size_t k, StateIndex s, bool moved)
    {
        if (remaining_[s] == 0)
            return false;
        --remaining_[s];
        current_[k] = s;
        bool found = dfs(k + 1, moved);
        if (!found) {
            ++remaining_[s];
            current_[k] = kUnassigned;
        }
        return found;
    }

    const Problem& problem_;
    const Allocation& a_;
    Better better_;
    Accept accept_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<std::size_t> remaining_;
    Allocation current_;
};

EfficiencyResult to_result(std::optional<Allocation> alt)
{
    if (alt)
        return {false, std::move(alt)};
    return {};
}

void check_prefs(const Problem& problem, const std::vector<PreferenceOrder>& prefs)
{
    if (prefs.size() != problem.officer_count())
        throw PreconditionError("one preference per officer is required");
    for (const auto& p : prefs)
        if (p.size() != problem.state_count())
            throw PreconditionError("preference over a different set of states");
}

} // namespace

std::optional<FairnessWitness> visibly_unfair_witness(const Problem& problem, const Allocation& a,
                                                      const Profile& profile)
{
    check_allocation(problem, a);
    if (profile.size() != a.size())
        throw PreconditionError("profile and allocation sizes differ");
    auto occ = occupancy(problem, a);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[j] != a[i] && profile[i].prefers(a[j], a[i]))
                return EnvyWitness{i, j};
        for (StateIndex s = 0; s < problem.state_count(); ++s)
            if (s != a[i] && occ[s] < problem.capacity(s) && profile[i].prefers(s, a[i]))
                return WasteWitness{i, s};
    }
    return std::nullopt;
}

bool fairness_witness_holds(const Problem& problem, const Allocation& a, const Profile& profile,
                            const FairnessWitness& w)
{
    if (const auto* e = std::get_if<EnvyWitness>(&w))
        return e->officer < e->other && e->other < a.size() && a[e->officer] != a[e->other] &&
               profile.at(e->officer).prefers(a[e->other], a[e->officer]);
    const auto& x = std::get<WasteWitness>(w);
    auto occ = occupancy(problem, a);
    return x.officer < a.size() && x.state != a[x.officer] && occ.at(x.state) < problem.capacity(x.state) &&
           profile.at(x.officer).prefers(x.state, a[x.officer]);
}

std::string describe(const Problem& problem, const FairnessWitness& w)
{
    if (const auto* e = std::get_if<EnvyWitness>(&w))
        return "envy: " + problem.officer(e->officer).id.value + " reports the state of " +
               problem.officer(e->other).id.value + " as better";
    const auto& x = std::get<WasteWitness>(w);
    return "waste: " + problem.officer(x.officer).id.value + " reports under-capacity " +
           problem.states().id(x.state).value + " as better";
}

EfficiencyResult visibly_efficient(const Problem& problem, const Allocation& a, const Profile& profile,
                                   std::uint64_t budget)
{
    check_allocation(problem, a);
    if (profile.size() != a.size())
        throw PreconditionError("profile and allocation sizes differ");
    DominationSearch search(
        problem, a, [&](std::size_t i, StateIndex s, StateIndex cur) { return profile[i].prefers(s, cur); },
        [](const Allocation&) { return true; }, budget);
    return to_result(search.run());
}

EfficiencyResult pareto_efficient(const Problem& problem, const Allocation& a, const std::vector<PreferenceOrder>& prefs,
                                  std::uint64_t budget)
{
    check_allocation(problem, a);
    check_prefs(problem, prefs);
    DominationSearch search(
        problem, a, [&](std::size_t i, StateIndex s, StateIndex cur) { return prefs[i].prefers(s, cur); },
        [](const Allocation&) { return true; }, budget);
    return to_result(search.run());
}

EfficiencyResult constrained_pareto_efficient(const Problem& problem, const Allocation& a,
                                              const std::vector<PreferenceOrder>& prefs, const UpperBoundSystem& h,
                                              std::uint64_t budget)
{
    check_prefs(problem, prefs);
    if (!respects_bounds(a, h, problem).respected())
        throw PreconditionError("allocation " + problem.format(a) + " violates the upper bounds");
    DominationSearch search(
        problem, a, [&](std::size_t i, StateIndex s, StateIndex cur) { return prefs[i].prefers(s, cur); },
        [&](const Allocation& alt) { return respects_bounds(alt, h, problem).respected(); }, budget);
    return to_result(search.run());
}

std::optional<RunTrace> reconstruct_m_queue(const Problem& problem, const Allocation& a, const Profile& profile)
{
    check_allocation(problem, a);
    if (profile.size() != a.size())
        throw PreconditionError("profile and allocation sizes differ");
    RunTrace trace;
    StateMask available = full_mask(problem.state_count());
    std::vector<std::size_t> used(problem.state_count(), 0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        TraceStep step;
        step.officer = k;
        step.available = available;
        step.maximal = maximal_elements(available, profile[k]);
        step.assigned = a[k];
        if (!contains(step.maximal, a[k]))
            return std::nullopt;
        if (++used[a[k]] == problem.capacity(a[k]))
            available &= ~bit(a[k]);
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

} // namespace vfair
