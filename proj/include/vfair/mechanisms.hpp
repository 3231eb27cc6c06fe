#pragma once

// Sequential assignment engines. Every engine walks officers in priority
// order, keeps the set of states with spare capacity, and records each step.

#include <functional>
#include <optional>
#include <vector>

#include "vfair/constraints.hpp"
#include "vfair/message_spaces.hpp"
#include "vfair/problem.hpp"
#include "vfair/relations.hpp"

namespace vfair {

/// One message per officer, officers in priority order.
using Profile = std::vector<Message>;

struct TraceStep
{
    std::size_t officer = 0;
    StateMask available = 0;  // states with spare capacity before the step
    StateMask maximal = 0;    // G(available, m_k)
    std::optional<std::size_t> zone;
    StateMask zone_states = 0;
    StateIndex assigned = kUnassigned;
    // modular engine: flag per type and zone after the step
    std::vector<std::vector<bool>> flags;
    // bounds binding after the step
    BoundSet binding;
    // dynamic engine: presented menu and the remaining states
    StateMask menu = 0;
    StateMask rest = 0;
};

struct RunTrace
{
    std::vector<TraceStep> steps;
};

struct RunResult
{
    Allocation allocation;
    RunTrace trace;
    Profile messages;
};

struct SelectionContext
{
    const Problem& problem;
    std::size_t officer;
    StateMask available;
    StateMask maximal;
    const Profile& profile;
    const Allocation& partial;
};

/// Picks one state for the active officer; m_queue_run rejects picks outside `maximal`.
using StateSelector = std::function<StateIndex(const SelectionContext&)>;

/// Earliest maximal state in `order` (every state listed once).
StateSelector fixed_state_order(std::vector<StateIndex> order);
/// Lowest-index maximal state.
StateSelector first_maximal_state();

RunResult m_queue_run(const Problem& problem, const Profile& profile, const StateSelector& select);

/// Complete preferences required; each officer takes the best state with spare capacity.
Allocation serial_dictatorship(const Problem& problem, const std::vector<PreferenceOrder>& prefs);

struct ZoneContext
{
    const Problem& problem;
    std::size_t officer;
    StateMask available;
    const Partition& partition;
    const Profile& profile;
    const Allocation& partial;
};

using ZoneSelector = std::function<std::size_t(const ZoneContext&)>;

/// First zone in partition order holding an available state.
ZoneSelector first_available_zone();
/// First zone in `order` holding an available state.
ZoneSelector zone_order_selector(std::vector<std::size_t> order);
/// Highest zone in the active officer's reported zone ranking holding an available state.
ZoneSelector highest_ranked_available_zone();

/// `partitions[k]` is officer k's zonal partition; every message must be zonal over it.
RunResult partitioned_priority_run(const Problem& problem, const std::vector<Partition>& partitions,
                                   const Profile& profile, const ZoneSelector& select);

/// Messages must be ranked-zonal over `partitions[k]`. Both selector conditions
/// are checked at every step; a failure throws SelectorViolation.
RunResult ranked_partitioned_priority_run(const Problem& problem, const std::vector<Partition>& partitions,
                                          const Profile& profile,
                                          const ZoneSelector& select = highest_ranked_available_zone());

/// Exogenous zone ranking per officer, over the induced partition of its type.
using ZoneRankings = std::vector<ZoneRanking>;

/// Induced partition for every type of the problem.
std::vector<Partition> induced_partitions(const Problem& problem, const UpperBoundSystem& h);

/// Identity ranking for every officer.
ZoneRankings default_zone_rankings(const Problem& problem, const UpperBoundSystem& h);

/// Throws NoAdmissibleZone when an officer finds every zone flagged or full.
RunResult modular_priority_run(const Problem& problem, const UpperBoundSystem& h, const ZoneRankings& exo,
                               const Profile& profile);

/// Truthful modular-induced message of each officer.
Profile modular_truthful_profile(const Problem& problem, const UpperBoundSystem& h,
                                 const std::vector<PreferenceOrder>& prefs);

struct Menu
{
    std::size_t round = 0;  // index of the active officer
    std::size_t officer = 0;
    StateMask z1 = 0;
    StateMask z2 = 0;
    std::vector<std::size_t> remaining;  // per state
    BoundSet binding;                    // bounds binding for the officer's type
};

/// Step-by-step driver of the dynamic mechanism. Officers are processed in
/// priority order; each submission commits exactly one officer.
class DynamicModularSession
{
public:
    DynamicModularSession(Problem problem, UpperBoundSystem h);

    const Problem& problem() const { return problem_; }
    const UpperBoundSystem& bounds() const { return h_; }

    bool complete() const { return round_ == problem_.officer_count(); }
    std::size_t round() const { return round_; }
    /// Menu of the active officer. Throws PreconditionError when complete.
    Menu menu() const;
    /// Ranking must order exactly the menu states. Throws InvalidRanking
    /// (session unchanged) or NoAdmissibleZone when the menu is empty.
    StateIndex submit(const std::vector<StateIndex>& ranking);

    const Allocation& allocation() const { return allocation_; }
    const RunTrace& trace() const { return trace_; }
    /// Elicited messages: the submitted order on each officer's menu.
    const Profile& messages() const { return messages_; }
    const std::vector<std::size_t>& remaining() const { return remaining_; }
    /// Bounds currently binding for type t.
    const BoundSet& binding(TypeIndex t) const { return binding_.at(t); }

private:
    void update_binding();

    Problem problem_;
    UpperBoundSystem h_;
    std::size_t round_ = 0;
    Allocation allocation_;
    std::vector<std::size_t> remaining_;
    std::vector<BoundSet> binding_;
    RunTrace trace_;
    Profile messages_;
};

/// Returns a strict order on exactly the menu states, best first.
using RankingProvider = std::function<std::vector<StateIndex>(const Menu&)>;

RankingProvider truthful_provider(std::vector<PreferenceOrder> prefs);

RunResult dynamic_modular_priority_run(const Problem& problem, const UpperBoundSystem& h,
                                       const RankingProvider& provider);

/// Inputs under which the modular engine reproduces a solvency counterexample:
/// the placed officers arrive first, each steered to its seat, then an officer
/// of the stranded type, then everyone the placement left out.
struct SolvencyReplay
{
    Problem problem;
    ZoneRankings exo;
    Profile profile;
};

SolvencyReplay build_solvency_replay(const Problem& problem, const UpperBoundSystem& h,
                                     const SolvencyCounterexample& cx);

} // namespace vfair
