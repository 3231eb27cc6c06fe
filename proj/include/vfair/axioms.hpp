#pragma once

// Exhaustive oracles for fairness, efficiency and incentive properties.
// Every check is a complete scan within its cap; nothing is sampled.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vfair/constraints.hpp"
#include "vfair/mechanisms.hpp"
#include "vfair/message_spaces.hpp"

namespace vfair {

struct EnvyWitness
{
    std::size_t officer = 0;  // higher priority
    std::size_t other = 0;    // holds a state `officer` reports as better
};

struct WasteWitness
{
    std::size_t officer = 0;
    StateIndex state = 0;  // under capacity and reported as better
};

using FairnessWitness = std::variant<EnvyWitness, WasteWitness>;

std::optional<FairnessWitness> visibly_unfair_witness(const Problem& problem, const Allocation& a,
                                                      const Profile& profile);

/// Re-evaluates the witness against the allocation and messages.
bool fairness_witness_holds(const Problem& problem, const Allocation& a, const Profile& profile,
                            const FairnessWitness& w);

std::string describe(const Problem& problem, const FairnessWitness& w);

inline constexpr std::uint64_t kDefaultDominationBudget = 10'000'000;

struct EfficiencyResult
{
    bool efficient = true;
    std::optional<Allocation> dominated_by;
};

/// No feasible a' != a where every mover reports a'_i above a_i.
EfficiencyResult visibly_efficient(const Problem& problem, const Allocation& a, const Profile& profile,
                                   std::uint64_t budget = kDefaultDominationBudget);

/// No feasible a' != a where every mover strictly prefers a'_i.
EfficiencyResult pareto_efficient(const Problem& problem, const Allocation& a, const std::vector<PreferenceOrder>& prefs,
                                  std::uint64_t budget = kDefaultDominationBudget);

/// As pareto_efficient, restricted to alternatives that respect H. Throws
/// PreconditionError when `a` itself violates H.
EfficiencyResult constrained_pareto_efficient(const Problem& problem, const Allocation& a,
                                              const std::vector<PreferenceOrder>& prefs, const UpperBoundSystem& h,
                                              std::uint64_t budget = kDefaultDominationBudget);

/// Builds S^1..S^n from the allocation itself and keeps the trace only if
/// every officer holds a maximal state of the set left to her.
std::optional<RunTrace> reconstruct_m_queue(const Problem& problem, const Allocation& a, const Profile& profile);

inline constexpr std::uint64_t kDefaultProfileCap = 1'000'000;

/// A mechanism given by per-officer message spaces and an outcome for every
/// profile. The outcome of each profile is computed once, up front.
class MechanismUnderTest
{
public:
    using Outcome = std::function<Allocation(const Profile&)>;

    MechanismUnderTest(std::string name, Problem problem, std::vector<MessageSpaceSpec> spaces, const Outcome& outcome,
                       const EnumerationCap& cap = {}, std::uint64_t profile_cap = kDefaultProfileCap);

    const std::string& name() const { return name_; }
    const Problem& problem() const { return problem_; }
    const MessageSpaceSpec& space(std::size_t officer) const { return spaces_.at(officer); }
    const std::vector<Message>& messages(std::size_t officer) const { return messages_.at(officer); }
    std::uint64_t profile_count() const { return profile_count_; }

    /// Message index per officer.
    std::size_t message_index(std::size_t officer, const Message& m) const;
    std::uint64_t linear(const std::vector<std::size_t>& digits) const;
    std::vector<std::size_t> digits(std::uint64_t linear) const;
    Profile profile(const std::vector<std::size_t>& digits) const;

    StateIndex outcome(std::uint64_t linear, std::size_t officer) const { return table_[linear * n_ + officer]; }
    Allocation allocation(std::uint64_t linear) const;
    /// Table lookup.
    Allocation evaluate(const Profile& profile) const;
    /// Calls the outcome function again, bypassing the table.
    Allocation rerun(const Profile& profile) const { return outcome_fn_(profile); }

    std::uint64_t stride(std::size_t officer) const { return strides_.at(officer); }

private:
    std::string name_;
    Problem problem_;
    std::vector<MessageSpaceSpec> spaces_;
    std::vector<std::vector<Message>> messages_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t profile_count_ = 0;
    std::size_t n_ = 0;
    std::vector<StateIndex> table_;
    Outcome outcome_fn_;
};

enum class Property { StrategyProof, Expressiveness, Availability, WeakAvailability, Coherence };
const char* to_string(Property p);

/// Officer `officer` changes her message from profile[officer] to `deviation`.
struct DeviationWitness
{
    std::size_t officer = 0;
    Profile profile;
    Message deviation{0};
    StateIndex original = 0;
    StateIndex deviated = 0;
    std::optional<PreferenceOrder> truth;  // for strategy-proofness and weak availability
};

std::optional<DeviationWitness> check_strategy_proof(const MechanismUnderTest& mech);
std::optional<DeviationWitness> check_expressiveness(const MechanismUnderTest& mech);
std::optional<DeviationWitness> check_availability(const MechanismUnderTest& mech);
std::optional<DeviationWitness> check_weak_availability(const MechanismUnderTest& mech);
std::optional<DeviationWitness> check_coherence(const MechanismUnderTest& mech);
std::optional<DeviationWitness> check_property(const MechanismUnderTest& mech, Property p);

/// Re-runs the mechanism on the witness profiles and re-applies the definition.
bool witness_replays(const MechanismUnderTest& mech, Property p, const DeviationWitness& w);

std::string describe(const MechanismUnderTest& mech, const DeviationWitness& w);

/// Officer `officer` could have submitted `ranking` over her menu and
/// received `deviated`, which her true preference ranks above `truthful`.
struct StepwiseWitness
{
    std::size_t officer = 0;
    std::vector<StateIndex> ranking;
    StateIndex truthful = 0;
    StateIndex deviated = 0;
};

/// Walks the truthful run of the dynamic mechanism and, at each step, tries
/// every ranking of the presented menu.
std::optional<StepwiseWitness> check_dynamic_stepwise_dominance(const Problem& problem, const UpperBoundSystem& h,
                                                                const std::vector<PreferenceOrder>& prefs,
                                                                const EnumerationCap& cap = {});

} // namespace vfair
