#pragma once

// Exhaustive search over static mechanisms on two-state instances. Each
// officer either can or cannot state a comparison between the two states; for
// every such configuration we look for a message profile at which every
// visibly fair, bound-respecting outcome fails.

#include <optional>
#include <string>
#include <vector>

#include "vfair/axioms.hpp"
#include "vfair/cli/report.hpp"

namespace vfair::cli {

enum class CaseOutcome {
    Domination,      // at `pivot`, every admissible outcome is dominated under some truthful profile
    BoundViolation,  // at `pivot`, every visibly fair outcome breaks a bound
    NoWitness,       // some table survives every true profile
};
const char* to_string(CaseOutcome c);

struct CandidateWitness
{
    Allocation candidate;
    std::vector<PreferenceOrder> truth;
    Allocation dominated_by;
};

struct ImpossibilityCase
{
    std::vector<bool> elicits;
    std::string label;  // "(Y,N,N)"
    std::size_t eliciting = 0;
    std::uint64_t tables = 0;  // admissible outcome tables, saturating
    CaseOutcome outcome = CaseOutcome::NoWitness;
    std::optional<Profile> pivot;
    std::vector<CandidateWitness> witnesses;
    /// NoWitness only: one surviving outcome per message profile, in
    /// enumeration order (first eliciting officer slowest, s1>s2 first).
    std::vector<Allocation> survivor;
};

struct ImpossibilityReport
{
    std::vector<ImpossibilityCase> cases;
};

/// Needs exactly two states. Configurations are listed with fewer eliciting
/// officers first, then lexicographically with Y before N.
ImpossibilityReport impossibility_search(const Problem& problem, const UpperBoundSystem& h,
                                         std::uint64_t budget = kDefaultDominationBudget);

/// Replays a table against every true profile: visibly fair, bound-respecting
/// and constrained Pareto efficient at each truthful report.
bool survives_every_truth(const Problem& problem, const UpperBoundSystem& h, const std::vector<bool>& elicits,
                          const std::vector<Allocation>& table);

/// Pass when every configuration yields a witness, Fail when some table survives.
Verdict impossibility_verdict(const ImpossibilityReport& r);
ojson impossibility_json(const Problem& problem, const ImpossibilityReport& r);

} // namespace vfair::cli
