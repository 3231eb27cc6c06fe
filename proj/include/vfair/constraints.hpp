#pragma once

// Modular upper-bound systems: caps on how many officers of given types may
// occupy a given set of states.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vfair/ids.hpp"
#include "vfair/problem.hpp"

namespace vfair {

struct UpperBound
{
    TypeMask types = 0;  // non-empty
    StateMask states = 0;
    std::size_t ceiling = 0;

    bool covers(StateIndex s, TypeIndex t) const { return contains(states, s) && contains(types, t); }
    bool operator==(const UpperBound&) const = default;
};

class UpperBoundSystem
{
public:
    UpperBoundSystem() = default;
    /// Throws PreconditionError on a bound with an empty type set.
    explicit UpperBoundSystem(std::vector<UpperBound> bounds);

    const std::vector<UpperBound>& bounds() const { return bounds_; }
    const UpperBound& bound(std::size_t h) const { return bounds_.at(h); }
    std::size_t size() const { return bounds_.size(); }
    bool empty() const { return bounds_.empty(); }

    UpperBoundSystem with(const UpperBound& extra) const;

private:
    std::vector<UpperBound> bounds_;
};

/// Indices into an UpperBoundSystem, ascending.
using BoundSet = std::vector<std::size_t>;

/// H^{s,t}: the bounds covering state s for type t.
BoundSet signature(const UpperBoundSystem& h, StateIndex s, TypeIndex t);

/// Officers counted against bound `h` under a (possibly partial) allocation.
/// Entries equal to kUnassigned are skipped.
inline constexpr StateIndex kUnassigned = static_cast<StateIndex>(-1);
std::size_t bound_count(const UpperBound& h, const Problem& problem, const Allocation& a);

struct BoundViolation
{
    std::size_t bound = 0;
    std::size_t count = 0;
    std::size_t overflow = 0;
};

struct BoundsVerdict
{
    std::vector<BoundViolation> violations;
    bool respected() const { return violations.empty(); }
};

/// Throws PreconditionError if `a` is not feasible for `problem`.
BoundsVerdict respects_bounds(const Allocation& a, const UpperBoundSystem& h, const Problem& problem);

/// Bounds met with equality. Throws PreconditionError if any bound is violated.
BoundSet binding_bounds(const Allocation& a, const UpperBoundSystem& h, const Problem& problem);

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

struct SolvencyOptions
{
    std::uint64_t node_budget = 10'000'000;
};

/// A placement of some of the officers, leaving out at least one of type
/// `officer_type`, that respects capacities and bounds yet leaves that officer
/// with no admissible state.
struct SolvencyCounterexample
{
    TypeIndex officer_type = 0;
    /// occupancy[type][state]
    std::vector<std::vector<std::size_t>> occupancy;
};

struct SolvencyResult
{
    Verdict verdict = Verdict::Pass;
    std::optional<SolvencyCounterexample> counterexample;
    std::uint64_t nodes = 0;
};

/// Searches type-by-state occupancy matrices for a stranding placement.
/// Budget exhaustion yields Inconclusive, never Pass.
SolvencyResult check_sequential_solvency(const std::vector<std::size_t>& capacities,
                                         const std::vector<std::size_t>& type_counts, const UpperBoundSystem& h,
                                         const SolvencyOptions& options = {});

SolvencyResult check_sequential_solvency(const Problem& problem, const UpperBoundSystem& h,
                                         const SolvencyOptions& options = {});

/// Independent re-check of a counterexample: row sums, capacities, bounds and
/// the stranding condition.
bool verify_solvency_counterexample(const std::vector<std::size_t>& capacities,
                                    const std::vector<std::size_t>& type_counts, const UpperBoundSystem& h,
                                    const SolvencyCounterexample& cex);

} // namespace vfair
