#pragma once

#include <string>
#include <vector>

#include "vfair/ids.hpp"

namespace vfair {

struct StateSlot
{
    StateId id;
    std::size_t capacity = 1;
};

struct Officer
{
    OfficerId id;
    TypeIndex type = 0;
};

/// state index per officer, officers in priority order
using Allocation = std::vector<StateIndex>;

/// An allocation instance. Officers are stored in priority order: index 0 is
/// the highest-priority officer.
class Problem
{
public:
    Problem() = default;
    /// Validates unique ids, positive capacities, total capacity >= officers.
    Problem(std::vector<StateSlot> states, std::vector<OfficerType> types, std::vector<Officer> officers);

    /// Single-type convenience: states "s1".."sm" with the given capacities and
    /// officers "i1".."in" of one type "t".
    static Problem uniform(std::vector<std::size_t> capacities, std::size_t officers);

    const Universe& states() const { return universe_; }
    std::size_t state_count() const { return universe_.size(); }
    std::size_t capacity(StateIndex s) const { return capacities_.at(s); }
    const std::vector<std::size_t>& capacities() const { return capacities_; }

    std::size_t officer_count() const { return officers_.size(); }
    const Officer& officer(std::size_t k) const { return officers_.at(k); }
    const std::vector<Officer>& officers() const { return officers_; }
    TypeIndex type_of(std::size_t k) const { return officers_.at(k).type; }
    std::size_t officer_index(const std::string& id) const;

    std::size_t type_count() const { return types_.size(); }
    const OfficerType& type(TypeIndex t) const { return types_.at(t); }
    TypeIndex type_index(const std::string& tag) const;
    /// Number of officers of each type.
    std::vector<std::size_t> type_counts() const;

    /// Capacity respected at every state and one state per officer.
    bool is_feasible(const Allocation& a) const;

    std::string format(const Allocation& a) const;

private:
    Universe universe_;
    std::vector<std::size_t> capacities_;
    std::vector<OfficerType> types_;
    std::vector<Officer> officers_;
};

/// Occupancy per state.
std::vector<std::size_t> occupancy(const Problem& problem, const Allocation& a);

} // namespace vfair
