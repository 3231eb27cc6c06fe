#include "vfair/problem.hpp"

#include <numeric>
#include <unordered_set>

#include "vfair/errors.hpp"

namespace vfair {

namespace {

Universe make_universe(const std::vector<StateSlot>& states)
{
    std::vector<StateId> ids;
    ids.reserve(states.size());
    for (const auto& s : states)
        ids.push_back(s.id);
    return Universe(std::move(ids));
}

} // namespace

Problem::Problem(std::vector<StateSlot> states, std::vector<OfficerType> types, std::vector<Officer> officers)
    : universe_(make_universe(states)), types_(std::move(types)), officers_(std::move(officers))
{
    for (const auto& s : states) {
        if (s.capacity == 0)
            throw PreconditionError("state '" + s.id.value + "' has zero capacity");
        capacities_.push_back(s.capacity);
    }
    if (types_.size() > kMaxTypes)
        throw PreconditionError("too many officer types");
    std::unordered_set<std::string> seen_types;
    for (const auto& t : types_)
        if (!seen_types.insert(t.value).second)
            throw PreconditionError("duplicate type '" + t.value + "'");
    std::unordered_set<std::string> seen;
    for (const auto& o : officers_) {
        if (!seen.insert(o.id.value).second)
            throw PreconditionError("duplicate officer id '" + o.id.value + "'");
        if (o.type >= types_.size())
            throw PreconditionError("officer '" + o.id.value + "' has an unknown type");
    }
    std::size_t total = std::accumulate(capacities_.begin(), capacities_.end(), std::size_t{0});
    if (total < officers_.size())
        throw PreconditionError("total capacity " + std::to_string(total) + " is below the officer count " +
                                std::to_string(officers_.size()));
}

Problem Problem::uniform(std::vector<std::size_t> capacities, std::size_t officers)
{
    std::vector<StateSlot> states;
    for (std::size_t s = 0; s < capacities.size(); ++s)
        states.push_back({StateId{"s" + std::to_string(s + 1)}, capacities[s]});
    std::vector<Officer> os;
    for (std::size_t i = 0; i < officers; ++i)
        os.push_back({OfficerId{"i" + std::to_string(i + 1)}, 0});
    return Problem(std::move(states), {OfficerType{"t"}}, std::move(os));
}

std::size_t Problem::officer_index(const std::string& id) const
{
    for (std::size_t k = 0; k < officers_.size(); ++k)
        if (officers_[k].id.value == id)
            return k;
    throw UnknownId("unknown officer '" + id + "'");
}

TypeIndex Problem::type_index(const std::string& tag) const
{
    for (TypeIndex t = 0; t < types_.size(); ++t)
        if (types_[t].value == tag)
            return t;
    throw UnknownId("unknown type '" + tag + "'");
}

std::vector<std::size_t> Problem::type_counts() const
{
    std::vector<std::size_t> counts(types_.size(), 0);
    for (const auto& o : officers_)
        ++counts[o.type];
    return counts;
}

bool Problem::is_feasible(const Allocation& a) const
{
    if (a.size() != officers_.size())
        return false;
    std::vector<std::size_t> occ(capacities_.size(), 0);
    for (StateIndex s : a) {
        if (s >= capacities_.size() || ++occ[s] > capacities_[s])
            return false;
    }
    return true;
}

std::string Problem::format(const Allocation& a) const
{
    std::string out = "(";
    for (std::size_t k = 0; k < a.size(); ++k)
        out += (k ? "," : "") + universe_.id(a[k]).value;
    return out + ")";
}

std::vector<std::size_t> occupancy(const Problem& problem, const Allocation& a)
{
    std::vector<std::size_t> occ(problem.state_count(), 0);
    for (StateIndex s : a)
        ++occ.at(s);
    return occ;
}

} // namespace vfair
