#include "vfair/ids.hpp"

#include <algorithm>

#include "vfair/errors.hpp"

namespace vfair {

std::vector<std::size_t> bits_of(StateMask m)
{
    std::vector<std::size_t> out;
    out.reserve(popcount(m));
    for_each_bit(m, [&](std::size_t i) { out.push_back(i); });
    return out;
}

Universe::Universe(std::vector<StateId> ids) : ids_(std::move(ids))
{
    if (ids_.size() > kMaxStates)
        throw PreconditionError("at most " + std::to_string(kMaxStates) + " states are supported");
    for (StateIndex i = 0; i < ids_.size(); ++i) {
        if (ids_[i].value.empty())
            throw PreconditionError("empty state id");
        if (!lookup_.emplace(ids_[i].value, i).second)
            throw PreconditionError("duplicate state id '" + ids_[i].value + "'");
    }
}

StateIndex Universe::index(const StateId& id) const
{
    auto it = lookup_.find(id.value);
    if (it == lookup_.end())
        throw UnknownId("unknown state '" + id.value + "'");
    return it->second;
}

std::vector<StateIndex> Universe::sorted(StateMask m) const
{
    auto out = bits_of(m);
    std::sort(out.begin(), out.end(), [&](StateIndex a, StateIndex b) { return ids_[a] < ids_[b]; });
    return out;
}

std::string Universe::format(StateMask m) const
{
    std::string out = "{";
    bool first = true;
    for (StateIndex s : sorted(m)) {
        if (!first)
            out += ",";
        out += ids_[s].value;
        first = false;
    }
    return out + "}";
}

} // namespace vfair
