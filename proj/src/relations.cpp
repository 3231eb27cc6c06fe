#include "vfair/relations.hpp"

#include <algorithm>

namespace vfair {

PreferenceOrder::PreferenceOrder(std::vector<StateIndex> ranking) : ranking_(std::move(ranking))
{
    position_.assign(ranking_.size(), ranking_.size());
    for (std::size_t i = 0; i < ranking_.size(); ++i) {
        StateIndex s = ranking_[i];
        if (s >= ranking_.size() || position_[s] != ranking_.size())
            throw PreconditionError("preference order is not a permutation of all states");
        position_[s] = i;
    }
}

StateIndex PreferenceOrder::best_in(StateMask set) const
{
    for (StateIndex s : ranking_)
        if (contains(set, s))
            return s;
    throw PreconditionError("best_in: empty set");
}

std::vector<StateIndex> PreferenceOrder::restricted(StateMask set) const
{
    std::vector<StateIndex> out;
    for (StateIndex s : ranking_)
        if (contains(set, s))
            out.push_back(s);
    return out;
}

Message::Message(std::size_t universe_size) : below_(universe_size, 0), above_(universe_size, 0)
{
    if (universe_size > kMaxStates)
        throw PreconditionError("at most " + std::to_string(kMaxStates) + " states are supported");
}

void Message::add_unchecked(StateIndex a, StateIndex b)
{
    below_[a] |= bit(b);
    above_[b] |= bit(a);
}

Message Message::from_pairs(std::size_t universe_size, std::span<const StatePair> pairs)
{
    Message m(universe_size);
    for (auto [a, b] : pairs) {
        if (a >= universe_size || b >= universe_size)
            throw UnknownId("state index out of range");
        if (a == b)
            throw InvalidMessage("reflexive pair on state " + std::to_string(a), {a});
    }
    if (auto cycle = find_cycle(universe_size, pairs))
        throw InvalidMessage("relation contains a cycle", *cycle);
    for (auto [a, b] : pairs)
        m.add_unchecked(a, b);
    return m;
}

Message Message::from_order(std::size_t universe_size, std::span<const StateIndex> order)
{
    Message m(universe_size);
    StateMask seen = 0;
    for (StateIndex s : order) {
        if (s >= universe_size)
            throw UnknownId("state index out of range");
        if (contains(seen, s))
            throw PreconditionError("order lists a state twice");
        seen |= bit(s);
    }
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            m.add_unchecked(order[i], order[j]);
    return m;
}

std::size_t Message::pair_count() const
{
    std::size_t n = 0;
    for (StateMask b : below_)
        n += popcount(b);
    return n;
}

std::vector<StatePair> Message::pairs() const
{
    std::vector<StatePair> out;
    for (StateIndex a = 0; a < below_.size(); ++a)
        for_each_bit(below_[a], [&](StateIndex b) { out.emplace_back(a, b); });
    return out;
}

std::optional<std::vector<StateIndex>> find_cycle(std::size_t n, std::span<const StatePair> pairs)
{
    std::vector<std::vector<StateIndex>> adj(n);
    for (auto [a, b] : pairs) {
        if (a == b)
            return std::vector<StateIndex>{a, a};
        adj[a].push_back(b);
    }
    for (auto& v : adj)
        std::sort(v.begin(), v.end());

    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<int> colour(n, 0);
    std::vector<StateIndex> stack;
    std::optional<std::vector<StateIndex>> found;

    auto dfs = [&](auto&& self, StateIndex u) -> bool {
        colour[u] = 1;
        stack.push_back(u);
        for (StateIndex v : adj[u]) {
            if (colour[v] == 1) {
                auto it = std::find(stack.begin(), stack.end(), v);
                std::vector<StateIndex> cycle(it, stack.end());
                cycle.push_back(v);
                found = std::move(cycle);
                return true;
            }
            if (colour[v] == 0 && self(self, v))
                return true;
        }
        stack.pop_back();
        colour[u] = 2;
        return false;
    };
    for (StateIndex s = 0; s < n; ++s)
        if (colour[s] == 0 && dfs(dfs, s))
            return found;
    return std::nullopt;
}

Message validate_message(std::span<const std::pair<StateId, StateId>> pairs, const Universe& universe)
{
    std::vector<StatePair> idx;
    idx.reserve(pairs.size());
    for (const auto& [a, b] : pairs)
        idx.emplace_back(universe.index(a), universe.index(b));
    try {
        return Message::from_pairs(universe.size(), idx);
    } catch (const InvalidMessage& e) {
        std::string path;
        for (StateIndex s : e.witness())
            path += (path.empty() ? "" : "->") + universe.id(s).value;
        if (e.witness().size() == 1)
            throw InvalidMessage("reflexive pair on state " + path, e.witness());
        throw InvalidMessage("relation contains the cycle " + path, e.witness());
    }
}

StateMask maximal_elements(StateMask x, const Message& m)
{
    if (x == 0)
        throw PreconditionError("maximal_elements: empty set");
    StateMask out = 0;
    for_each_bit(x, [&](StateIndex s) {
        if ((m.above(s) & x) == 0)
            out |= bit(s);
    });
    return out;
}

StateMask minimal_elements(StateMask x, const Message& m)
{
    if (x == 0)
        throw PreconditionError("minimal_elements: empty set");
    StateMask out = 0;
    for_each_bit(x, [&](StateIndex s) {
        if ((m.below(s) & x) == 0)
            out |= bit(s);
    });
    return out;
}

bool comparable(StateIndex a, StateIndex b, const Message& m)
{
    if (a >= m.universe_size() || b >= m.universe_size())
        throw UnknownId("state index out of range");
    return a == b || m.prefers(a, b) || m.prefers(b, a);
}

bool is_truthful(const Message& m, const PreferenceOrder& p)
{
    if (m.universe_size() != p.size())
        throw PreconditionError("message and preference are over different universes");
    for (StateIndex a = 0; a < m.universe_size(); ++a) {
        bool ok = true;
        for_each_bit(m.below(a), [&](StateIndex b) { ok = ok && p.prefers(a, b); });
        if (!ok)
            return false;
    }
    return true;
}

bool contains_more_information(const Message& refined, const Message& coarse)
{
    if (refined.universe_size() != coarse.universe_size())
        throw PreconditionError("messages are over different universes");
    for (StateIndex a = 0; a < coarse.universe_size(); ++a)
        if ((coarse.below(a) & ~refined.below(a)) != 0)
            return false;
    return true;
}

Message transitive_closure(const Message& m)
{
    const std::size_t n = m.universe_size();
    std::vector<StateMask> reach(n);
    for (StateIndex a = 0; a < n; ++a)
        reach[a] = m.below(a);
    for (StateIndex k = 0; k < n; ++k)
        for (StateIndex a = 0; a < n; ++a)
            if (contains(reach[a], k))
                reach[a] |= reach[k];
    Message out(n);
    for (StateIndex a = 0; a < n; ++a)
        for_each_bit(reach[a], [&](StateIndex b) { out.add_unchecked(a, b); });
    return out;
}

Message complete_message(const PreferenceOrder& p)
{
    return Message::from_order(p.size(), p.ranking());
}

std::string format_message(const Message& m, const Universe& universe)
{
    std::vector<std::pair<StateId, StateId>> named;
    for (auto [a, b] : m.pairs())
        named.emplace_back(universe.id(a), universe.id(b));
    std::sort(named.begin(), named.end());
    std::string out;
    for (const auto& [a, b] : named)
        out += (out.empty() ? "" : ", ") + a.value + ">" + b.value;
    return out.empty() ? "(empty)" : out;
}

} // namespace vfair
