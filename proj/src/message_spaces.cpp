#include "vfair/message_spaces.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "vfair/combinatorics.hpp"

namespace vfair {

Partition::Partition(std::size_t universe_size, std::vector<StateMask> zones)
    : n_(universe_size), zones_(std::move(zones)), zone_of_(universe_size, 0)
{
    StateMask seen = 0;
    for (std::size_t j = 0; j < zones_.size(); ++j) {
        StateMask z = zones_[j];
        if (z == 0)
            throw PreconditionError("partition has an empty zone");
        if ((z & seen) != 0)
            throw PreconditionError("partition zones overlap");
        if ((z & ~full_mask(n_)) != 0)
            throw PreconditionError("partition zone holds an unknown state");
        seen |= z;
        for_each_bit(z, [&](StateIndex s) { zone_of_[s] = j; });
    }
    if (seen != full_mask(n_))
        throw PreconditionError("partition does not cover every state");
}

Partition Partition::single(std::size_t n)
{
    if (n == 0)
        return Partition(0, {});
    return Partition(n, {full_mask(n)});
}

Partition Partition::singletons(std::size_t n)
{
    std::vector<StateMask> zones;
    for (StateIndex s = 0; s < n; ++s)
        zones.push_back(bit(s));
    return Partition(n, std::move(zones));
}

std::optional<std::size_t> Partition::find(StateMask mask) const
{
    for (std::size_t j = 0; j < zones_.size(); ++j)
        if (zones_[j] == mask)
            return j;
    return std::nullopt;
}

ZoneRanking::ZoneRanking(std::size_t zone_count, std::vector<std::size_t> order) : order_(std::move(order))
{
    if (order_.size() != zone_count)
        throw PreconditionError("zone ranking must list every zone exactly once");
    position_.assign(zone_count, zone_count);
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (order_[i] >= zone_count || position_[order_[i]] != zone_count)
            throw PreconditionError("zone ranking must list every zone exactly once");
        position_[order_[i]] = i;
    }
}

ZoneRanking ZoneRanking::identity(std::size_t zone_count)
{
    std::vector<std::size_t> order(zone_count);
    for (std::size_t i = 0; i < zone_count; ++i)
        order[i] = i;
    return ZoneRanking(zone_count, std::move(order));
}

namespace {

void check_zone_orders(const Partition& p, std::span<const std::vector<StateIndex>> per_zone)
{
    if (per_zone.size() != p.size())
        throw PreconditionError("one order per zone is required");
    for (std::size_t j = 0; j < p.size(); ++j) {
        StateMask listed = 0;
        for (StateIndex s : per_zone[j]) {
            if (s >= p.universe_size() || contains(listed, s))
                throw PreconditionError("zone order lists a state twice or out of range");
            listed |= bit(s);
        }
        if (listed != p.zone(j))
            throw PreconditionError("zone order does not cover exactly zone " + std::to_string(j));
    }
}

} // namespace

Message zonal_message(const Partition& p, std::span<const std::vector<StateIndex>> per_zone)
{
    check_zone_orders(p, per_zone);
    Message m(p.universe_size());
    for (const auto& order : per_zone)
        for (std::size_t a = 0; a < order.size(); ++a)
            for (std::size_t b = a + 1; b < order.size(); ++b)
                m.add_unchecked(order[a], order[b]);
    return m;
}

Message ranked_zonal_message(const Partition& p, std::span<const std::vector<StateIndex>> per_zone,
                             const ZoneRanking& ranking)
{
    if (ranking.size() != p.size())
        throw PreconditionError("zone ranking size does not match the partition");
    Message m = zonal_message(p, per_zone);
    const auto& order = ranking.order();
    for (std::size_t a = 0; a < order.size(); ++a)
        for (std::size_t b = a + 1; b < order.size(); ++b)
            m.add_unchecked(per_zone[order[a]].front(), per_zone[order[b]].back());
    return m;
}

std::optional<std::vector<std::vector<StateIndex>>> zone_orders(const Partition& p, const Message& m)
{
    if (m.universe_size() != p.universe_size())
        return std::nullopt;
    std::vector<std::vector<StateIndex>> out;
    for (StateMask z : p.zones()) {
        // A strict total order on k states dominates 0..k-1 states, each count once.
        std::vector<std::pair<std::size_t, StateIndex>> by_wins;
        for_each_bit(z, [&](StateIndex s) { by_wins.emplace_back(popcount(m.below(s) & z), s); });
        std::sort(by_wins.begin(), by_wins.end(), std::greater<>());
        std::vector<StateIndex> order;
        for (std::size_t i = 0; i < by_wins.size(); ++i) {
            if (by_wins[i].first != by_wins.size() - 1 - i)
                return std::nullopt;
            order.push_back(by_wins[i].second);
        }
        for (std::size_t a = 0; a < order.size(); ++a)
            for (std::size_t b = a + 1; b < order.size(); ++b)
                if (!m.prefers(order[a], order[b]))
                    return std::nullopt;
        out.push_back(std::move(order));
    }
    return out;
}

std::optional<ZoneRanking> implied_zone_ranking(const Partition& p, const Message& m)
{
    auto orders = zone_orders(p, m);
    if (!orders)
        return std::nullopt;
    const std::size_t l = p.size();
    std::vector<std::pair<std::size_t, std::size_t>> wins;  // (number of zones below, zone)
    for (std::size_t a = 0; a < l; ++a) {
        std::size_t w = 0;
        for (std::size_t b = 0; b < l; ++b)
            if (a != b && m.prefers((*orders)[a].front(), (*orders)[b].back()))
                ++w;
        wins.emplace_back(w, a);
    }
    std::sort(wins.begin(), wins.end(), [](auto x, auto y) { return x.first > y.first || (x.first == y.first && x.second < y.second); });
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < l; ++i) {
        if (wins[i].first != l - 1 - i)
            return std::nullopt;
        order.push_back(wins[i].second);
    }
    ZoneRanking r(l, order);
    if (ranked_zonal_message(p, *orders, r) != m)
        return std::nullopt;
    return r;
}

StateIndex zone_top(StateMask zone, const Message& m)
{
    StateMask g = maximal_elements(zone, m);
    if (popcount(g) != 1)
        throw PreconditionError("zone is not totally ordered by the message");
    return lowest(g);
}

StateIndex zone_bottom(StateMask zone, const Message& m)
{
    StateMask g = minimal_elements(zone, m);
    if (popcount(g) != 1)
        throw PreconditionError("zone is not totally ordered by the message");
    return lowest(g);
}

const char* to_string(SpaceKind k)
{
    switch (k) {
    case SpaceKind::Complete:
        return "complete";
    case SpaceKind::Zonal:
        return "zonal";
    case SpaceKind::RankedZonal:
        return "ranked_zonal";
    case SpaceKind::Explicit:
        return "explicit";
    case SpaceKind::ModularInduced:
        return "modular_induced";
    }
    return "?";
}

MessageSpaceSpec MessageSpaceSpec::complete(std::size_t n)
{
    MessageSpaceSpec s;
    s.kind_ = SpaceKind::Complete;
    s.n_ = n;
    s.partition_ = Partition::single(n);
    return s;
}

MessageSpaceSpec MessageSpaceSpec::zonal(Partition p)
{
    MessageSpaceSpec s;
    s.kind_ = SpaceKind::Zonal;
    s.n_ = p.universe_size();
    s.partition_ = std::move(p);
    return s;
}

MessageSpaceSpec MessageSpaceSpec::ranked_zonal(Partition p)
{
    MessageSpaceSpec s;
    s.kind_ = SpaceKind::RankedZonal;
    s.n_ = p.universe_size();
    s.partition_ = std::move(p);
    return s;
}

MessageSpaceSpec MessageSpaceSpec::explicit_list(std::size_t n, std::vector<Message> messages)
{
    MessageSpaceSpec s;
    s.kind_ = SpaceKind::Explicit;
    s.n_ = n;
    for (auto& m : messages) {
        if (m.universe_size() != n)
            throw PreconditionError("explicit message over a different universe");
        auto pairs = m.pairs();
        Message::from_pairs(n, pairs);  // re-validate
        if (std::find(s.messages_.begin(), s.messages_.end(), m) == s.messages_.end())
            s.messages_.push_back(std::move(m));
    }
    if (s.messages_.empty())
        throw PreconditionError("explicit message space is empty");
    return s;
}

MessageSpaceSpec MessageSpaceSpec::modular_induced(const UpperBoundSystem& h, TypeIndex t, std::size_t n)
{
    MessageSpaceSpec s;
    s.kind_ = SpaceKind::ModularInduced;
    s.n_ = n;
    s.partition_ = induced_partition(h, t, n);
    s.type_ = t;
    return s;
}

const Partition& MessageSpaceSpec::partition() const
{
    if (kind_ == SpaceKind::Explicit)
        throw PreconditionError("explicit message spaces have no partition");
    return partition_;
}

bool MessageSpaceSpec::contains(const Message& m) const
{
    if (m.universe_size() != n_)
        return false;
    switch (kind_) {
    case SpaceKind::Explicit:
        return std::find(messages_.begin(), messages_.end(), m) != messages_.end();
    case SpaceKind::RankedZonal:
        return implied_zone_ranking(partition_, m).has_value();
    default: {
        auto orders = zone_orders(partition_, m);
        return orders && zonal_message(partition_, *orders) == m;
    }
    }
}

std::uint64_t MessageSpaceSpec::count() const
{
    if (kind_ == SpaceKind::Explicit)
        return messages_.size();
    std::uint64_t c = 1;
    for (StateMask z : partition_.zones())
        c = saturating_mul(c, factorial(popcount(z)));
    if (kind_ == SpaceKind::RankedZonal)
        c = saturating_mul(c, factorial(partition_.size()));
    return c;
}

void for_each_message(const MessageSpaceSpec& spec, const EnumerationCap& cap,
                      const std::function<void(const Message&)>& emit)
{
    const std::uint64_t count = spec.count();
    if (count > cap.max_messages)
        throw CapExceeded("message space too large to enumerate", count, cap.max_messages);
    if (spec.kind() == SpaceKind::Explicit) {
        for (const auto& m : spec.explicit_messages())
            emit(m);
        return;
    }
    const Partition& p = spec.partition();
    std::vector<std::vector<std::vector<StateIndex>>> per_zone_perms;
    for (StateMask z : p.zones()) {
        std::vector<std::vector<StateIndex>> perms;
        for_each_permutation(bits_of(z), [&](const std::vector<StateIndex>& perm) {
            perms.push_back(perm);
            return true;
        });
        per_zone_perms.push_back(std::move(perms));
    }
    std::vector<ZoneRanking> rankings;
    if (spec.kind() == SpaceKind::RankedZonal) {
        std::vector<std::size_t> zones(p.size());
        for (std::size_t j = 0; j < p.size(); ++j)
            zones[j] = j;
        for_each_permutation(zones, [&](const std::vector<std::size_t>& order) {
            rankings.emplace_back(p.size(), order);
            return true;
        });
    }

    std::vector<std::size_t> radices;
    for (const auto& perms : per_zone_perms)
        radices.push_back(perms.size());
    if (radices.empty()) {
        emit(Message(spec.universe_size()));
        return;
    }
    MixedRadix odometer(radices);
    std::vector<std::vector<StateIndex>> orders(p.size());
    do {
        for (std::size_t j = 0; j < p.size(); ++j)
            orders[j] = per_zone_perms[j][odometer.digits()[j]];
        if (spec.kind() == SpaceKind::RankedZonal) {
            for (const auto& r : rankings)
                emit(ranked_zonal_message(p, orders, r));
        } else {
            emit(zonal_message(p, orders));
        }
    } while (odometer.next());
}

std::vector<Message> enumerate_messages(const MessageSpaceSpec& spec, const EnumerationCap& cap)
{
    std::vector<Message> out;
    for_each_message(spec, cap, [&](const Message& m) { out.push_back(m); });
    return out;
}

RichnessResult check_richness(const MessageSpaceSpec& spec, const EnumerationCap& cap)
{
    const auto messages = enumerate_messages(spec, cap);
    std::set<Message> members(messages.begin(), messages.end());
    for (const auto& m : messages) {
        auto pairs = m.pairs();
        if (spec.has_partition()) {
            // cross-zone pairs first: they are the ones a zone ranking cannot reverse
            const Partition& p = spec.partition();
            std::stable_partition(pairs.begin(), pairs.end(),
                                  [&](StatePair x) { return p.zone_of(x.first) != p.zone_of(x.second); });
        }
        for (auto [a, b] : pairs) {
            // covering: no y with a > y > b in the raw relation
            if ((m.below(a) & m.above(b)) != 0)
                continue;
            Message reversed(m.universe_size());
            for (auto [x, y] : m.pairs())
                if (!(x == a && y == b))
                    reversed.add_unchecked(x, y);
            reversed.add_unchecked(b, a);
            if (!members.count(reversed))
                return {false, m, StatePair{a, b}};
        }
    }
    return {};
}

Partition induced_partition(const UpperBoundSystem& h, TypeIndex t, std::size_t n)
{
    std::map<BoundSet, std::size_t> zone_index;
    std::vector<StateMask> zones;
    for (StateIndex s = 0; s < n; ++s) {
        auto [it, fresh] = zone_index.emplace(signature(h, s, t), zones.size());
        if (fresh)
            zones.push_back(0);
        zones[it->second] |= bit(s);
    }
    return Partition(n, std::move(zones));
}

std::vector<Message> truthful_messages(const MessageSpaceSpec& spec, const PreferenceOrder& p,
                                       const EnumerationCap& cap)
{
    std::vector<Message> out;
    for_each_message(spec, cap, [&](const Message& m) {
        if (is_truthful(m, p))
            out.push_back(m);
    });
    return out;
}

Message truthful_message(const MessageSpaceSpec& spec, const PreferenceOrder& p, const EnumerationCap& cap)
{
    if (p.size() != spec.universe_size())
        throw PreconditionError("preference and message space are over different universes");
    if (spec.is_zonal()) {
        std::vector<std::vector<StateIndex>> orders;
        for (StateMask z : spec.partition().zones())
            orders.push_back(p.restricted(z));
        return zonal_message(spec.partition(), orders);
    }
    auto all = truthful_messages(spec, p, cap);
    if (all.empty())
        throw PreconditionError("message space has no truthful message for this preference");
    return all.front();
}

std::vector<PreferenceOrder> all_preferences(std::size_t n)
{
    std::vector<StateIndex> states(n);
    for (StateIndex s = 0; s < n; ++s)
        states[s] = s;
    std::vector<PreferenceOrder> out;
    for_each_permutation(states, [&](const std::vector<StateIndex>& perm) {
        out.emplace_back(perm);
        return true;
    });
    return out;
}

} // namespace vfair
