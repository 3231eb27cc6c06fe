#pragma once

// Message-space families: complete, zonal, zonal with a ranking over zones,
// explicit lists, and the zonal space induced by a modular bound system.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vfair/constraints.hpp"
#include "vfair/relations.hpp"

namespace vfair {

/// Ordered list of non-empty disjoint zones covering all states.
class Partition
{
public:
    Partition() = default;
    /// Throws PreconditionError unless the zones are non-empty, disjoint and cover 0..n-1.
    Partition(std::size_t universe_size, std::vector<StateMask> zones);

    static Partition single(std::size_t universe_size);
    static Partition singletons(std::size_t universe_size);

    std::size_t universe_size() const { return n_; }
    std::size_t size() const { return zones_.size(); }
    StateMask zone(std::size_t j) const { return zones_.at(j); }
    const std::vector<StateMask>& zones() const { return zones_; }
    std::size_t zone_of(StateIndex s) const { return zone_of_.at(s); }
    /// Index of the zone whose state set is exactly `mask`, if any.
    std::optional<std::size_t> find(StateMask mask) const;

    bool operator==(const Partition& o) const { return n_ == o.n_ && zones_ == o.zones_; }

private:
    std::size_t n_ = 0;
    std::vector<StateMask> zones_;
    std::vector<std::size_t> zone_of_;
};

/// Permutation of zone indices, best first.
class ZoneRanking
{
public:
    ZoneRanking() = default;
    /// Throws PreconditionError unless `order` is a permutation of 0..zones-1.
    ZoneRanking(std::size_t zone_count, std::vector<std::size_t> order);

    static ZoneRanking identity(std::size_t zone_count);

    const std::vector<std::size_t>& order() const { return order_; }
    std::size_t size() const { return order_.size(); }
    std::size_t rank(std::size_t zone) const { return position_.at(zone); }
    bool above(std::size_t a, std::size_t b) const { return position_.at(a) < position_.at(b); }

    bool operator==(const ZoneRanking& o) const { return order_ == o.order_; }

private:
    std::vector<std::size_t> order_;
    std::vector<std::size_t> position_;
};

/// Within-zone total orders only; no cross-zone pairs. `per_zone[j]` must list
/// exactly the states of zone j.
Message zonal_message(const Partition& p, std::span<const std::vector<StateIndex>> per_zone);

/// Within-zone orders plus, for every zone z ranked above z', the single pair
/// (top of z, bottom of z').
Message ranked_zonal_message(const Partition& p, std::span<const std::vector<StateIndex>> per_zone,
                             const ZoneRanking& ranking);

/// Per-zone orders recovered from a message, if each zone restriction is a
/// strict total order.
std::optional<std::vector<std::vector<StateIndex>>> zone_orders(const Partition& p, const Message& m);

/// Zone ranking implied by a ranked-zonal message, if the message has one.
std::optional<ZoneRanking> implied_zone_ranking(const Partition& p, const Message& m);

/// Unique m-maximal / m-minimal state of a zone whose states are totally ordered by m.
StateIndex zone_top(StateMask zone, const Message& m);
StateIndex zone_bottom(StateMask zone, const Message& m);

enum class SpaceKind { Complete, Zonal, RankedZonal, Explicit, ModularInduced };
const char* to_string(SpaceKind k);

/// Default cap on the number of messages an enumeration may produce (6!).
inline constexpr std::uint64_t kDefaultMessageCap = 720;

struct EnumerationCap
{
    std::uint64_t max_messages = kDefaultMessageCap;
};

class MessageSpaceSpec
{
public:
    static MessageSpaceSpec complete(std::size_t universe_size);
    static MessageSpaceSpec zonal(Partition p);
    static MessageSpaceSpec ranked_zonal(Partition p);
    /// Every listed message must be over `universe_size` states; duplicates are dropped.
    static MessageSpaceSpec explicit_list(std::size_t universe_size, std::vector<Message> messages);
    /// Zonal space over the signature partition of type `t`.
    static MessageSpaceSpec modular_induced(const UpperBoundSystem& h, TypeIndex t, std::size_t universe_size);

    SpaceKind kind() const { return kind_; }
    std::size_t universe_size() const { return n_; }
    /// Zones for Complete (one zone), Zonal, RankedZonal and ModularInduced.
    const Partition& partition() const;
    bool has_partition() const { return kind_ != SpaceKind::Explicit; }
    /// True for spaces where every message is a per-zone total order with no cross pairs.
    bool is_zonal() const
    {
        return kind_ == SpaceKind::Zonal || kind_ == SpaceKind::ModularInduced || kind_ == SpaceKind::Complete;
    }
    const std::vector<Message>& explicit_messages() const { return messages_; }
    std::optional<TypeIndex> induced_type() const { return type_; }

    bool contains(const Message& m) const;
    /// Number of admissible messages, saturating.
    std::uint64_t count() const;

private:
    SpaceKind kind_ = SpaceKind::Complete;
    std::size_t n_ = 0;
    Partition partition_;
    std::vector<Message> messages_;
    std::optional<TypeIndex> type_;
};

/// Emits each admissible message once, in deterministic order: per-zone orders
/// in lexicographic permutation order (first zone slowest), zone rankings
/// last. Throws CapExceeded when count() exceeds the cap.
void for_each_message(const MessageSpaceSpec& spec, const EnumerationCap& cap,
                      const std::function<void(const Message&)>& emit);
std::vector<Message> enumerate_messages(const MessageSpaceSpec& spec, const EnumerationCap& cap = {});

struct RichnessResult
{
    bool rich = true;
    std::optional<Message> message;
    std::optional<StatePair> pair;  // covering pair whose reversal is missing
};

RichnessResult check_richness(const MessageSpaceSpec& spec, const EnumerationCap& cap = {});

/// Zones are the classes of equal signature(H, ., t), ordered by first state.
Partition induced_partition(const UpperBoundSystem& h, TypeIndex t, std::size_t universe_size);

std::vector<Message> truthful_messages(const MessageSpaceSpec& spec, const PreferenceOrder& p,
                                       const EnumerationCap& cap = {});

/// The first truthful message in enumeration order; for zonal spaces this is
/// the unique per-zone restriction of p and is built directly.
Message truthful_message(const MessageSpaceSpec& spec, const PreferenceOrder& p, const EnumerationCap& cap = {});

/// All |S|! preference orders in lexicographic order.
std::vector<PreferenceOrder> all_preferences(std::size_t universe_size);

} // namespace vfair
