#pragma once

// Strict partial comparison relations over states.
//
// A Message is stored as the raw set of reported pairs: no transitive closure
// is ever applied implicitly. Maximal elements and comparability are evaluated
// on exactly the pairs that were reported.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vfair/errors.hpp"
#include "vfair/ids.hpp"

namespace vfair {

using StatePair = std::pair<StateIndex, StateIndex>;

/// A strict total order over all states of a universe, best first.
class PreferenceOrder
{
public:
    PreferenceOrder() = default;
    /// Throws PreconditionError unless `ranking` is a permutation of 0..n-1.
    explicit PreferenceOrder(std::vector<StateIndex> ranking);

    std::size_t size() const { return ranking_.size(); }
    const std::vector<StateIndex>& ranking() const { return ranking_; }
    std::size_t rank(StateIndex s) const { return position_.at(s); }

    bool prefers(StateIndex a, StateIndex b) const { return position_[a] < position_[b]; }
    bool weakly_prefers(StateIndex a, StateIndex b) const { return a == b || prefers(a, b); }

    /// Best member of a non-empty set.
    StateIndex best_in(StateMask set) const;

    /// Ranking restricted to `set`, best first.
    std::vector<StateIndex> restricted(StateMask set) const;

    bool operator==(const PreferenceOrder& o) const { return ranking_ == o.ranking_; }

private:
    std::vector<StateIndex> ranking_;
    std::vector<std::size_t> position_;
};

/// Irreflexive acyclic relation over the states of a universe of fixed size.
class Message
{
public:
    Message() = default;
    /// The empty relation over `universe_size` states.
    explicit Message(std::size_t universe_size);

    /// Validates and builds. Throws InvalidMessage on a reflexive pair or a
    /// cycle and UnknownId on an out-of-range index.
    static Message from_pairs(std::size_t universe_size, std::span<const StatePair> pairs);
    /// All pairs (order[i], order[j]) for i < j; `order` lists distinct states.
    static Message from_order(std::size_t universe_size, std::span<const StateIndex> order);

    std::size_t universe_size() const { return below_.size(); }

    /// True iff (a, b) is a reported pair, i.e. a is strictly above b.
    bool prefers(StateIndex a, StateIndex b) const { return contains(below_[a], b); }
    /// States strictly below `a`.
    StateMask below(StateIndex a) const { return below_[a]; }
    /// States strictly above `b`.
    StateMask above(StateIndex b) const { return above_[b]; }

    std::size_t pair_count() const;
    std::vector<StatePair> pairs() const;
    bool empty() const { return pair_count() == 0; }

    bool operator==(const Message& o) const { return below_ == o.below_; }
    auto operator<=>(const Message& o) const { return below_ <=> o.below_; }

    /// Adds a pair without validation; callers that mutate must re-validate.
    void add_unchecked(StateIndex a, StateIndex b);

private:
    std::vector<StateMask> below_;
    std::vector<StateMask> above_;
};

/// Checks that `pairs` over `universe` form an irreflexive acyclic relation.
Message validate_message(std::span<const std::pair<StateId, StateId>> pairs, const Universe& universe);

/// One directed cycle (first state repeated at the end) if the pairs contain one.
std::optional<std::vector<StateIndex>> find_cycle(std::size_t universe_size, std::span<const StatePair> pairs);

/// G(X, m): members of X not strictly dominated by another member of X.
/// Throws PreconditionError if X is empty.
StateMask maximal_elements(StateMask x, const Message& m);

/// Members of X that do not strictly dominate another member of X.
StateMask minimal_elements(StateMask x, const Message& m);

bool comparable(StateIndex a, StateIndex b, const Message& m);

/// Every reported pair agrees with the preference.
bool is_truthful(const Message& m, const PreferenceOrder& p);

/// Every pair of `coarse` is also a pair of `refined`.
bool contains_more_information(const Message& refined, const Message& coarse);

/// Diagnostic only; never applied by the engines or oracles.
Message transitive_closure(const Message& m);

/// The complete message of a preference order.
Message complete_message(const PreferenceOrder& p);

/// "s1>s2, s1>s3" using the universe's ids, pairs sorted lexicographically.
std::string format_message(const Message& m, const Universe& universe);

} // namespace vfair
