#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace vfair {

/// Opaque string identifier, distinct per Tag.
template <class Tag>
struct Token
{
    std::string value;

    Token() = default;
    explicit Token(std::string v) : value(std::move(v)) {}

    auto operator<=>(const Token&) const = default;
    bool operator==(const Token&) const = default;
};

struct StateTag;
struct OfficerTag;
struct TypeTag;

using StateId = Token<StateTag>;
using OfficerId = Token<OfficerTag>;
using OfficerType = Token<TypeTag>;

using StateIndex = std::size_t;
using TypeIndex = std::size_t;

/// Set of state indices. Instances are capped at kMaxStates states.
using StateMask = std::uint64_t;
/// Set of type indices.
using TypeMask = std::uint64_t;

inline constexpr std::size_t kMaxStates = 64;
inline constexpr std::size_t kMaxTypes = 64;

constexpr StateMask bit(std::size_t i) { return StateMask{1} << i; }

constexpr StateMask full_mask(std::size_t n) { return n >= 64 ? ~StateMask{0} : (bit(n) - 1); }

constexpr bool contains(StateMask m, std::size_t i) { return (m >> i) & 1U; }

constexpr std::size_t popcount(StateMask m) { return static_cast<std::size_t>(std::popcount(m)); }

constexpr std::size_t lowest(StateMask m) { return static_cast<std::size_t>(std::countr_zero(m)); }

template <class F>
void for_each_bit(StateMask m, F&& f)
{
    while (m != 0) {
        f(lowest(m));
        m &= m - 1;
    }
}

std::vector<std::size_t> bits_of(StateMask m);

/// Ordered, duplicate-free list of state ids with index lookup.
class Universe
{
public:
    Universe() = default;
    explicit Universe(std::vector<StateId> ids);

    std::size_t size() const { return ids_.size(); }
    StateMask all() const { return full_mask(ids_.size()); }

    const StateId& id(StateIndex s) const { return ids_.at(s); }
    const std::vector<StateId>& ids() const { return ids_; }

    /// Throws UnknownId.
    StateIndex index(const StateId& id) const;
    StateIndex index(const std::string& token) const { return index(StateId{token}); }
    bool has(const std::string& token) const { return lookup_.count(token) != 0; }

    /// Members of `m`, sorted lexicographically by id token.
    std::vector<StateIndex> sorted(StateMask m) const;
    /// "{s1,s2}" in lexicographic order.
    std::string format(StateMask m) const;

private:
    std::vector<StateId> ids_;
    std::unordered_map<std::string, StateIndex> lookup_;
};

} // namespace vfair

template <class Tag>
struct std::hash<vfair::Token<Tag>>
{
    std::size_t operator()(const vfair::Token<Tag>& t) const noexcept { return std::hash<std::string>{}(t.value); }
};
