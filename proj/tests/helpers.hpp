#pragma once

#include <algorithm>
#include <set>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "vfair/axioms.hpp"
#include "vfair/constraints.hpp"
#include "vfair/mechanisms.hpp"
#include "vfair/message_spaces.hpp"
#include "vfair/problem.hpp"
#include "vfair/relations.hpp"

namespace vt {

using namespace vfair;

inline StateMask states(const Universe& u, std::initializer_list<const char*> ids)
{
    StateMask m = 0;
    for (const char* id : ids)
        m |= bit(u.index(id));
    return m;
}

inline Message msg(const Universe& u, std::initializer_list<std::pair<const char*, const char*>> pairs)
{
    std::vector<std::pair<StateId, StateId>> p;
    for (auto [a, b] : pairs)
        p.emplace_back(StateId{a}, StateId{b});
    return validate_message(p, u);
}

inline PreferenceOrder pref(const Universe& u, std::initializer_list<const char*> ids)
{
    std::vector<StateIndex> r;
    for (const char* id : ids)
        r.push_back(u.index(id));
    return PreferenceOrder(r);
}

inline Allocation alloc(const Universe& u, std::initializer_list<const char*> ids)
{
    Allocation a;
    for (const char* id : ids)
        a.push_back(u.index(id));
    return a;
}

inline Message order_msg(const Universe& u, std::initializer_list<const char*> ids)
{
    std::vector<StateIndex> r;
    for (const char* id : ids)
        r.push_back(u.index(id));
    return Message::from_order(u.size(), r);
}

inline Universe universe(std::size_t n)
{
    std::vector<StateId> ids;
    for (std::size_t s = 0; s < n; ++s)
        ids.emplace_back("s" + std::to_string(s + 1));
    return Universe(ids);
}

/// Random acyclic message: a random order with each consistent pair kept at probability p.
inline Message random_message(std::size_t n, std::mt19937_64& rng, double p = 0.4)
{
    std::vector<StateIndex> order(n);
    for (std::size_t s = 0; s < n; ++s)
        order[s] = s;
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution keep(p);
    Message m(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (keep(rng))
                m.add_unchecked(order[a], order[b]);
    return m;
}

inline PreferenceOrder random_pref(std::size_t n, std::mt19937_64& rng)
{
    std::vector<StateIndex> order(n);
    for (std::size_t s = 0; s < n; ++s)
        order[s] = s;
    std::shuffle(order.begin(), order.end(), rng);
    return PreferenceOrder(order);
}

/// Problem with explicit types: `types[k]` is the type index of officer k.
inline Problem typed_problem(std::vector<std::size_t> capacities, std::vector<std::size_t> types,
                             std::size_t type_count)
{
    std::vector<StateSlot> slots;
    for (std::size_t s = 0; s < capacities.size(); ++s)
        slots.push_back({StateId{"s" + std::to_string(s + 1)}, capacities[s]});
    std::vector<OfficerType> tags;
    for (std::size_t t = 0; t < type_count; ++t)
        tags.emplace_back("t" + std::to_string(t + 1));
    std::vector<Officer> officers;
    for (std::size_t k = 0; k < types.size(); ++k)
        officers.push_back({OfficerId{"i" + std::to_string(k + 1)}, types[k]});
    return Problem(slots, tags, officers);
}

/// Every feasible allocation, by plain odometer over m^n.
inline std::vector<Allocation> all_feasible(const Problem& pr)
{
    std::vector<Allocation> out;
    const std::size_t n = pr.officer_count(), m = pr.state_count();
    Allocation a(n, 0);
    while (true) {
        if (pr.is_feasible(a))
            out.push_back(a);
        std::size_t k = n;
        while (k > 0) {
            if (++a[k - 1] < m)
                break;
            a[k - 1] = 0;
            --k;
        }
        if (k == 0)
            break;
    }
    return out;
}

} // namespace vt
