#include "vfair/constraints.hpp"

#include "vfair/errors.hpp"

namespace vfair {

UpperBoundSystem::UpperBoundSystem(std::vector<UpperBound> bounds) : bounds_(std::move(bounds))
{
    for (const auto& b : bounds_)
        if (b.types == 0)
            throw PreconditionError("upper bound with an empty type set");
}

UpperBoundSystem UpperBoundSystem::with(const UpperBound& extra) const
{
    auto copy = bounds_;
    copy.push_back(extra);
    return UpperBoundSystem(std::move(copy));
}

BoundSet signature(const UpperBoundSystem& h, StateIndex s, TypeIndex t)
{
    BoundSet out;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (h.bound(i).covers(s, t))
            out.push_back(i);
    return out;
}

std::size_t bound_count(const UpperBound& h, const Problem& problem, const Allocation& a)
{
    std::size_t n = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] != kUnassigned && h.covers(a[k], problem.type_of(k)))
            ++n;
    return n;
}

BoundsVerdict respects_bounds(const Allocation& a, const UpperBoundSystem& h, const Problem& problem)
{
    if (!problem.is_feasible(a))
        throw PreconditionError("allocation is not feasible");
    BoundsVerdict verdict;
    for (std::size_t i = 0; i < h.size(); ++i) {
        std::size_t n = bound_count(h.bound(i), problem, a);
        if (n > h.bound(i).ceiling)
            verdict.violations.push_back({i, n, n - h.bound(i).ceiling});
    }
    return verdict;
}

BoundSet binding_bounds(const Allocation& a, const UpperBoundSystem& h, const Problem& problem)
{
    if (!respects_bounds(a, h, problem).respected())
        throw PreconditionError("allocation violates the upper bounds");
    BoundSet out;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (bound_count(h.bound(i), problem, a) == h.bound(i).ceiling)
            out.push_back(i);
    return out;
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass:
        return "pass";
    case Verdict::Fail:
        return "fail";
    case Verdict::Inconclusive:
        return "inconclusive";
    }
    return "?";
}

} // namespace vfair
