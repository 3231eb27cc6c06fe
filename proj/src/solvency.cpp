#include "vfair/constraints.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "vfair/errors.hpp"

namespace vfair {

namespace {

// States with identical membership in every bound are interchangeable for the
// stranding question, so the search runs over such classes instead of states.
struct StateClass
{
    std::vector<StateIndex> states;
    std::size_t capacity = 0;
    std::vector<std::size_t> bounds;  // bounds whose state set contains the class
};

std::vector<StateClass> state_classes(const std::vector<std::size_t>& capacities, const UpperBoundSystem& h)
{
    std::map<std::vector<bool>, std::size_t> index;
    std::vector<StateClass> classes;
    for (StateIndex s = 0; s < capacities.size(); ++s) {
        std::vector<bool> key(h.size());
        for (std::size_t b = 0; b < h.size(); ++b)
            key[b] = contains(h.bound(b).states, s);
        auto [it, fresh] = index.emplace(key, classes.size());
        if (fresh) {
            StateClass c;
            for (std::size_t b = 0; b < h.size(); ++b)
                if (key[b])
                    c.bounds.push_back(b);
            classes.push_back(std::move(c));
        }
        auto& c = classes[it->second];
        c.states.push_back(s);
        c.capacity += capacities[s];
    }
    return classes;
}

class ClassSearch
{
public:
    ClassSearch(const std::vector<StateClass>& classes, const UpperBoundSystem& h, std::vector<std::size_t> rows,
                std::vector<bool> must_fill, std::vector<std::size_t> tight, std::uint64_t& nodes,
                std::uint64_t budget)
        : classes_(classes), h_(h), rows_(std::move(rows)), must_fill_(std::move(must_fill)), tight_(std::move(tight)),
          nodes_(nodes), budget_(budget)
    {
        const std::size_t nc = classes_.size();
        order_.resize(nc);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        // tightest slack first: must-fill classes, then smallest min(capacity, ceilings)
        auto slack = [&](std::size_t c) {
            std::size_t s = classes_[c].capacity;
            for (std::size_t b : classes_[c].bounds)
                s = std::min(s, h_.bound(b).ceiling);
            return s;
        };
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            if (must_fill_[a] != must_fill_[b])
                return static_cast<bool>(must_fill_[a]);
            return slack(a) < slack(b);
        });
        fill_rest_.assign(nc + 1, 0);
        for (std::size_t i = nc; i-- > 0;) {
            fill_rest_[i] = fill_rest_[i + 1] + (must_fill_[order_[i]] ? classes_[order_[i]].capacity : 0);
        }
        counts_.assign(h_.size(), 0);
        x_.assign(rows_.size(), std::vector<std::size_t>(nc, 0));
        in_bound_rest_.assign(h_.size(), std::vector<std::size_t>(nc + 1, 0));
        for (std::size_t b = 0; b < h_.size(); ++b)
            for (std::size_t i = nc; i-- > 0;) {
                const auto& cb = classes_[order_[i]].bounds;
                bool in = std::find(cb.begin(), cb.end(), b) != cb.end();
                in_bound_rest_[b][i] = in_bound_rest_[b][i + 1] + (in ? classes_[order_[i]].capacity : 0);
            }
    }

    bool run() { return feasible_rest(0) && dfs(0, 0, 0); }
    bool exhausted() const { return exhausted_; }
    /// x[type][class]
    const std::vector<std::vector<std::size_t>>& solution() const { return x_; }

private:
    std::size_t remaining_total() const { return std::accumulate(rows_.begin(), rows_.end(), std::size_t{0}); }

    // Necessary conditions for completing the columns order_[pos..].
    bool feasible_rest(std::size_t pos) const
    {
        if (fill_rest_[pos] > remaining_total())
            return false;
        for (std::size_t b : tight_) {
            const auto& ub = h_.bound(b);
            std::size_t typed = 0;
            for (TypeIndex u = 0; u < rows_.size(); ++u)
                if (contains(ub.types, u))
                    typed += rows_[u];
            if (counts_[b] + std::min(typed, in_bound_rest_[b][pos]) < ub.ceiling)
                return false;
        }
        return true;
    }

    bool dfs(std::size_t pos, TypeIndex u, std::size_t col_total)
    {
        const std::size_t nc = classes_.size();
        if (pos == nc) {
            for (std::size_t b : tight_)
                if (counts_[b] != h_.bound(b).ceiling)
                    return false;
            return true;
        }
        const std::size_t c = order_[pos];
        const StateClass& cls = classes_[c];
        if (u == rows_.size()) {
            if (must_fill_[c] && col_total != cls.capacity)
                return false;
            if (!feasible_rest(pos + 1))
                return false;
            return dfs(pos + 1, 0, 0);
        }

        std::size_t hi = std::min(rows_[u], cls.capacity - col_total);
        for (std::size_t b : cls.bounds) {
            const auto& ub = h_.bound(b);
            if (contains(ub.types, u))
                hi = std::min(hi, ub.ceiling - counts_[b]);
        }
        std::size_t lo = 0;
        if (must_fill_[c]) {
            std::size_t later = 0;
            for (TypeIndex v = u + 1; v < rows_.size(); ++v)
                later += rows_[v];
            std::size_t need = cls.capacity - col_total;
            if (need > later)
                lo = std::max(lo, need - later);
        }
        if (lo > hi)
            return false;

        for (std::size_t v = hi + 1; v-- > lo;) {
            if (++nodes_ > budget_) {
                exhausted_ = true;
                return false;
            }
            apply(c, u, v, true);
            bool found = dfs(pos, u + 1, col_total + v);
            if (found)
                return true;
            apply(c, u, v, false);
            if (exhausted_)
                return false;
        }
        return false;
    }

    void apply(std::size_t c, TypeIndex u, std::size_t v, bool forward)
    {
        for (std::size_t b : classes_[c].bounds)
            if (contains(h_.bound(b).types, u))
                counts_[b] = forward ? counts_[b] + v : counts_[b] - v;
        rows_[u] = forward ? rows_[u] - v : rows_[u] + v;
        x_[u][c] = forward ? v : 0;
    }

    const std::vector<StateClass>& classes_;
    const UpperBoundSystem& h_;
    std::vector<std::size_t> rows_;
    std::vector<bool> must_fill_;
    std::vector<std::size_t> tight_;
    std::uint64_t& nodes_;
    std::uint64_t budget_;
    bool exhausted_ = false;

    std::vector<std::size_t> order_;
    std::vector<std::size_t> fill_rest_;
    std::vector<std::vector<std::size_t>> in_bound_rest_;
    std::vector<std::size_t> counts_;
    std::vector<std::vector<std::size_t>> x_;
};

SolvencyCounterexample expand(const std::vector<StateClass>& classes, const std::vector<std::size_t>& capacities,
                              TypeIndex t, const std::vector<std::vector<std::size_t>>& x)
{
    SolvencyCounterexample cex;
    cex.officer_type = t;
    cex.occupancy.assign(x.size(), std::vector<std::size_t>(capacities.size(), 0));
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<std::size_t> room;
        for (StateIndex s : classes[c].states)
            room.push_back(capacities[s]);
        std::size_t slot = 0;
        for (TypeIndex u = 0; u < x.size(); ++u) {
            std::size_t left = x[u][c];
            while (left > 0) {
                while (room[slot] == 0)
                    ++slot;
                std::size_t take = std::min(left, room[slot]);
                cex.occupancy[u][classes[c].states[slot]] += take;
                room[slot] -= take;
                left -= take;
            }
        }
    }
    return cex;
}

} // namespace

SolvencyResult check_sequential_solvency(const std::vector<std::size_t>& capacities,
                                         const std::vector<std::size_t>& type_counts, const UpperBoundSystem& h,
                                         const SolvencyOptions& options)
{
    for (const auto& b : h.bounds())
        if (type_counts.size() < 64 && (b.types >> type_counts.size()) != 0)
            throw PreconditionError("upper bound refers to an unknown type");

    SolvencyResult result;
    const auto classes = state_classes(capacities, h);
    bool exhausted = false;

    for (TypeIndex t = 0; t < type_counts.size(); ++t) {
        if (type_counts[t] == 0)
            continue;
        std::vector<std::size_t> rows = type_counts;
        --rows[t];
        const std::size_t others = std::accumulate(rows.begin(), rows.end(), std::size_t{0});

        std::vector<std::size_t> ht;  // H^t
        for (std::size_t b = 0; b < h.size(); ++b)
            if (contains(h.bound(b).types, t))
                ht.push_back(b);
        if (ht.size() >= 40)
            throw PreconditionError("solvency search supports fewer than 40 bounds per type");

        std::vector<std::uint64_t> subsets(std::uint64_t{1} << ht.size());
        std::iota(subsets.begin(), subsets.end(), std::uint64_t{0});
        std::stable_sort(subsets.begin(), subsets.end(),
                         [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) < std::popcount(b); });

        for (std::uint64_t subset : subsets) {
            if (++result.nodes > options.node_budget) {
                exhausted = true;
                break;
            }
            std::vector<std::size_t> tight;
            for (std::size_t i = 0; i < ht.size(); ++i)
                if ((subset >> i) & 1U)
                    tight.push_back(ht[i]);

            std::vector<bool> must_fill(classes.size(), true);
            for (std::size_t c = 0; c < classes.size(); ++c)
                for (std::size_t b : tight)
                    if (std::find(classes[c].bounds.begin(), classes[c].bounds.end(), b) != classes[c].bounds.end())
                        must_fill[c] = false;

            // Lower bound on officers needed: every must-fill class plus the
            // part of one tight bound's ceiling that must lie outside them.
            std::size_t fill = 0;
            for (std::size_t c = 0; c < classes.size(); ++c)
                if (must_fill[c])
                    fill += classes[c].capacity;
            std::size_t extra = 0;
            bool impossible = false;
            for (std::size_t b : tight) {
                const auto& ub = h.bound(b);
                std::size_t typed = 0;
                for (TypeIndex u = 0; u < rows.size(); ++u)
                    if (contains(ub.types, u))
                        typed += rows[u];
                if (typed < ub.ceiling)
                    impossible = true;
                std::size_t inside_fill = 0;
                for (std::size_t c = 0; c < classes.size(); ++c)
                    if (must_fill[c] && std::find(classes[c].bounds.begin(), classes[c].bounds.end(), b) !=
                                            classes[c].bounds.end())
                        inside_fill += classes[c].capacity;
                if (ub.ceiling > inside_fill)
                    extra = std::max(extra, ub.ceiling - inside_fill);
            }
            if (impossible || fill + extra > others)
                continue;

            ClassSearch search(classes, h, rows, must_fill, tight, result.nodes, options.node_budget);
            if (search.run()) {
                result.verdict = Verdict::Fail;
                result.counterexample = expand(classes, capacities, t, search.solution());
                return result;
            }
            if (search.exhausted()) {
                exhausted = true;
                break;
            }
        }
        if (exhausted)
            break;
    }
    result.verdict = exhausted ? Verdict::Inconclusive : Verdict::Pass;
    return result;
}

SolvencyResult check_sequential_solvency(const Problem& problem, const UpperBoundSystem& h,
                                         const SolvencyOptions& options)
{
    return check_sequential_solvency(problem.capacities(), problem.type_counts(), h, options);
}

bool verify_solvency_counterexample(const std::vector<std::size_t>& capacities,
                                    const std::vector<std::size_t>& type_counts, const UpperBoundSystem& h,
                                    const SolvencyCounterexample& cex)
{
    const TypeIndex t = cex.officer_type;
    if (t >= type_counts.size() || type_counts[t] == 0 || cex.occupancy.size() != type_counts.size())
        return false;
    std::vector<std::size_t> ns(capacities.size(), 0);
    for (TypeIndex u = 0; u < type_counts.size(); ++u) {
        if (cex.occupancy[u].size() != capacities.size())
            return false;
        std::size_t row = std::accumulate(cex.occupancy[u].begin(), cex.occupancy[u].end(), std::size_t{0});
        if (row > type_counts[u] - (u == t ? 1 : 0))
            return false;
        for (StateIndex s = 0; s < capacities.size(); ++s)
            ns[s] += cex.occupancy[u][s];
    }
    std::vector<std::size_t> nh(h.size(), 0);
    for (std::size_t b = 0; b < h.size(); ++b) {
        for (TypeIndex u = 0; u < type_counts.size(); ++u)
            for (StateIndex s = 0; s < capacities.size(); ++s)
                if (h.bound(b).covers(s, u))
                    nh[b] += cex.occupancy[u][s];
        if (nh[b] > h.bound(b).ceiling)
            return false;
    }
    for (StateIndex s = 0; s < capacities.size(); ++s) {
        if (ns[s] > capacities[s])
            return false;
        bool blocked = ns[s] == capacities[s];
        for (std::size_t b : signature(h, s, t))
            blocked = blocked || nh[b] == h.bound(b).ceiling;
        if (!blocked)
            return false;
    }
    return true;
}

} // namespace vfair
