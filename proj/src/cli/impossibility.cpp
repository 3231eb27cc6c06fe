#include "vfair/cli/impossibility.hpp"

#include <algorithm>

#include "vfair/combinatorics.hpp"

namespace vfair::cli {

namespace {

// The two messages an eliciting officer can send, s1>s2 first.
Message comparison(bool first_above)
{
    std::vector<StatePair> p{first_above ? StatePair{0, 1} : StatePair{1, 0}};
    return Message::from_pairs(2, p);
}

std::vector<Allocation> feasible_allocations(const Problem& pr)
{
    std::vector<Allocation> out;
    const std::size_t n = pr.officer_count();
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        Allocation a(n);
        for (std::size_t k = 0; k < n; ++k)
            a[k] = (x >> (n - 1 - k)) & 1U;
        if (pr.is_feasible(a))
            out.push_back(a);
    }
    return out;
}

// Message profiles of a configuration in enumeration order.
std::vector<Profile> message_profiles(const std::vector<bool>& elicits)
{
    std::vector<std::size_t> who;
    for (std::size_t k = 0; k < elicits.size(); ++k)
        if (elicits[k])
            who.push_back(k);
    std::vector<Profile> out;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << who.size()); ++x) {
        Profile p(elicits.size(), Message(2));
        for (std::size_t j = 0; j < who.size(); ++j)
            p[who[j]] = comparison(((x >> (who.size() - 1 - j)) & 1U) == 0);
        out.push_back(std::move(p));
    }
    return out;
}

PreferenceOrder order(bool first_above)
{
    return PreferenceOrder(first_above ? std::vector<StateIndex>{0, 1} : std::vector<StateIndex>{1, 0});
}

// True profiles whose truthful report under `elicits` is `m`.
std::vector<std::vector<PreferenceOrder>> consistent_truths(const Profile& m, const std::vector<bool>& elicits)
{
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < elicits.size(); ++k)
        if (!elicits[k])
            free.push_back(k);
    std::vector<std::vector<PreferenceOrder>> out;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << free.size()); ++x) {
        std::vector<PreferenceOrder> prefs(elicits.size());
        for (std::size_t k = 0; k < elicits.size(); ++k)
            if (elicits[k])
                prefs[k] = order(m[k].prefers(0, 1));
        for (std::size_t j = 0; j < free.size(); ++j)
            prefs[free[j]] = order(((x >> (free.size() - 1 - j)) & 1U) == 0);
        out.push_back(std::move(prefs));
    }
    return out;
}

std::vector<std::vector<bool>> configurations(std::size_t n)
{
    std::vector<std::vector<bool>> out;
    for (std::size_t y = 0; y <= n; ++y) {
        std::vector<bool> c(n, false);
        std::fill(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(y), true);
        do
            out.push_back(c);
        while (std::prev_permutation(c.begin(), c.end()));
    }
    return out;
}

} // namespace

const char* to_string(CaseOutcome c)
{
    switch (c) {
    case CaseOutcome::Domination: return "domination";
    case CaseOutcome::BoundViolation: return "bound-violation";
    case CaseOutcome::NoWitness: return "no-witness";
    }
    return "?";
}

ImpossibilityReport impossibility_search(const Problem& problem, const UpperBoundSystem& h, std::uint64_t budget)
{
    if (problem.state_count() != 2)
        throw PreconditionError("the impossibility search needs exactly two states");
    if (problem.officer_count() > 16)
        throw CapExceeded("officers in the impossibility search", problem.officer_count(), 16);
    const auto feasible = feasible_allocations(problem);
    ImpossibilityReport report;
    for (const auto& elicits : configurations(problem.officer_count())) {
        ImpossibilityCase c;
        c.elicits = elicits;
        c.eliciting = static_cast<std::size_t>(std::count(elicits.begin(), elicits.end(), true));
        c.label = "(";
        for (std::size_t k = 0; k < elicits.size(); ++k)
            c.label += std::string(k ? "," : "") + (elicits[k] ? "Y" : "N");
        c.label += ")";
        c.tables = 1;
        std::vector<Allocation> survivor;
        for (const Profile& m : message_profiles(elicits)) {
            std::vector<Allocation> candidates;
            for (const auto& a : feasible)
                if (!visibly_unfair_witness(problem, a, m) && respects_bounds(a, h, problem).respected())
                    candidates.push_back(a);
            c.tables = saturating_mul(c.tables, candidates.size());
            if (candidates.empty()) {
                if (c.outcome != CaseOutcome::BoundViolation) {
                    c.outcome = CaseOutcome::BoundViolation;
                    c.pivot = m;
                    c.witnesses.clear();
                }
                continue;
            }
            if (c.outcome != CaseOutcome::NoWitness)
                continue;
            const auto truths = consistent_truths(m, elicits);
            std::vector<CandidateWitness> found;
            std::optional<Allocation> clean;
            for (const auto& a : candidates) {
                std::optional<CandidateWitness> w;
                for (const auto& prefs : truths) {
                    auto r = constrained_pareto_efficient(problem, a, prefs, h, budget);
                    if (!r.efficient) {
                        w = CandidateWitness{a, prefs, *r.dominated_by};
                        break;
                    }
                }
                if (w)
                    found.push_back(std::move(*w));
                else if (!clean)
                    clean = a;
            }
            if (!clean) {
                c.outcome = CaseOutcome::Domination;
                c.pivot = m;
                c.witnesses = std::move(found);
            } else {
                survivor.push_back(*clean);
            }
        }
        if (c.outcome == CaseOutcome::NoWitness)
            c.survivor = std::move(survivor);
        report.cases.push_back(std::move(c));
    }
    return report;
}

bool survives_every_truth(const Problem& problem, const UpperBoundSystem& h, const std::vector<bool>& elicits,
                          const std::vector<Allocation>& table)
{
    const auto profiles = message_profiles(elicits);
    if (table.size() != profiles.size())
        return false;
    const std::size_t n = problem.officer_count();
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        std::vector<PreferenceOrder> prefs;
        for (std::size_t k = 0; k < n; ++k)
            prefs.push_back(order(((x >> (n - 1 - k)) & 1U) == 0));
        Profile m(n, Message(2));
        for (std::size_t k = 0; k < n; ++k)
            if (elicits[k])
                m[k] = comparison(prefs[k].prefers(0, 1));
        auto it = std::find(profiles.begin(), profiles.end(), m);
        const Allocation& a = table[static_cast<std::size_t>(it - profiles.begin())];
        if (!problem.is_feasible(a) || visibly_unfair_witness(problem, a, m) || !respects_bounds(a, h, problem).respected())
            return false;
        if (!constrained_pareto_efficient(problem, a, prefs, h).efficient)
            return false;
    }
    return true;
}

Verdict impossibility_verdict(const ImpossibilityReport& r)
{
    for (const auto& c : r.cases)
        if (c.outcome == CaseOutcome::NoWitness)
            return Verdict::Fail;
    return Verdict::Pass;
}

ojson impossibility_json(const Problem& problem, const ImpossibilityReport& r)
{
    auto prefs_json = [&](const std::vector<PreferenceOrder>& prefs) {
        ojson out = ojson::object();
        for (std::size_t k = 0; k < prefs.size(); ++k) {
            ojson order = ojson::array();
            for (StateIndex s : prefs[k].ranking())
                order.push_back(problem.states().id(s).value);
            out[problem.officer(k).id.value] = order;
        }
        return out;
    };
    ojson cases = ojson::array();
    for (const auto& c : r.cases) {
        ojson j;
        j["configuration"] = c.label;
        j["eliciting"] = c.eliciting;
        j["tables"] = c.tables;
        j["outcome"] = to_string(c.outcome);
        if (c.pivot)
            j["pivot"] = profile_json(problem, *c.pivot);
        if (!c.witnesses.empty()) {
            ojson ws = ojson::array();
            for (const auto& w : c.witnesses)
                ws.push_back({{"candidate", allocation_json(problem, w.candidate)},
                              {"truth", prefs_json(w.truth)},
                              {"dominated_by", allocation_json(problem, w.dominated_by)}});
            j["witnesses"] = ws;
        }
        if (!c.survivor.empty()) {
            ojson t = ojson::array();
            for (const auto& a : c.survivor)
                t.push_back(allocation_json(problem, a));
            j["surviving_table"] = t;
        }
        cases.push_back(std::move(j));
    }
    return {{"cases", cases}, {"verdict", to_string(impossibility_verdict(r))}};
}

} // namespace vfair::cli
