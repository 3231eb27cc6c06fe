#include "vfair/axioms.hpp"

#include <algorithm>

#include "vfair/combinatorics.hpp"

namespace vfair {

MechanismUnderTest::MechanismUnderTest(std::string name, Problem problem, std::vector<MessageSpaceSpec> spaces,
                                       const Outcome& outcome, const EnumerationCap& cap, std::uint64_t profile_cap)
    : name_(std::move(name)), problem_(std::move(problem)), spaces_(std::move(spaces)),
      n_(problem_.officer_count()), outcome_fn_(outcome)
{
    if (spaces_.size() != n_)
        throw PreconditionError("one message space per officer is required");
    std::uint64_t total = 1;
    for (const auto& sp : spaces_) {
        if (sp.universe_size() != problem_.state_count())
            throw PreconditionError("message space over a different set of states");
        total = saturating_mul(total, sp.count());
    }
    if (total > profile_cap)
        throw CapExceeded("profile space too large to tabulate", total, profile_cap);
    for (const auto& sp : spaces_)
        messages_.push_back(enumerate_messages(sp, cap));
    profile_count_ = total;

    strides_.assign(n_, 1);
    for (std::size_t i = n_; i-- > 1;)
        strides_[i - 1] = strides_[i] * messages_[i].size();

    table_.resize(profile_count_ * n_);
    std::vector<std::size_t> d(n_, 0);
    for (std::uint64_t l = 0; l < profile_count_; ++l) {
        Allocation a = outcome_fn_(profile(d));
        if (a.size() != n_)
            throw PreconditionError("mechanism returned an allocation of the wrong size");
        if (!problem_.is_feasible(a))
            throw PreconditionError("mechanism " + name_ + " returned infeasible " + problem_.format(a));
        std::copy(a.begin(), a.end(), table_.begin() + static_cast<std::ptrdiff_t>(l * n_));
        for (std::size_t i = n_; i-- > 0;) {
            if (++d[i] < messages_[i].size())
                break;
            d[i] = 0;
        }
    }
}

std::size_t MechanismUnderTest::message_index(std::size_t officer, const Message& m) const
{
    const auto& ms = messages_.at(officer);
    auto it = std::find(ms.begin(), ms.end(), m);
    if (it == ms.end())
        throw PreconditionError("message is not in the space of officer " + problem_.officer(officer).id.value);
    return static_cast<std::size_t>(it - ms.begin());
}

std::uint64_t MechanismUnderTest::linear(const std::vector<std::size_t>& digits) const
{
    std::uint64_t l = 0;
    for (std::size_t i = 0; i < n_; ++i)
        l += digits.at(i) * strides_[i];
    return l;
}

std::vector<std::size_t> MechanismUnderTest::digits(std::uint64_t l) const
{
    std::vector<std::size_t> d(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        d[i] = static_cast<std::size_t>(l / strides_[i]);
        l %= strides_[i];
    }
    return d;
}

Profile MechanismUnderTest::profile(const std::vector<std::size_t>& digits) const
{
    Profile p;
    for (std::size_t i = 0; i < n_; ++i)
        p.push_back(messages_[i].at(digits.at(i)));
    return p;
}

Allocation MechanismUnderTest::allocation(std::uint64_t l) const
{
    return Allocation(table_.begin() + static_cast<std::ptrdiff_t>(l * n_),
                      table_.begin() + static_cast<std::ptrdiff_t>((l + 1) * n_));
}

Allocation MechanismUnderTest::evaluate(const Profile& p) const
{
    if (p.size() != n_)
        throw PreconditionError("profile size does not match the mechanism");
    std::vector<std::size_t> d;
    for (std::size_t i = 0; i < n_; ++i)
        d.push_back(message_index(i, p[i]));
    return allocation(linear(d));
}

const char* to_string(Property p)
{
    switch (p) {
    case Property::StrategyProof:
        return "strategy-proofness";
    case Property::Expressiveness:
        return "expressiveness";
    case Property::Availability:
        return "availability";
    case Property::WeakAvailability:
        return "weak availability";
    case Property::Coherence:
        return "coherence";
    }
    return "?";
}

namespace {

// Linear indices of every profile whose digit for `officer` is zero.
std::vector<std::uint64_t> opponent_bases(const MechanismUnderTest& mech, std::size_t officer)
{
    std::vector<std::uint64_t> out;
    const std::uint64_t block = mech.stride(officer) * mech.messages(officer).size();
    for (std::uint64_t hi = 0; hi < mech.profile_count(); hi += block)
        for (std::uint64_t lo = 0; lo < mech.stride(officer); ++lo)
            out.push_back(hi + lo);
    return out;
}

bool available_to(const MechanismUnderTest& mech, std::uint64_t profile, std::size_t officer, StateIndex s)
{
    std::size_t held = 0;
    for (std::size_t j = 0; j < officer; ++j)
        if (mech.outcome(profile, j) == s)
            ++held;
    return held < mech.problem().capacity(s);
}

DeviationWitness make_witness(const MechanismUnderTest& mech, std::size_t i, std::uint64_t base, std::size_t mi,
                              std::size_t di, std::optional<PreferenceOrder> truth)
{
    const std::uint64_t orig = base + mi * mech.stride(i);
    const std::uint64_t dev = base + di * mech.stride(i);
    DeviationWitness w;
    w.officer = i;
    w.profile = mech.profile(mech.digits(orig));
    w.deviation = mech.messages(i)[di];
    w.original = mech.outcome(orig, i);
    w.deviated = mech.outcome(dev, i);
    w.truth = std::move(truth);
    return w;
}

// Scans officer -> true preference -> truthful message -> deviation -> opponents.
template <class Violates>
std::optional<DeviationWitness> scan_truthful(const MechanismUnderTest& mech, Violates&& violates)
{
    const auto prefs = all_preferences(mech.problem().state_count());
    for (std::size_t i = 0; i < mech.problem().officer_count(); ++i) {
        const auto& ms = mech.messages(i);
        const auto bases = opponent_bases(mech, i);
        for (const auto& truth : prefs) {
            for (std::size_t mi = 0; mi < ms.size(); ++mi) {
                if (!is_truthful(ms[mi], truth))
                    continue;
                for (std::size_t di = 0; di < ms.size(); ++di) {
                    if (di == mi)
                        continue;
                    for (std::uint64_t base : bases) {
                        const std::uint64_t orig = base + mi * mech.stride(i);
                        const std::uint64_t dev = base + di * mech.stride(i);
                        if (violates(truth, i, orig, dev))
                            return make_witness(mech, i, base, mi, di, truth);
                    }
                }
            }
        }
    }
    return std::nullopt;
}

// Scans officer -> own message -> deviation -> opponents.
template <class Violates>
std::optional<DeviationWitness> scan_all(const MechanismUnderTest& mech, Violates&& violates)
{
    for (std::size_t i = 0; i < mech.problem().officer_count(); ++i) {
        const auto& ms = mech.messages(i);
        const auto bases = opponent_bases(mech, i);
        for (std::size_t mi = 0; mi < ms.size(); ++mi)
            for (std::size_t di = 0; di < ms.size(); ++di) {
                if (di == mi)
                    continue;
                for (std::uint64_t base : bases) {
                    const std::uint64_t orig = base + mi * mech.stride(i);
                    const std::uint64_t dev = base + di * mech.stride(i);
                    if (violates(ms[mi], i, orig, dev))
                        return make_witness(mech, i, base, mi, di, std::nullopt);
                }
            }
    }
    return std::nullopt;
}

} // namespace

std::optional<DeviationWitness> check_strategy_proof(const MechanismUnderTest& mech)
{
    return scan_truthful(mech, [&](const PreferenceOrder& truth, std::size_t i, std::uint64_t orig, std::uint64_t dev) {
        return truth.prefers(mech.outcome(dev, i), mech.outcome(orig, i));
    });
}

std::optional<DeviationWitness> check_expressiveness(const MechanismUnderTest& mech)
{
    return scan_all(mech, [&](const Message& m, std::size_t i, std::uint64_t orig, std::uint64_t dev) {
        return !comparable(mech.outcome(dev, i), mech.outcome(orig, i), m);
    });
}

std::optional<DeviationWitness> check_availability(const MechanismUnderTest& mech)
{
    return scan_all(mech, [&](const Message&, std::size_t i, std::uint64_t orig, std::uint64_t dev) {
        return !available_to(mech, orig, i, mech.outcome(dev, i));
    });
}

std::optional<DeviationWitness> check_weak_availability(const MechanismUnderTest& mech)
{
    return scan_truthful(mech, [&](const PreferenceOrder& truth, std::size_t i, std::uint64_t orig, std::uint64_t dev) {
        const StateIndex d = mech.outcome(dev, i);
        return truth.weakly_prefers(d, mech.outcome(orig, i)) && !available_to(mech, orig, i, d);
    });
}

std::optional<DeviationWitness> check_coherence(const MechanismUnderTest& mech)
{
    return scan_all(mech, [&](const Message& m, std::size_t i, std::uint64_t orig, std::uint64_t dev) {
        const StateIndex o = mech.outcome(orig, i);
        const StateIndex d = mech.outcome(dev, i);
        return d != o && contains(maximal_elements(bit(o) | bit(d), m), d);
    });
}

std::optional<DeviationWitness> check_property(const MechanismUnderTest& mech, Property p)
{
    switch (p) {
    case Property::StrategyProof:
        return check_strategy_proof(mech);
    case Property::Expressiveness:
        return check_expressiveness(mech);
    case Property::Availability:
        return check_availability(mech);
    case Property::WeakAvailability:
        return check_weak_availability(mech);
    case Property::Coherence:
        return check_coherence(mech);
    }
    return std::nullopt;
}

bool witness_replays(const MechanismUnderTest& mech, Property p, const DeviationWitness& w)
{
    const std::size_t i = w.officer;
    if (i >= mech.problem().officer_count() || w.profile.size() != mech.problem().officer_count())
        return false;
    for (std::size_t j = 0; j < w.profile.size(); ++j)
        if (!mech.space(j).contains(w.profile[j]))
            return false;
    if (!mech.space(i).contains(w.deviation))
        return false;
    Profile deviated = w.profile;
    deviated[i] = w.deviation;
    const Allocation a = mech.rerun(w.profile);
    const Allocation b = mech.rerun(deviated);
    const StateIndex o = a.at(i);
    const StateIndex d = b.at(i);
    if (o != w.original || d != w.deviated)
        return false;
    const Message& mi = w.profile[i];
    auto available = [&] {
        std::size_t held = 0;
        for (std::size_t j = 0; j < i; ++j)
            if (a[j] == d)
                ++held;
        return held < mech.problem().capacity(d);
    };
    switch (p) {
    case Property::StrategyProof:
        return w.truth && is_truthful(mi, *w.truth) && w.truth->prefers(d, o);
    case Property::Expressiveness:
        return !comparable(d, o, mi);
    case Property::Availability:
        return !available();
    case Property::WeakAvailability:
        return w.truth && is_truthful(mi, *w.truth) && w.truth->weakly_prefers(d, o) && !available();
    case Property::Coherence:
        return d != o && !mi.prefers(o, d);
    }
    return false;
}

std::string describe(const MechanismUnderTest& mech, const DeviationWitness& w)
{
    const auto& u = mech.problem().states();
    std::string out = "officer " + mech.problem().officer(w.officer).id.value;
    if (w.truth) {
        out += " with preference ";
        for (std::size_t r = 0; r < w.truth->size(); ++r)
            out += (r ? ">" : "") + u.id(w.truth->ranking()[r]).value;
    }
    out += " sends " + format_message(w.deviation, u) + " instead of " + format_message(w.profile[w.officer], u) +
           " and moves from " + u.id(w.original).value + " to " + u.id(w.deviated).value;
    return out;
}

std::optional<StepwiseWitness> check_dynamic_stepwise_dominance(const Problem& problem, const UpperBoundSystem& h,
                                                                const std::vector<PreferenceOrder>& prefs,
                                                                const EnumerationCap& cap)
{
    if (prefs.size() != problem.officer_count())
        throw PreconditionError("one preference per officer is required");
    DynamicModularSession session(problem, h);
    while (!session.complete()) {
        const Menu menu = session.menu();
        const auto truthful = prefs[menu.officer].restricted(menu.z1);
        if (truthful.empty())
            throw NoAdmissibleZone("officer " + problem.officer(menu.officer).id.value + " faces an empty menu",
                                   menu.officer);
        const std::uint64_t count = factorial(truthful.size());
        if (count > cap.max_messages)
            throw CapExceeded("menu rankings too many to enumerate", count, cap.max_messages);
        std::optional<StepwiseWitness> found;
        for_each_permutation(truthful, [&](const std::vector<StateIndex>& ranking) {
            // the pick under a ranking is its first entry; the menu cannot change at this step
            DynamicModularSession trial = session;
            StateIndex got = trial.submit(ranking);
            if (prefs[menu.officer].prefers(got, truthful.front())) {
                found = StepwiseWitness{menu.officer, ranking, truthful.front(), got};
                return false;
            }
            return true;
        });
        if (found)
            return found;
        session.submit(truthful);
    }
    return std::nullopt;
}

} // namespace vfair
