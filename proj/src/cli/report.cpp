#include "vfair/cli/report.hpp"

#include <sstream>

namespace vfair::cli {

ojson states_json(const Problem& problem, StateMask m)
{
    ojson out = ojson::array();
    for (StateIndex s : problem.states().sorted(m))
        out.push_back(problem.states().id(s).value);
    return out;
}

ojson allocation_json(const Problem& problem, const Allocation& a)
{
    ojson out = ojson::object();
    for (std::size_t k = 0; k < a.size(); ++k)
        out[problem.officer(k).id.value] = a[k] == kUnassigned ? ojson(nullptr) : ojson(problem.states().id(a[k]).value);
    return out;
}

ojson message_json(const Problem& problem, const Message& m)
{
    return format_message(m, problem.states());
}

ojson profile_json(const Problem& problem, const Profile& p)
{
    ojson out = ojson::object();
    for (std::size_t k = 0; k < p.size(); ++k)
        out[problem.officer(k).id.value] = message_json(problem, p[k]);
    return out;
}

ojson bound_json(const Problem& problem, const UpperBoundSystem& h, std::size_t index)
{
    const UpperBound& b = h.bound(index);
    ojson types = ojson::array();
    for (TypeIndex t = 0; t < problem.type_count(); ++t)
        if (contains(b.types, t))
            types.push_back(problem.type(t).value);
    std::ostringstream d;
    d << "at most " << b.ceiling << " of {";
    for (std::size_t i = 0; i < types.size(); ++i)
        d << (i ? "," : "") << types[i].get<std::string>();
    d << "} in " << problem.states().format(b.states);
    return {{"index", index}, {"types", types}, {"states", states_json(problem, b.states)}, {"ceiling", b.ceiling},
            {"description", d.str()}};
}

ojson trace_json(const Problem& problem, const UpperBoundSystem& h, const RunTrace& trace)
{
    ojson out = ojson::array();
    for (const auto& st : trace.steps) {
        ojson j;
        j["officer"] = problem.officer(st.officer).id.value;
        j["available"] = states_json(problem, st.available);
        if (st.menu != 0 || st.rest != 0) {
            j["menu"] = states_json(problem, st.menu);
            j["rest"] = states_json(problem, st.rest);
        } else {
            j["maximal"] = states_json(problem, st.maximal);
        }
        if (st.zone && st.zone_states != 0)
            j["zone"] = states_json(problem, st.zone_states);
        j["assigned"] = problem.states().id(st.assigned).value;
        if (!h.empty()) {
            ojson b = ojson::array();
            for (std::size_t x : st.binding)
                b.push_back(bound_json(problem, h, x)["description"]);
            j["binding"] = b;
        }
        out.push_back(std::move(j));
    }
    return out;
}

ojson witness_json(const Problem& problem, const FairnessWitness& w)
{
    if (const auto* e = std::get_if<EnvyWitness>(&w))
        return {{"kind", "envy"}, {"officer", problem.officer(e->officer).id.value},
                {"other", problem.officer(e->other).id.value}, {"text", describe(problem, w)}};
    const auto& x = std::get<WasteWitness>(w);
    return {{"kind", "waste"}, {"officer", problem.officer(x.officer).id.value},
            {"state", problem.states().id(x.state).value}, {"text", describe(problem, w)}};
}

ojson deviation_json(const MechanismUnderTest& mech, const DeviationWitness& w)
{
    const Problem& pr = mech.problem();
    ojson j;
    j["officer"] = pr.officer(w.officer).id.value;
    if (w.truth) {
        ojson r = ojson::array();
        for (StateIndex s : w.truth->ranking())
            r.push_back(pr.states().id(s).value);
        j["truth"] = r;
    }
    j["profile"] = profile_json(pr, w.profile);
    j["deviation"] = message_json(pr, w.deviation);
    j["original"] = pr.states().id(w.original).value;
    j["deviated"] = pr.states().id(w.deviated).value;
    j["text"] = describe(mech, w);
    return j;
}

const char* to_string(AuditKind k)
{
    switch (k) {
    case AuditKind::Fairness: return "fairness";
    case AuditKind::Bounds: return "bounds";
    case AuditKind::Cpe: return "cpe";
    case AuditKind::Pareto: return "pareto";
    case AuditKind::VisibleEfficiency: return "visible-efficiency";
    case AuditKind::Reconstruct: return "reconstruct";
    }
    return "?";
}

AuditKind parse_audit(const std::string& name)
{
    for (auto k : {AuditKind::Fairness, AuditKind::Bounds, AuditKind::Cpe, AuditKind::Pareto,
                   AuditKind::VisibleEfficiency, AuditKind::Reconstruct})
        if (name == to_string(k))
            return k;
    throw ParseError("unknown audit '" + name + "'");
}

std::vector<AuditKind> parse_audit_list(const std::string& csv)
{
    std::vector<AuditKind> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(parse_audit(item));
    return out;
}

AuditVerdict run_audit(AuditKind kind, const AuditInputs& in)
{
    AuditVerdict v{kind, Verdict::Pass, ojson::object()};
    const Problem& pr = in.problem;
    auto efficiency = [&](const EfficiencyResult& r) {
        if (!r.efficient) {
            v.verdict = Verdict::Fail;
            v.detail = {{"dominated_by", allocation_json(pr, *r.dominated_by)}};
        }
    };
    auto need_prefs = [&] {
        if (!in.preferences) {
            v.verdict = Verdict::Inconclusive;
            v.detail = {{"note", "no true preferences in the instance"}};
            return false;
        }
        return true;
    };
    try {
        switch (kind) {
        case AuditKind::Fairness:
            if (auto w = visibly_unfair_witness(pr, in.allocation, in.messages)) {
                v.verdict = Verdict::Fail;
                v.detail = witness_json(pr, *w);
            }
            break;
        case AuditKind::Bounds: {
            auto r = respects_bounds(in.allocation, in.bounds, pr);
            if (!r.respected()) {
                v.verdict = Verdict::Fail;
                ojson viol = ojson::array();
                for (const auto& x : r.violations) {
                    ojson b = bound_json(pr, in.bounds, x.bound);
                    b["count"] = x.count;
                    viol.push_back(b);
                }
                v.detail = {{"violations", viol}};
            } else {
                ojson b = ojson::array();
                for (std::size_t x : binding_bounds(in.allocation, in.bounds, pr))
                    b.push_back(bound_json(pr, in.bounds, x));
                v.detail = {{"binding", b}};
            }
            break;
        }
        case AuditKind::Cpe:
            if (need_prefs()) {
                if (!respects_bounds(in.allocation, in.bounds, pr).respected()) {
                    v.verdict = Verdict::Fail;
                    v.detail = {{"note", "allocation violates the bounds"}};
                } else {
                    efficiency(constrained_pareto_efficient(pr, in.allocation, *in.preferences, in.bounds, in.budget));
                }
            }
            break;
        case AuditKind::Pareto:
            if (need_prefs())
                efficiency(pareto_efficient(pr, in.allocation, *in.preferences, in.budget));
            break;
        case AuditKind::VisibleEfficiency:
            efficiency(visibly_efficient(pr, in.allocation, in.messages, in.budget));
            break;
        case AuditKind::Reconstruct:
            if (!reconstruct_m_queue(pr, in.allocation, in.messages)) {
                v.verdict = Verdict::Fail;
                v.detail = {{"note", "some officer holds a state that is not maximal among those left to her"}};
            }
            break;
        }
    } catch (const CapExceeded& e) {
        v.verdict = Verdict::Inconclusive;
        v.detail = {{"note", e.what()}, {"count", e.count()}, {"cap", e.cap()}};
    }
    return v;
}

ojson report_json(const Problem& problem, const UpperBoundSystem& h, const AuditReport& r)
{
    ojson j;
    j["instance"] = r.instance;
    j["mechanism"] = r.mechanism;
    j["allocation"] = allocation_json(problem, r.allocation);
    j["messages"] = profile_json(problem, r.messages);
    ojson audits = ojson::array();
    for (const auto& a : r.audits)
        audits.push_back({{"audit", to_string(a.kind)}, {"verdict", to_string(a.verdict)}, {"detail", a.detail}});
    j["audits"] = audits;
    j["verdict"] = to_string(overall(r.audits));
    j["trace"] = trace_json(problem, h, r.trace);
    if (r.elapsed_ms)
        j["elapsed_ms"] = *r.elapsed_ms;
    return j;
}

Verdict overall(const std::vector<AuditVerdict>& audits)
{
    Verdict v = Verdict::Pass;
    for (const auto& a : audits) {
        if (a.verdict == Verdict::Fail)
            return Verdict::Fail;
        if (a.verdict == Verdict::Inconclusive)
            v = Verdict::Inconclusive;
    }
    return v;
}

int exit_code(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
    }
    return 3;
}

} // namespace vfair::cli
