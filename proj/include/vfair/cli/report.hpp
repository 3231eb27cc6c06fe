#pragma once

// JSON encodings of allocations, traces, witnesses and audit verdicts.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfair/axioms.hpp"
#include "vfair/cli/instance.hpp"

namespace vfair::cli {

using ojson = nlohmann::ordered_json;

ojson states_json(const Problem& problem, StateMask m);
/// {"i1": "s1", ...} in priority order.
ojson allocation_json(const Problem& problem, const Allocation& a);
ojson message_json(const Problem& problem, const Message& m);
ojson profile_json(const Problem& problem, const Profile& p);
ojson bound_json(const Problem& problem, const UpperBoundSystem& h, std::size_t index);
ojson trace_json(const Problem& problem, const UpperBoundSystem& h, const RunTrace& trace);
ojson witness_json(const Problem& problem, const FairnessWitness& w);
ojson deviation_json(const MechanismUnderTest& mech, const DeviationWitness& w);

enum class AuditKind { Fairness, Bounds, Cpe, Pareto, VisibleEfficiency, Reconstruct };
const char* to_string(AuditKind k);
/// Throws ParseError on an unknown name.
AuditKind parse_audit(const std::string& name);
std::vector<AuditKind> parse_audit_list(const std::string& csv);

struct AuditVerdict
{
    AuditKind kind;
    Verdict verdict = Verdict::Pass;
    ojson detail;  // witness or note
};

struct AuditInputs
{
    const Problem& problem;
    const UpperBoundSystem& bounds;
    const Allocation& allocation;
    const Profile& messages;
    const std::optional<std::vector<PreferenceOrder>>& preferences;
    std::uint64_t budget = kDefaultDominationBudget;
};

/// Efficiency audits without true preferences come back Inconclusive.
AuditVerdict run_audit(AuditKind kind, const AuditInputs& in);

struct AuditReport
{
    std::string instance;
    std::string mechanism;
    Allocation allocation;
    Profile messages;
    RunTrace trace;
    std::vector<AuditVerdict> audits;
    std::optional<double> elapsed_ms;
};

ojson report_json(const Problem& problem, const UpperBoundSystem& h, const AuditReport& r);

/// Worst verdict: any Fail beats Inconclusive beats Pass.
Verdict overall(const std::vector<AuditVerdict>& audits);
int exit_code(Verdict v);

} // namespace vfair::cli
