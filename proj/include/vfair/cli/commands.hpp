#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vfair/cli/instance.hpp"
#include "vfair/cli/report.hpp"

namespace vfair::cli {

enum class MechanismKind { Sd, MQueue, Pp, Rpp, Modular, DynamicModular, Table };
const char* to_string(MechanismKind k);
/// Throws ParseError on an unknown name.
MechanismKind parse_mechanism(const std::string& name);
/// The --mechanism flag if given, else the instance's own mechanism field.
MechanismKind choose_mechanism(const Instance& inst, const std::optional<std::string>& flag);

/// Outcome of a message-driven engine for one profile. Not available for the
/// dynamic mechanism, which elicits rankings instead of messages.
MechanismUnderTest::Outcome outcome_function(const Instance& inst, MechanismKind kind);
RunResult run_engine(const Instance& inst, MechanismKind kind, const Profile& profile);

/// Rankings for the dynamic mechanism from a JSON file {officer: [state, ...]};
/// each list is restricted to the presented menu.
RankingProvider file_provider(const Instance& inst, const std::filesystem::path& path);

/// Drives a session from a terminal: prints each menu and reads a ranking line.
RunResult prompt_run(const Problem& problem, const UpperBoundSystem& h, std::istream& in, std::ostream& out);

struct RunOptions
{
    std::optional<std::string> mechanism;
    std::optional<std::vector<AuditKind>> audits;
    std::string provider = "truth";
    std::optional<std::filesystem::path> provider_file;
    std::uint64_t budget = kDefaultDominationBudget;
    bool timing = false;
    std::istream* in = nullptr;
    std::ostream* out = nullptr;
};

/// Audits default to fairness and bounds, plus cpe when true preferences are known.
std::vector<AuditKind> default_audits(const Instance& inst);

AuditReport run_command(const Instance& inst, const RunOptions& options);

struct CheckOptions
{
    std::string check;
    std::optional<std::string> mechanism;
    std::uint64_t budget = 10'000'000;
    bool timing = false;
};

struct CheckResult
{
    Verdict verdict = Verdict::Pass;
    ojson report;
};

/// sp, coherence, expressiveness, availability, weak-availability, solvency,
/// richness, fairness-sweep. Caps exceeded come back Inconclusive.
CheckResult check_command(const Instance& inst, const CheckOptions& options);

ojson fixtures_list(const std::filesystem::path& dir);

} // namespace vfair::cli
