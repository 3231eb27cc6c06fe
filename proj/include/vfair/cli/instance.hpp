#pragma once

// JSON instance documents. Field names follow the document layout below; any
// field not listed is rejected.
//
//   name, description, mechanism           strings, optional
//   officers      [{id, type, priority}]   priority ranks 1..n, 1 is highest
//   types         [type]                   optional; defaults to first appearance
//   states        [{id, capacity}]
//   bounds        [{types, states, ceiling}]
//   message_spaces {default, types{}, officers{}}
//       space: {kind: complete|zonal|ranked_zonal|modular|explicit, zones?, messages?}
//   preferences   {officer: [state, ...]}  complete rankings, best first
//   messages      {officer: [[a, b], ...]} pairs, a reported above b
//   zone_rankings {types{}, officers{}}    each a list of zones, best first
//   state_order   [state, ...]             tie-break among maximal states
//   selector_rules [{officer, when{officer: message}, zone: state}]
//   outcome_table [{messages{officer: message}, allocation{officer: state}}]

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfair/constraints.hpp"
#include "vfair/mechanisms.hpp"
#include "vfair/message_spaces.hpp"
#include "vfair/problem.hpp"

namespace vfair::cli {

/// Malformed document: JSON syntax (with line and column) or schema.
class ParseError : public Error
{
public:
    using Error::Error;
};

/// For pp and rpp: officer picks the zone containing `zone_state` when every
/// listed officer sent exactly the listed message and that zone has room.
struct SelectorRule
{
    std::size_t officer = 0;
    std::vector<std::pair<std::size_t, Message>> when;
    StateIndex zone_state = 0;
};

struct OutcomeRow
{
    Profile messages;  // officers absent from the row send the empty message
    Allocation allocation;
};

struct Instance
{
    std::string name;
    std::string description;
    std::string mechanism;
    Problem problem;
    UpperBoundSystem bounds;
    std::vector<MessageSpaceSpec> spaces;  // per officer, priority order
    std::optional<std::vector<PreferenceOrder>> preferences;
    std::optional<Profile> messages;
    std::optional<ZoneRankings> zone_rankings;
    std::vector<StateIndex> state_order;
    std::vector<SelectorRule> selector_rules;
    std::vector<OutcomeRow> outcome_table;
    nlohmann::ordered_json source;
};

Instance parse_instance(const nlohmann::ordered_json& doc);
/// Throws ParseError with line and column on a syntax error.
Instance parse_instance_text(const std::string& text, const std::string& origin = "<input>");
Instance load_instance(const std::filesystem::path& path);

/// Directory of the shipped fixtures; overridable for tests and installs.
std::filesystem::path default_fixture_dir();
std::vector<std::string> fixture_names(const std::filesystem::path& dir);
/// `ref` is a path to a file, or a fixture name looked up in `dir`.
Instance resolve_instance(const std::string& ref, const std::filesystem::path& dir);

/// Messages an officer would send: the explicit profile if given, else the
/// truthful message in each officer's space. Throws PreconditionError when
/// neither is available.
Profile reported_profile(const Instance& inst);

/// Zone rankings for the modular engine, defaulting to partition order.
ZoneRankings exogenous_rankings(const Instance& inst);

/// Message parsing shared with the service: [[a, b], ...] over the problem's states.
Message parse_message(const nlohmann::ordered_json& j, const Problem& problem, const std::string& where);
/// A list of state ids, each naming a distinct state.
std::vector<StateIndex> parse_state_list(const nlohmann::ordered_json& j, const Problem& problem,
                                         const std::string& where);

} // namespace vfair::cli
