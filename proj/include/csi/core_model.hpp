#pragma once

// Shared domain types: kill-chain phases, defensive actions, indicators with
// revision history, events, intrusions, campaigns, capabilities and loop delays.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csi {

using Timestamp = std::int64_t;  // seconds since epoch
using Tick = std::int64_t;       // unitless simulation time

// ---------------------------------------------------------------------------
// Kill chain
// ---------------------------------------------------------------------------

enum class KillChainPhase : std::uint8_t {
    CampaignAnalysis = 1,
    Weaponization = 2,
    TargetValidation = 3,
    Delivery = 4,
    Exploitation = 5,
    Installation = 6,
    CommandAndControl = 7,
    ActionsOnObjectives = 8,
};

inline constexpr std::size_t kPhaseCount = 8;

inline constexpr std::array<KillChainPhase, kPhaseCount> kAllPhases = {
    KillChainPhase::CampaignAnalysis, KillChainPhase::Weaponization,
    KillChainPhase::TargetValidation, KillChainPhase::Delivery,
    KillChainPhase::Exploitation,     KillChainPhase::Installation,
    KillChainPhase::CommandAndControl, KillChainPhase::ActionsOnObjectives,
};

constexpr int ordinal(KillChainPhase p) noexcept { return static_cast<int>(p); }

/// 0-based slot, handy for fixed-size per-phase arrays.
constexpr std::size_t phase_index(KillChainPhase p) noexcept {
    return static_cast<std::size_t>(p) - 1;
}

/// Throws InvalidArgument outside 1..8.
KillChainPhase phase_from_ordinal(int ordinal);

/// Wire name used in event files: "delivery", "c2", "actions", ...
std::string_view phase_name(KillChainPhase p) noexcept;
/// Human label: "Delivery", "CommandAndControl", ...
std::string_view phase_label(KillChainPhase p) noexcept;
std::optional<KillChainPhase> parse_phase(std::string_view name) noexcept;

/// Phases before Exploitation are where a defender can still act ahead of
/// the adversary; from Exploitation onward defense is incident response.
constexpr bool is_proactive_phase(KillChainPhase p) noexcept { return ordinal(p) <= 4; }

// ---------------------------------------------------------------------------
// Defensive actions and actor classes
// ---------------------------------------------------------------------------

enum class DefensiveAction : std::uint8_t { Detect, Deny, Disrupt, Degrade, Deceive, Destroy };

inline constexpr std::size_t kActionCount = 6;

inline constexpr std::array<DefensiveAction, kActionCount> kAllActions = {
    DefensiveAction::Detect,  DefensiveAction::Deny,    DefensiveAction::Disrupt,
    DefensiveAction::Degrade, DefensiveAction::Deceive, DefensiveAction::Destroy,
};

constexpr std::size_t action_index(DefensiveAction a) noexcept { return static_cast<std::size_t>(a); }
std::string_view action_name(DefensiveAction a) noexcept;
std::optional<DefensiveAction> parse_action(std::string_view name) noexcept;

/// Detect is observation only; every other action changes the adversary's run.
constexpr bool has_kinetic_effect(DefensiveAction a) noexcept { return a != DefensiveAction::Detect; }

enum class ActorClass : std::uint8_t {
    NationState,
    TransnationalGroup,
    SmallGroupOrIndividual,
    Insider,
    Unattributed,
};

std::string_view actor_name(ActorClass a) noexcept;
std::optional<ActorClass> parse_actor(std::string_view name) noexcept;

// ---------------------------------------------------------------------------
// Indicators
// ---------------------------------------------------------------------------

enum class ValidationStatus : std::uint8_t { Unvalidated, Validated, Refuted };

std::string_view status_name(ValidationStatus s) noexcept;
std::optional<ValidationStatus> parse_status(std::string_view name) noexcept;

struct IndicatorRevision {
    Timestamp at = 0;
    ValidationStatus status = ValidationStatus::Unvalidated;
    std::string source;
    double confidence = 0.0;
    std::string note;

    friend bool operator==(const IndicatorRevision&, const IndicatorRevision&) = default;
};

/// Throws InvalidArgument if at < 0 or confidence is outside [0,1].
void check_revision(const IndicatorRevision& rev);

enum class IndicatorKind : std::uint8_t { Hash, Domain, Ip, Email, Mutex, Ttp, Other };

std::string_view kind_name(IndicatorKind k) noexcept;
std::optional<IndicatorKind> parse_kind(std::string_view name) noexcept;

/// Lowercases domain, ip and email values; other kinds are kept verbatim.
std::string normalize_value(IndicatorKind kind, std::string_view value);

/// "kind:value" with the value normalized.
std::string make_indicator_id(IndicatorKind kind, std::string_view value);

struct IndicatorRef {
    IndicatorKind kind;
    std::string value;  // normalized
    std::string id() const { return make_indicator_id(kind, value); }
};

/// Parses "kind:value"; splits at the first ':' so ipv6 values survive.
/// Returns nullopt for an unknown kind or empty value.
std::optional<IndicatorRef> parse_indicator_ref(std::string_view text);

struct Indicator {
    std::string id;
    IndicatorKind kind = IndicatorKind::Other;
    std::string value;
    bool is_precursor = false;
    std::vector<IndicatorRevision> revisions;  // ascending by at, append-only

    friend bool operator==(const Indicator&, const Indicator&) = default;
};

/// Status of the latest revision with at <= t, or nullopt (Unknown) when the
/// indicator had no revision yet at t. Later revisions are never consulted.
std::optional<ValidationStatus> validation_status_at(const Indicator& indicator, Timestamp t);

// ---------------------------------------------------------------------------
// Events and intrusions
// ---------------------------------------------------------------------------

enum class EventOutcome : std::uint8_t { Attempted, Succeeded, Blocked };

std::string_view outcome_name(EventOutcome o) noexcept;
std::optional<EventOutcome> parse_outcome(std::string_view name) noexcept;

struct Event {
    std::string id;
    Timestamp at = 0;
    std::string target;
    std::string sensor;
    KillChainPhase phase = KillChainPhase::CampaignAnalysis;
    EventOutcome outcome = EventOutcome::Attempted;
    std::set<std::string> indicators;  // indicator ids
    std::set<std::string> tags;        // optional relevance tags

    friend bool operator==(const Event&, const Event&) = default;
};

using PhaseIndicatorMap = std::map<KillChainPhase, std::set<std::string>>;

struct Intrusion {
    std::string id;
    std::string target;
    std::vector<Event> events;  // ordered by at
    PhaseIndicatorMap phase_indicators;
    int deepest_completed = 0;  // 0 = no phase succeeded
    std::optional<KillChainPhase> stopped_at;

    Timestamp first_at() const { return events.empty() ? 0 : events.front().at; }
    Timestamp last_at() const { return events.empty() ? 0 : events.back().at; }
    /// Union of indicator ids across all phases.
    std::set<std::string> all_indicators() const;

    friend bool operator==(const Intrusion&, const Intrusion&) = default;
};

// ---------------------------------------------------------------------------
// Campaigns and capabilities
// ---------------------------------------------------------------------------

struct KeyIndicator {
    std::string id;
    double support = 0.0;

    friend bool operator==(const KeyIndicator&, const KeyIndicator&) = default;
};

struct Campaign {
    std::string id;
    std::set<std::string> members;  // intrusion ids
    double threshold = 0.0;
    std::vector<KeyIndicator> key_indicators;  // support desc, id asc
    std::pair<Timestamp, Timestamp> span{0, 0};
    ActorClass actor = ActorClass::Unattributed;

    friend bool operator==(const Campaign&, const Campaign&) = default;
};

struct PhaseAction {
    KillChainPhase phase;
    DefensiveAction action;

    friend auto operator<=>(const PhaseAction&, const PhaseAction&) = default;
};

std::string phase_action_name(PhaseAction pa);
std::optional<PhaseAction> parse_phase_action(std::string_view text) noexcept;

struct Capability {
    std::string id;
    std::string name;
    std::set<PhaseAction> coverage;
    double cost = 0.0;

    friend bool operator==(const Capability&, const Capability&) = default;
};

/// Throws InvalidArgument on empty coverage or negative cost.
void check_capability(const Capability& cap);

// ---------------------------------------------------------------------------
// Control-loop delays
// ---------------------------------------------------------------------------

struct LoopDelays {
    Tick dead_time = 0;
    double time_constant = 0.0;
    Tick info_delay = 0;
    Tick decision_time = 0;

    friend bool operator==(const LoopDelays&, const LoopDelays&) = default;
};

/// Throws InvalidArgument if any component is negative.
void check_delays(const LoopDelays& d);

}  // namespace csi
