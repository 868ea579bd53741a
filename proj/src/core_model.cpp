#include "csi/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "csi/errors.hpp"

namespace csi {

namespace {

constexpr std::array<std::string_view, kPhaseCount> kPhaseNames = {
    "campaign_analysis", "weaponization", "target_validation", "delivery",
    "exploitation",      "installation",  "c2",                "actions",
};

constexpr std::array<std::string_view, kPhaseCount> kPhaseLabels = {
    "CampaignAnalysis", "Weaponization", "TargetValidation",  "Delivery",
    "Exploitation",     "Installation",  "CommandAndControl", "ActionsOnObjectives",
};

constexpr std::array<std::string_view, kActionCount> kActionNames = {
    "detect", "deny", "disrupt", "degrade", "deceive", "destroy",
};

constexpr std::array<std::string_view, 5> kActorNames = {
    "nation_state", "transnational_group", "small_group_or_individual", "insider", "unattributed",
};

constexpr std::array<std::string_view, 3> kStatusNames = {"unvalidated", "validated", "refuted"};

constexpr std::array<std::string_view, 7> kKindNames = {
    "hash", "domain", "ip", "email", "mutex", "ttp", "other",
};

constexpr std::array<std::string_view, 3> kOutcomeNames = {"attempted", "succeeded", "blocked"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view name) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == name) return static_cast<Enum>(i);
    }
    return std::nullopt;
}

}  // namespace

KillChainPhase phase_from_ordinal(int ord) {
    if (ord < 1 || ord > static_cast<int>(kPhaseCount)) {
        throw InvalidArgument("phase ordinal out of range 1..8: " + std::to_string(ord));
    }
    return static_cast<KillChainPhase>(ord);
}

std::string_view phase_name(KillChainPhase p) noexcept { return kPhaseNames[phase_index(p)]; }
std::string_view phase_label(KillChainPhase p) noexcept { return kPhaseLabels[phase_index(p)]; }

std::optional<KillChainPhase> parse_phase(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kPhaseCount; ++i) {
        if (kPhaseNames[i] == name) return kAllPhases[i];
    }
    return std::nullopt;
}

std::string_view action_name(DefensiveAction a) noexcept { return kActionNames[action_index(a)]; }
std::optional<DefensiveAction> parse_action(std::string_view name) noexcept {
    return lookup<DefensiveAction>(kActionNames, name);
}

std::string_view actor_name(ActorClass a) noexcept { return kActorNames[static_cast<std::size_t>(a)]; }
std::optional<ActorClass> parse_actor(std::string_view name) noexcept {
    return lookup<ActorClass>(kActorNames, name);
}

std::string_view status_name(ValidationStatus s) noexcept {
    return kStatusNames[static_cast<std::size_t>(s)];
}
std::optional<ValidationStatus> parse_status(std::string_view name) noexcept {
    return lookup<ValidationStatus>(kStatusNames, name);
}

std::string_view kind_name(IndicatorKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }
std::optional<IndicatorKind> parse_kind(std::string_view name) noexcept {
    return lookup<IndicatorKind>(kKindNames, name);
}

std::string_view outcome_name(EventOutcome o) noexcept {
    return kOutcomeNames[static_cast<std::size_t>(o)];
}
std::optional<EventOutcome> parse_outcome(std::string_view name) noexcept {
    return lookup<EventOutcome>(kOutcomeNames, name);
}

void check_revision(const IndicatorRevision& rev) {
    if (rev.at < 0) throw InvalidArgument("revision timestamp is negative");
    if (!(rev.confidence >= 0.0 && rev.confidence <= 1.0)) {
        throw InvalidArgument("revision confidence outside [0,1]");
    }
}

std::string normalize_value(IndicatorKind kind, std::string_view value) {
    std::string out(value);
    switch (kind) {
        case IndicatorKind::Domain:
        case IndicatorKind::Ip:
        case IndicatorKind::Email:
            std::transform(out.begin(), out.end(), out.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            break;
        default:
            break;
    }
    return out;
}

std::string make_indicator_id(IndicatorKind kind, std::string_view value) {
    std::string id(kind_name(kind));
    id += ':';
    id += normalize_value(kind, value);
    return id;
}

std::optional<IndicatorRef> parse_indicator_ref(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const auto kind = parse_kind(text.substr(0, colon));
    const auto value = text.substr(colon + 1);
    if (!kind || value.empty()) return std::nullopt;
    return IndicatorRef{*kind, normalize_value(*kind, value)};
}

std::optional<ValidationStatus> validation_status_at(const Indicator& indicator, Timestamp t) {
    // revisions are ascending by at; the last one with at <= t wins
    const auto it = std::upper_bound(
        indicator.revisions.begin(), indicator.revisions.end(), t,
        [](Timestamp value, const IndicatorRevision& r) { return value < r.at; });
    if (it == indicator.revisions.begin()) return std::nullopt;
    return std::prev(it)->status;
}

std::set<std::string> Intrusion::all_indicators() const {
    std::set<std::string> out;
    for (const auto& [phase, ids] : phase_indicators) out.insert(ids.begin(), ids.end());
    return out;
}

std::string phase_action_name(PhaseAction pa) {
    std::string s(phase_name(pa.phase));
    s += ':';
    s += action_name(pa.action);
    return s;
}

std::optional<PhaseAction> parse_phase_action(std::string_view text) noexcept {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const auto phase = parse_phase(text.substr(0, colon));
    const auto action = parse_action(text.substr(colon + 1));
    if (!phase || !action) return std::nullopt;
    return PhaseAction{*phase, *action};
}

void check_capability(const Capability& cap) {
    if (cap.coverage.empty()) throw InvalidArgument("capability " + cap.id + " has empty coverage");
    if (!(cap.cost >= 0.0) || !std::isfinite(cap.cost)) {
        throw InvalidArgument("capability " + cap.id + " has negative cost");
    }
}

void check_delays(const LoopDelays& d) {
    if (d.dead_time < 0 || d.info_delay < 0 || d.decision_time < 0 || !(d.time_constant >= 0.0) ||
        !std::isfinite(d.time_constant)) {
        throw InvalidArgument("loop delays must be non-negative");
    }
}

}  // namespace csi
