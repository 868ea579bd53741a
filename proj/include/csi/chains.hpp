#pragma once

// Reconstruction of intrusions (one target's walk down the kill chain) and
// classification of where, relative to the chain break, the defense stopped it.

#include <string>
#include <string_view>
#include <vector>

#include "csi/core_model.hpp"

namespace csi::chains {

inline constexpr Timestamp kDefaultGap = 86400;

enum class StopClass : std::uint8_t { ProactiveStop, ReactiveStop, Compromise, NoContact };

std::string_view stop_class_name(StopClass c) noexcept;

/// Builds an intrusion from already grouped events: sorts them by (at, id) and
/// derives phase_indicators, deepest_completed and stopped_at.
Intrusion summarize(std::string id, std::string target, std::vector<Event> events);

/// Groups events by target, splits each target's time-sorted stream wherever
/// two consecutive events are more than `gap` seconds apart, and returns the
/// groups sorted by (first event time, target). Ids are "<target>#<n>" with n
/// counting from 0 per target. Throws InvalidArgument if gap <= 0.
std::vector<Intrusion> reconstruct_intrusions(const std::vector<Event>& events, Timestamp gap = kDefaultGap);

/// Total classification:
///   stopped_at before Exploitation  -> ProactiveStop
///   stopped_at from Exploitation on -> ReactiveStop
///   reached ActionsOnObjectives     -> Compromise
///   anything else                   -> NoContact
StopClass classify_stop(const Intrusion& intrusion);

}  // namespace csi::chains
