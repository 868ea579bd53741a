#pragma once

// Effectiveness assessment: tactical rates over a set of intrusions and a
// two-window before/after comparison for operational trends.

#include <optional>
#include <span>
#include <string_view>

#include "csi/core_model.hpp"

namespace csi::assess {

struct TacticalMetrics {
    std::size_t n = 0;
    double proactive_stop_rate = 0.0;
    double reactive_stop_rate = 0.0;
    double compromise_rate = 0.0;
    double no_contact_rate = 0.0;
    double mean_deepest = 0.0;

    bool empty() const noexcept { return n == 0; }
};

/// All-zero metrics with n == 0 for an empty list.
TacticalMetrics tactical_assessment(std::span<const Intrusion> intrusions);

enum class Posture : std::uint8_t { ImprovingPosture, DegradingPosture, Stable };

std::string_view posture_name(Posture p) noexcept;

struct MetricDeltas {
    double proactive_stop_rate = 0.0;
    double reactive_stop_rate = 0.0;
    double compromise_rate = 0.0;
    double no_contact_rate = 0.0;
    double mean_deepest = 0.0;
};

struct OperationalAssessment {
    TacticalMetrics before;
    TacticalMetrics after;
    MetricDeltas deltas;  // after - before; all zero when either side is empty
    Posture posture = Posture::Stable;
    bool before_empty = false;
    bool after_empty = false;
};

/// Splits on the intrusion's first event time (< split_at goes before).
/// Improving: proactive rate up and compromise rate not up. Degrading: the
/// reverse. Otherwise, or when either window is empty, Stable.
OperationalAssessment operational_assessment(std::span<const Intrusion> intrusions, Timestamp split_at);

/// Rough return on investment: deployed capability cost per unit drop in
/// compromise rate. nullopt when the compromise rate did not drop.
std::optional<double> cost_per_avoided_compromise(const OperationalAssessment& a, double deployed_cost);

}  // namespace csi::assess
