#include "csi/assess.hpp"

#include <vector>

#include "csi/chains.hpp"

namespace csi::assess {

std::string_view posture_name(Posture p) noexcept {
    switch (p) {
        case Posture::ImprovingPosture: return "improving";
        case Posture::DegradingPosture: return "degrading";
        case Posture::Stable: return "stable";
    }
    return "stable";
}

TacticalMetrics tactical_assessment(std::span<const Intrusion> intrusions) {
    TacticalMetrics m;
    m.n = intrusions.size();
    if (m.n == 0) return m;

    std::size_t proactive = 0, reactive = 0, compromise = 0, no_contact = 0;
    long long deepest_sum = 0;
    for (const auto& i : intrusions) {
        switch (chains::classify_stop(i)) {
            case chains::StopClass::ProactiveStop: ++proactive; break;
            case chains::StopClass::ReactiveStop: ++reactive; break;
            case chains::StopClass::Compromise: ++compromise; break;
            case chains::StopClass::NoContact: ++no_contact; break;
        }
        deepest_sum += i.deepest_completed;
    }
    const double n = static_cast<double>(m.n);
    m.proactive_stop_rate = static_cast<double>(proactive) / n;
    m.reactive_stop_rate = static_cast<double>(reactive) / n;
    m.compromise_rate = static_cast<double>(compromise) / n;
    m.no_contact_rate = static_cast<double>(no_contact) / n;
    m.mean_deepest = static_cast<double>(deepest_sum) / n;
    return m;
}

OperationalAssessment operational_assessment(std::span<const Intrusion> intrusions, Timestamp split_at) {
    std::vector<Intrusion> before, after;
    for (const auto& i : intrusions) (i.first_at() < split_at ? before : after).push_back(i);

    OperationalAssessment a;
    a.before = tactical_assessment(before);
    a.after = tactical_assessment(after);
    a.before_empty = a.before.empty();
    a.after_empty = a.after.empty();
    if (a.before_empty || a.after_empty) return a;

    a.deltas.proactive_stop_rate = a.after.proactive_stop_rate - a.before.proactive_stop_rate;
    a.deltas.reactive_stop_rate = a.after.reactive_stop_rate - a.before.reactive_stop_rate;
    a.deltas.compromise_rate = a.after.compromise_rate - a.before.compromise_rate;
    a.deltas.no_contact_rate = a.after.no_contact_rate - a.before.no_contact_rate;
    a.deltas.mean_deepest = a.after.mean_deepest - a.before.mean_deepest;

    if (a.deltas.proactive_stop_rate > 0.0 && a.deltas.compromise_rate <= 0.0) {
        a.posture = Posture::ImprovingPosture;
    } else if (a.deltas.proactive_stop_rate < 0.0 && a.deltas.compromise_rate >= 0.0) {
        a.posture = Posture::DegradingPosture;
    }
    return a;
}

std::optional<double> cost_per_avoided_compromise(const OperationalAssessment& a, double deployed_cost) {
    const double avoided = -a.deltas.compromise_rate;
    if (!(avoided > 0.0)) return std::nullopt;
    return deployed_cost / avoided;
}

}  // namespace csi::assess
