#include "csi/chains.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "csi/errors.hpp"

namespace csi::chains {

std::string_view stop_class_name(StopClass c) noexcept {
    switch (c) {
        case StopClass::ProactiveStop: return "proactive_stop";
        case StopClass::ReactiveStop: return "reactive_stop";
        case StopClass::Compromise: return "compromise";
        case StopClass::NoContact: return "no_contact";
    }
    return "?";
}

Intrusion summarize(std::string id, std::string target, std::vector<Event> events) {
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return std::tie(a.at, a.id) < std::tie(b.at, b.id); });

    Intrusion out;
    out.id = std::move(id);
    out.target = std::move(target);

    for (const auto& e : events) {
        if (!e.indicators.empty()) out.phase_indicators[e.phase].insert(e.indicators.begin(), e.indicators.end());
        if (e.outcome == EventOutcome::Succeeded) out.deepest_completed = std::max(out.deepest_completed, ordinal(e.phase));
    }
    // the stop is the lowest blocked phase the adversary had not yet completed
    for (const auto& e : events) {
        if (e.outcome != EventOutcome::Blocked || ordinal(e.phase) <= out.deepest_completed) continue;
        if (!out.stopped_at || ordinal(e.phase) < ordinal(*out.stopped_at)) out.stopped_at = e.phase;
    }
    out.events = std::move(events);
    return out;
}

std::vector<Intrusion> reconstruct_intrusions(const std::vector<Event>& events, Timestamp gap) {
    if (gap <= 0) throw InvalidArgument("gap must be positive");

    std::map<std::string, std::vector<const Event*>> by_target;
    for (const auto& e : events) by_target[e.target].push_back(&e);

    std::vector<Intrusion> out;
    for (auto& [target, stream] : by_target) {
        std::sort(stream.begin(), stream.end(),
                  [](const Event* a, const Event* b) { return std::tie(a->at, a->id) < std::tie(b->at, b->id); });
        std::size_t index = 0;
        std::vector<Event> group;
        auto flush = [&] {
            out.push_back(summarize(target + "#" + std::to_string(index++), target, std::move(group)));
            group.clear();
        };
        for (const Event* e : stream) {
            if (!group.empty() && e->at - group.back().at > gap) flush();
            group.push_back(*e);
        }
        if (!group.empty()) flush();
    }

    std::sort(out.begin(), out.end(), [](const Intrusion& a, const Intrusion& b) {
        return std::make_tuple(a.first_at(), std::cref(a.target), std::cref(a.id)) <
               std::make_tuple(b.first_at(), std::cref(b.target), std::cref(b.id));
    });
    return out;
}

StopClass classify_stop(const Intrusion& intrusion) {
    if (intrusion.stopped_at) {
        return is_proactive_phase(*intrusion.stopped_at) ? StopClass::ProactiveStop : StopClass::ReactiveStop;
    }
    if (intrusion.deepest_completed == static_cast<int>(kPhaseCount)) return StopClass::Compromise;
    return StopClass::NoContact;
}

}  // namespace csi::chains
