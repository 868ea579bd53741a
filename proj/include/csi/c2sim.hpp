#pragma once

// Two-loop control simulation: an adversary advancing one kill-chain phase per
// decision cycle, and a defender reacting to each completed phase. Loop
// periods come from four delays (dead time, time constant, information delay,
// decision time); information interference stretches the adversary's loop.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csi/core_model.hpp"

namespace csi::c2sim {

struct LoopConfig {
    LoopDelays delays;
    std::string label;
};

struct Interference {
    Tick extra_info_delay = 0;
    double deception_probability = 0.0;
    std::uint64_t seed = 0;
};

/// Throws InvalidArgument on out-of-range fields.
void check_interference(const Interference& i);

enum class Actor : std::uint8_t { Adversary, Defender };

struct TimelineEntry {
    Tick tick = 0;
    Actor actor = Actor::Adversary;
    std::string description;

    friend bool operator==(const TimelineEntry&, const TimelineEntry&) = default;
};

struct SimResult {
    int deepest_phase = 0;
    std::optional<KillChainPhase> stopped_at;
    std::vector<TimelineEntry> timeline;  // non-decreasing ticks
    Tick adversary_period = 0;
    Tick defender_period = 0;
    double posture_ratio = 0.0;  // adversary / defender period; +inf for an instant defender
    bool reactive = false;       // posture_ratio > 1

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Ticks for a first-order lag with time constant tau to reach 95% of its
/// final value: the smallest n with 1 - exp(-n/tau) >= 0.95, 0 for tau == 0.
Tick effect_ticks(double time_constant);

/// info_delay + decision_time + dead_time + effect_ticks(time_constant).
Tick loop_period(const LoopDelays& delays);

/// Runs the two loops up to `horizon` ticks.
///
/// The adversary completes phase k at its k-th successful cycle end. Each
/// completion starts a defender cycle whose action lands P_d ticks later; it
/// only matters if it lands before the adversary's next cycle end:
///   Deny, Destroy     run ends, stopped at the next phase
///   Disrupt, Degrade  next cycle restarts from the landing tick
///   Deceive           next adversary cycle is wasted
///   Detect            logged only
/// Independently, each adversary cycle is wasted with deception_probability,
/// drawn from a seeded mt19937_64.
///
/// Throws DegenerateLoop if the adversary period is 0, InvalidArgument if
/// horizon <= 0 or a parameter is out of range.
SimResult simulate(const LoopConfig& adversary, const LoopConfig& defender, DefensiveAction defender_action,
                   const Interference& interference, Tick horizon);

struct Scenario {
    LoopConfig adversary;
    LoopConfig defender;
    DefensiveAction action = DefensiveAction::Detect;
    Interference interference;
    Tick horizon = 0;
};

/// One JSON object:
///   {"adversary": {label, dead_time, time_constant, info_delay, decision_time},
///    "defender": {...}, "action": "deny", "horizon": 100, "seed": 7,
///    "interference": {"extra_info_delay": 0, "deception_probability": 0, "seed": 7}}
/// "seed" may sit at top level or inside "interference". Throws ParseError.
Scenario parse_scenario(std::istream& in);

SimResult run(const Scenario& s);

nlohmann::json encode(const Scenario& s);
nlohmann::json encode(const SimResult& r);

/// Fixed-width tick/actor/description table.
void write_timeline_table(std::ostream& out, const SimResult& r);

}  // namespace csi::c2sim
