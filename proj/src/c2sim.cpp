#include "csi/c2sim.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <random>

#include "csi/errors.hpp"
#include "csi/json_codec.hpp"

namespace csi::c2sim {

namespace {

constexpr double kSettleFraction = 0.95;

bool settled(Tick n, double tau) { return 1.0 - std::exp(-static_cast<double>(n) / tau) >= kSettleFraction; }

std::string phase_text(int ord) {
    const auto p = phase_from_ordinal(ord);
    return "phase " + std::to_string(ord) + " (" + std::string(phase_name(p)) + ")";
}

// Uniform [0,1) from the top 53 bits; mt19937_64 output is fixed by the
// standard, so runs agree across standard library implementations.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

LoopConfig decode_loop(const json_codec::json& j) {
    LoopConfig c;
    c.delays = json_codec::decode_delays(j);
    c.label = j.value("label", std::string{});
    return c;
}

}  // namespace

void check_interference(const Interference& i) {
    if (i.extra_info_delay < 0) throw InvalidArgument("extra_info_delay must be non-negative");
    if (!(i.deception_probability >= 0.0 && i.deception_probability <= 1.0)) {
        throw InvalidArgument("deception_probability must lie in [0,1]");
    }
}

Tick effect_ticks(double time_constant) {
    if (!(time_constant >= 0.0) || !std::isfinite(time_constant)) {
        throw InvalidArgument("time constant must be finite and non-negative");
    }
    if (time_constant == 0.0) return 0;
    // closed form ceil(tau * ln 20), nudged so the settling predicate holds exactly
    Tick n = static_cast<Tick>(std::ceil(time_constant * std::log(20.0)));
    while (n > 0 && settled(n - 1, time_constant)) --n;
    while (!settled(n, time_constant)) ++n;
    return n;
}

Tick loop_period(const LoopDelays& delays) {
    check_delays(delays);
    return delays.info_delay + delays.decision_time + delays.dead_time + effect_ticks(delays.time_constant);
}

SimResult simulate(const LoopConfig& adversary, const LoopConfig& defender, DefensiveAction defender_action,
                   const Interference& interference, Tick horizon) {
    if (horizon <= 0) throw InvalidArgument("horizon must be positive");
    check_interference(interference);

    LoopDelays adv = adversary.delays;
    adv.info_delay += interference.extra_info_delay;

    SimResult r;
    r.adversary_period = loop_period(adv);
    r.defender_period = loop_period(defender.delays);
    if (r.adversary_period == 0) throw DegenerateLoop();
    r.posture_ratio = r.defender_period == 0
                          ? std::numeric_limits<double>::infinity()
                          : static_cast<double>(r.adversary_period) / static_cast<double>(r.defender_period);
    r.reactive = r.posture_ratio > 1.0;

    const Tick pa = r.adversary_period;
    const Tick pd = r.defender_period;
    const std::string action(action_name(defender_action));
    std::mt19937_64 rng(interference.seed);
    bool deceived = false;

    auto log = [&](Tick t, Actor who, std::string what) { r.timeline.push_back({t, who, std::move(what)}); };

    for (Tick cycle_end = pa; cycle_end <= horizon;) {
        const double u = unit_draw(rng);  // one draw per cycle keeps the sequence aligned
        if (deceived || u < interference.deception_probability) {
            log(cycle_end, Actor::Adversary,
                std::string(deceived ? "cycle wasted by deception" : "cycle wasted by interference") + ", repeats " +
                    phase_text(r.deepest_phase + 1));
            deceived = false;
            cycle_end += pa;
            continue;
        }

        ++r.deepest_phase;
        log(cycle_end, Actor::Adversary, "completed " + phase_text(r.deepest_phase));
        if (r.deepest_phase == static_cast<int>(kPhaseCount)) break;

        Tick next = cycle_end + pa;
        const Tick lands = cycle_end + pd;
        if (lands < next && lands <= horizon) {
            switch (defender_action) {
                case DefensiveAction::Deny:
                case DefensiveAction::Destroy:
                    r.stopped_at = phase_from_ordinal(r.deepest_phase + 1);
                    log(lands, Actor::Defender, action + " lands, run stopped before " + phase_text(r.deepest_phase + 1));
                    return r;
                case DefensiveAction::Disrupt:
                case DefensiveAction::Degrade:
                    next = lands + pa;
                    log(lands, Actor::Defender, action + " lands, adversary cycle restarts");
                    break;
                case DefensiveAction::Deceive:
                    deceived = true;
                    log(lands, Actor::Defender, action + " lands, next adversary cycle will be wasted");
                    break;
                case DefensiveAction::Detect:
                    log(lands, Actor::Defender, "detect: observed " + phase_text(r.deepest_phase));
                    break;
            }
        }
        cycle_end = next;
    }
    return r;
}

Scenario parse_scenario(std::istream& in) {
    json_codec::json j;
    try {
        j = json_codec::json::parse(in);
    } catch (const json_codec::json::parse_error& ex) {
        throw ParseError(1, std::string("malformed JSON: ") + ex.what());
    }
    try {
        Scenario s;
        s.adversary = decode_loop(json_codec::require(j, "adversary"));
        s.defender = decode_loop(json_codec::require(j, "defender"));
        const auto action = json_codec::require_string(j, "action");
        const auto a = parse_action(action);
        if (!a) throw InvalidArgument("unknown action '" + action + "'");
        s.action = *a;
        s.horizon = json_codec::require_int(j, "horizon");
        if (s.horizon <= 0) throw InvalidArgument("horizon must be positive");
        if (j.contains("interference")) {
            const auto& ij = j["interference"];
            s.interference.extra_info_delay = ij.value("extra_info_delay", Tick{0});
            s.interference.deception_probability = ij.value("deception_probability", 0.0);
            s.interference.seed = ij.value("seed", std::uint64_t{0});
        }
        if (j.contains("seed")) s.interference.seed = j["seed"].get<std::uint64_t>();
        check_interference(s.interference);
        return s;
    } catch (const InvalidArgument& ex) {
        throw ParseError(1, ex.what());
    } catch (const json_codec::json::exception& ex) {
        throw ParseError(1, ex.what());
    }
}

SimResult run(const Scenario& s) { return simulate(s.adversary, s.defender, s.action, s.interference, s.horizon); }

nlohmann::json encode(const Scenario& s) {
    auto loop = [](const LoopConfig& c) {
        auto j = json_codec::encode(c.delays);
        j["label"] = c.label;
        return j;
    };
    return nlohmann::json{{"adversary", loop(s.adversary)},
                          {"defender", loop(s.defender)},
                          {"action", std::string(action_name(s.action))},
                          {"horizon", s.horizon},
                          {"interference",
                           {{"extra_info_delay", s.interference.extra_info_delay},
                            {"deception_probability", s.interference.deception_probability},
                            {"seed", s.interference.seed}}}};
}

nlohmann::json encode(const SimResult& r) {
    nlohmann::json timeline = nlohmann::json::array();
    for (const auto& e : r.timeline) {
        timeline.push_back({{"tick", e.tick},
                            {"actor", e.actor == Actor::Adversary ? "adversary" : "defender"},
                            {"event", e.description}});
    }
    return nlohmann::json{
        {"deepest_phase", r.deepest_phase},
        {"stopped_at", r.stopped_at ? nlohmann::json(std::string(phase_name(*r.stopped_at))) : nlohmann::json(nullptr)},
        {"adversary_period", r.adversary_period},
        {"defender_period", r.defender_period},
        {"posture_ratio", std::isfinite(r.posture_ratio) ? nlohmann::json(r.posture_ratio) : nlohmann::json(nullptr)},
        {"reactive", r.reactive},
        {"timeline", timeline}};
}

void write_timeline_table(std::ostream& out, const SimResult& r) {
    out << std::left << std::setw(8) << "tick" << std::setw(11) << "actor" << "event\n";
    for (const auto& e : r.timeline) {
        out << std::left << std::setw(8) << e.tick << std::setw(11)
            << (e.actor == Actor::Adversary ? "adversary" : "defender") << e.description << '\n';
    }
}

}  // namespace csi::c2sim
