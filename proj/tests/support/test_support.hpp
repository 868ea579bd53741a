#pragma once

// Test-only helpers: event/intrusion builders, random generators, temporary
// directories, and brute-force oracles that deliberately avoid the library's
// own code paths.

#include <algorithm>
#include <cmath>
#include <optional>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "csi/chains.hpp"
#include "csi/core_model.hpp"

namespace csi::testing {

inline Event make_event(std::string id, Timestamp at, std::string target, KillChainPhase phase,
                        EventOutcome outcome, std::set<std::string> indicators = {}, std::string sensor = "ids-1") {
    Event e;
    e.id = std::move(id);
    e.at = at;
    e.target = std::move(target);
    e.sensor = std::move(sensor);
    e.phase = phase;
    e.outcome = outcome;
    e.indicators = std::move(indicators);
    return e;
}

/// Intrusion given directly by its phase indicator sets.
inline Intrusion make_intrusion(std::string id, PhaseIndicatorMap phases, std::string target = "t") {
    Intrusion i;
    i.id = std::move(id);
    i.target = std::move(target);
    i.phase_indicators = std::move(phases);
    return i;
}

/// Intrusion with a chosen deepest_completed and stop, built from events so
/// the derived fields come from chains::summarize.
inline Intrusion scripted_intrusion(const std::string& id, int deepest, std::optional<KillChainPhase> stop,
                                    Timestamp t0 = 0) {
    std::vector<Event> events;
    Timestamp t = t0;
    for (int k = 1; k <= deepest; ++k) {
        events.push_back(make_event(id + "-s" + std::to_string(k), t++, "t", phase_from_ordinal(k),
                                    EventOutcome::Succeeded, {"other:" + id + "-" + std::to_string(k)}));
    }
    if (stop) events.push_back(make_event(id + "-b", t++, "t", *stop, EventOutcome::Blocked));
    return chains::summarize(id, "t", events);
}

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() / ("csi-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

/// Random intrusion over a small indicator pool so that overlaps are common.
inline Intrusion random_intrusion(std::mt19937_64& rng, const std::string& id, int pool = 12,
                                  double phase_density = 0.35, double indicator_density = 0.3) {
    std::bernoulli_distribution use_phase(phase_density);
    std::bernoulli_distribution use_ind(indicator_density);
    Intrusion i;
    i.id = id;
    i.target = "t" + std::to_string(rng() % 5);
    for (auto p : kAllPhases) {
        if (!use_phase(rng)) continue;
        std::set<std::string> ids;
        for (int k = 0; k < pool; ++k) {
            if (use_ind(rng)) ids.insert("hash:h" + std::to_string(k));
        }
        if (!ids.empty()) i.phase_indicators[p] = std::move(ids);
    }
    return i;
}

/// Jaccard-per-phase mean computed from scratch with explicit set algebra.
inline double oracle_similarity(const Intrusion& a, const Intrusion& b) {
    double sum = 0.0;
    int phases = 0;
    for (int ord = 1; ord <= 8; ++ord) {
        const auto p = static_cast<KillChainPhase>(ord);
        std::set<std::string> sa, sb;
        if (auto it = a.phase_indicators.find(p); it != a.phase_indicators.end()) sa = it->second;
        if (auto it = b.phase_indicators.find(p); it != b.phase_indicators.end()) sb = it->second;
        std::set<std::string> inter, uni;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(inter, inter.end()));
        std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(uni, uni.end()));
        if (uni.empty()) continue;
        sum += static_cast<double>(inter.size()) / static_cast<double>(uni.size());
        ++phases;
    }
    return phases == 0 ? 0.0 : sum / phases;
}

/// Transitive closure (Warshall) of the threshold graph; returns the set of
/// member-id sets, one per connected component.
inline std::set<std::set<std::string>> oracle_components(const std::vector<Intrusion>& xs, double threshold) {
    const std::size_t n = xs.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && oracle_similarity(xs[i], xs[j]) >= threshold) reach[i][j] = true;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
            }
        }
    }
    std::set<std::set<std::string>> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::string> comp;
        for (std::size_t j = 0; j < n; ++j) {
            if (reach[i][j]) comp.insert(xs[j].id);
        }
        out.insert(comp);
    }
    return out;
}

/// Exhaustive per-indicator member counting.
inline std::map<std::string, double> oracle_supports(const std::vector<Intrusion>& members) {
    std::set<std::string> all;
    for (const auto& m : members) {
        for (const auto& [p, ids] : m.phase_indicators) all.insert(ids.begin(), ids.end());
    }
    std::map<std::string, double> out;
    for (const auto& id : all) {
        int count = 0;
        for (const auto& m : members) {
            bool has = false;
            for (const auto& [p, ids] : m.phase_indicators) has = has || ids.count(id) > 0;
            count += has ? 1 : 0;
        }
        out[id] = static_cast<double>(count) / static_cast<double>(members.size());
    }
    return out;
}

/// Smallest n with 1 - exp(-n/tau) >= 0.95, by linear search.
inline std::int64_t oracle_effect_ticks(double tau) {
    if (tau == 0.0) return 0;
    std::int64_t n = 0;
    while (1.0 - std::exp(-static_cast<double>(n) / tau) < 0.95) ++n;
    return n;
}

/// Random revision history with non-decreasing timestamps.
inline std::vector<IndicatorRevision> random_history(std::mt19937_64& rng, int max_len = 8, Timestamp max_step = 5) {
    std::uniform_int_distribution<int> len(1, max_len);
    std::uniform_int_distribution<Timestamp> step(0, max_step);
    std::uniform_int_distribution<int> status(0, 2);
    std::uniform_real_distribution<double> conf(0.0, 1.0);
    std::vector<IndicatorRevision> out;
    Timestamp t = step(rng);
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
        out.push_back({t, static_cast<ValidationStatus>(status(rng)), "src" + std::to_string(k % 3), conf(rng),
                       "rev " + std::to_string(k)});
        t += step(rng);
    }
    return out;
}

/// Point-in-time status by backward linear scan.
inline std::optional<ValidationStatus> oracle_status_at(const std::vector<IndicatorRevision>& revs, Timestamp t) {
    std::optional<ValidationStatus> s;
    for (const auto& r : revs) {
        if (r.at <= t) s = r.status;
    }
    return s;
}

}  // namespace csi::testing
