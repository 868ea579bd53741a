#include "csi/coa.hpp"

#include <algorithm>

#include "csi/campaigns.hpp"
#include "csi/errors.hpp"
#include "csi/json_codec.hpp"

namespace csi::coa {

bool CoaMatrix::row_empty(KillChainPhase p) const noexcept {
    const auto& row = cells_[phase_index(p)];
    return std::all_of(row.begin(), row.end(), [](const Cell& c) { return c.empty(); });
}

std::size_t CoaMatrix::non_empty_cells() const noexcept {
    std::size_t n = 0;
    for (const auto& row : cells_) {
        for (const auto& c : row) n += c.empty() ? 0 : 1;
    }
    return n;
}

void CoaMatrix::add(const Capability& cap) {
    check_capability(cap);
    if (!capabilities_.emplace(cap.id, cap).second) throw DuplicateCapabilityId(cap.id);
    for (const auto& pa : cap.coverage) cells_[phase_index(pa.phase)][action_index(pa.action)].insert(cap.id);
}

std::vector<Capability> parse_capabilities(std::istream& in) {
    std::vector<Capability> out;
    json_codec::for_each_line(
        in,
        [&](std::size_t line_no, const json_codec::json& j) {
            try {
                out.push_back(json_codec::decode_capability(j));
            } catch (const InvalidArgument& ex) {
                throw ParseError(line_no, ex.what());
            } catch (const json_codec::json::exception& ex) {
                throw ParseError(line_no, ex.what());
            }
        },
        [](std::size_t line_no, const std::string& reason) { throw ParseError(line_no, reason); });
    return out;
}

CoaMatrix build_matrix(std::span<const Capability> capabilities) {
    CoaMatrix m;
    for (const auto& cap : capabilities) m.add(cap);
    return m;
}

CoverageReport coverage_report(const CoaMatrix& matrix) {
    CoverageReport r;
    std::size_t proactive = 0;
    for (KillChainPhase p : kAllPhases) {
        if (matrix.row_empty(p)) {
            r.gaps.insert(p);
        } else {
            r.covered.insert(p);
            if (is_proactive_phase(p)) ++proactive;
        }
    }
    r.proactivity_index = static_cast<double>(proactive) / 4.0;
    return r;
}

CoaPlan plan_coa(const Campaign& campaign, std::span<const Intrusion> intrusions, const CoaMatrix& matrix) {
    const auto members = campaigns::members_of(campaign, intrusions);

    std::map<KillChainPhase, std::set<std::string>> triggers;
    for (const auto& key : campaign.key_indicators) {
        for (const auto& m : members) {
            for (const auto& [phase, ids] : m.phase_indicators) {
                if (ids.count(key.id)) triggers[phase].insert(key.id);
            }
        }
    }

    // rows within a phase are ordered by the action's wire name
    std::vector<DefensiveAction> actions(kAllActions.begin(), kAllActions.end());
    std::sort(actions.begin(), actions.end(),
              [](DefensiveAction a, DefensiveAction b) { return action_name(a) < action_name(b); });

    CoaPlan plan;
    for (const auto& [phase, ids] : triggers) {
        if (matrix.row_empty(phase)) {
            plan.gap_warnings.insert(phase);
            continue;
        }
        for (DefensiveAction a : actions) {
            const auto& cell = matrix.cell(phase, a);
            if (!cell.empty()) plan.rows.push_back(PlanRow{phase, a, cell, ids});
        }
    }
    return plan;
}

CoaCandidate make_candidate(std::string name, std::set<std::string> ids, std::span<const Capability> base) {
    CoaCandidate c{std::move(name), std::move(ids), 0.0};
    for (const auto& id : c.capability_ids) {
        const auto it = std::find_if(base.begin(), base.end(), [&](const Capability& cap) { return cap.id == id; });
        if (it == base.end()) throw UnknownCapability(id);
        c.total_cost += it->cost;
    }
    return c;
}

std::vector<CoaCandidate> parse_candidates(std::istream& in, std::span<const Capability> base) {
    std::vector<CoaCandidate> out;
    json_codec::for_each_line(
        in,
        [&](std::size_t line_no, const json_codec::json& j) {
            try {
                const auto name = json_codec::require_string(j, "name");
                const auto& arr = json_codec::require(j, "capabilities");
                if (!arr.is_array()) throw InvalidArgument("field 'capabilities' must be an array");
                std::set<std::string> ids;
                for (const auto& v : arr) {
                    if (!v.is_string()) throw InvalidArgument("capability ids must be strings");
                    ids.insert(v.get<std::string>());
                }
                out.push_back(make_candidate(name, std::move(ids), base));
            } catch (const InvalidArgument& ex) {
                throw ParseError(line_no, ex.what());
            } catch (const UnknownCapability& ex) {
                throw ParseError(line_no, ex.what());
            }
        },
        [](std::size_t line_no, const std::string& reason) { throw ParseError(line_no, reason); });
    return out;
}

std::vector<CandidateScore> compare_coas(std::span<const CoaCandidate> candidates,
                                         std::span<const Capability> base, const Weights& weights) {
    if (candidates.empty()) throw EmptyCandidateSet();
    if (!(weights.coverage >= 0.0 && weights.proactivity >= 0.0 && weights.cost >= 0.0)) {
        throw InvalidArgument("weights must be non-negative");
    }
    if (weights.coverage + weights.proactivity + weights.cost <= 0.0) throw InvalidArgument("weights are all zero");

    double max_cost = 0.0;
    for (const auto& c : candidates) max_cost = std::max(max_cost, c.total_cost);

    std::vector<CandidateScore> out;
    out.reserve(candidates.size());
    for (const auto& cand : candidates) {
        std::vector<Capability> caps;
        for (const auto& id : cand.capability_ids) {
            const auto it = std::find_if(base.begin(), base.end(), [&](const Capability& c) { return c.id == id; });
            if (it == base.end()) throw UnknownCapability(id);
            caps.push_back(*it);
        }
        const auto report = coverage_report(build_matrix(caps));

        CandidateScore s;
        s.name = cand.name;
        s.total_cost = cand.total_cost;
        s.coverage_term = static_cast<double>(report.covered.size()) / static_cast<double>(kPhaseCount);
        s.proactivity_term = report.proactivity_index;
        s.cost_term = max_cost > 0.0 ? cand.total_cost / max_cost : 0.0;
        s.score = weights.coverage * s.coverage_term + weights.proactivity * s.proactivity_term -
                  weights.cost * s.cost_term;
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const CandidateScore& a, const CandidateScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.name < b.name;
    });
    return out;
}

}  // namespace csi::coa
