#pragma once

// Defensive courses of action: the phase x action capability matrix, its
// coverage and proactivity, campaign-driven plans, and candidate ranking.

#include <array>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "csi/core_model.hpp"

namespace csi::coa {

class CoaMatrix {
public:
    using Cell = std::set<std::string>;

    const Cell& cell(KillChainPhase p, DefensiveAction a) const noexcept {
        return cells_[phase_index(p)][action_index(a)];
    }
    const std::map<std::string, Capability>& capabilities() const noexcept { return capabilities_; }

    bool row_empty(KillChainPhase p) const noexcept;
    std::size_t non_empty_cells() const noexcept;

    /// Throws DuplicateCapabilityId; validates the capability first.
    void add(const Capability& cap);

private:
    std::array<std::array<Cell, kActionCount>, kPhaseCount> cells_{};
    std::map<std::string, Capability> capabilities_;
};

/// JSON Lines with "id", "name", "cost" and "coverage" ("phase:action" strings).
std::vector<Capability> parse_capabilities(std::istream& in);

CoaMatrix build_matrix(std::span<const Capability> capabilities);

struct CoverageReport {
    std::set<KillChainPhase> covered;
    std::set<KillChainPhase> gaps;
    double proactivity_index = 0.0;  // covered pre-exploitation phases / 4
};

CoverageReport coverage_report(const CoaMatrix& matrix);

struct PlanRow {
    KillChainPhase phase;
    DefensiveAction action;
    std::set<std::string> capabilities;
    std::set<std::string> triggers;  // key indicator ids seen in this phase
};

struct CoaPlan {
    std::vector<PlanRow> rows;              // phase ordinal, then action name
    std::set<KillChainPhase> gap_warnings;  // key phases with no capability at all
};

/// For every phase in which one of the campaign's key indicators was seen
/// among its members, emits each non-empty matrix cell in that phase's row.
/// Throws UnknownMember if a member id is not among `intrusions`.
CoaPlan plan_coa(const Campaign& campaign, std::span<const Intrusion> intrusions, const CoaMatrix& matrix);

// ---------------------------------------------------------------------------
// Candidate comparison
// ---------------------------------------------------------------------------

struct CoaCandidate {
    std::string name;
    std::set<std::string> capability_ids;
    double total_cost = 0.0;
};

/// Resolves ids against the base registry and sums their costs.
/// Throws UnknownCapability.
CoaCandidate make_candidate(std::string name, std::set<std::string> ids, std::span<const Capability> base);

/// JSON Lines with "name" and "capabilities" fields.
std::vector<CoaCandidate> parse_candidates(std::istream& in, std::span<const Capability> base);

struct Weights {
    double coverage = 1.0;
    double proactivity = 1.0;
    double cost = 0.5;
};

struct CandidateScore {
    std::string name;
    double coverage_term = 0.0;     // |covered phases| / 8
    double proactivity_term = 0.0;  // proactivity index
    double cost_term = 0.0;         // cost / max cost among candidates
    double total_cost = 0.0;
    double score = 0.0;
};

/// score = w_cov*coverage + w_pro*proactivity - w_cost*normalized_cost, ranked
/// descending with ties broken by name. Throws EmptyCandidateSet, or
/// InvalidArgument for negative or all-zero weights.
std::vector<CandidateScore> compare_coas(std::span<const CoaCandidate> candidates,
                                         std::span<const Capability> base, const Weights& weights = {});

}  // namespace csi::coa
