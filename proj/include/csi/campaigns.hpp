#pragma once

// Operational-level analysis: phase-aligned intrusion similarity, campaign
// clustering, key (low-volatility) indicators, attribution and target trends.

#include <array>
#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "csi/core_model.hpp"
#include "csi/simd/bitset_kernels.hpp"

namespace csi::campaigns {

using PhaseWeights = std::array<double, kPhaseCount>;

inline constexpr PhaseWeights kEqualWeights = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
inline constexpr double kDefaultThreshold = 0.4;
inline constexpr double kDefaultSupportMin = 2.0 / 3.0;

/// Throws InvalidArgument on a negative weight or an all-zero vector.
void check_weights(const PhaseWeights& w);

/// Weighted mean, over the phases where either intrusion has an indicator, of
/// the per-phase Jaccard index. Phases empty on both sides are skipped; 0 when
/// no phase qualifies. Works on the indicator sets directly; this is the
/// reference the packed path is checked against.
double similarity(const Intrusion& a, const Intrusion& b, const PhaseWeights& weights = kEqualWeights);

/// Intrusions re-encoded as one bitset per phase over a shared indicator
/// universe, laid out contiguously so the popcount kernels can stream them.
class PackedIntrusions {
public:
    explicit PackedIntrusions(std::span<const Intrusion> intrusions);

    std::size_t size() const noexcept { return count_; }
    std::size_t universe_size() const noexcept { return universe_.size(); }
    std::size_t words_per_phase() const noexcept { return words_; }

    std::span<const simd::Word> phase_bits(std::size_t intrusion, KillChainPhase phase) const noexcept;

    double similarity(std::size_t i, std::size_t j, const PhaseWeights& weights, simd::OverlapFn kernel) const noexcept;

private:
    std::size_t count_ = 0;
    std::size_t words_ = 0;
    std::vector<std::string> universe_;  // bit index -> indicator id
    std::vector<simd::Word> bits_;       // [intrusion][phase][word]
};

/// Dense symmetric n x n similarity matrix, row-major.
struct SimilarityMatrix {
    std::size_t n = 0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const noexcept { return values[i * n + j]; }
};

SimilarityMatrix similarity_matrix(std::span<const Intrusion> intrusions,
                                   const PhaseWeights& weights = kEqualWeights,
                                   simd::SimdLevel level = simd::active_level());

struct CorrelateParams {
    double threshold = kDefaultThreshold;
    double support_min = kDefaultSupportMin;
    PhaseWeights weights = kEqualWeights;
};

/// Single-linkage clustering: connected components of the graph with an edge
/// wherever similarity >= threshold. Campaigns are ordered by earliest member
/// event, then by sorted member ids, and numbered "campaign-1", "campaign-2"...
/// Throws InvalidArgument if threshold or support_min is outside (0,1].
std::vector<Campaign> correlate_campaigns(std::span<const Intrusion> intrusions, const CorrelateParams& params = {});

/// support(i) = fraction of members with indicator i in any phase. Returns
/// those with support >= support_min, by support descending then id.
std::vector<KeyIndicator> key_indicators(std::span<const Intrusion> members, double support_min = kDefaultSupportMin);

/// Resolves campaign member ids against `intrusions`; throws UnknownMember.
std::vector<Intrusion> members_of(const Campaign& campaign, std::span<const Intrusion> intrusions);

// ---------------------------------------------------------------------------
// Attribution
// ---------------------------------------------------------------------------

inline constexpr double kDefaultOverlapMin = 0.5;

struct ActorProfile {
    ActorClass actor = ActorClass::Unattributed;
    std::set<std::string> known_indicators;
    std::string label;
};

/// JSON Lines with "actor", "label" and "indicators" fields.
std::vector<ActorProfile> parse_profiles(std::istream& in);

struct Attribution {
    ActorClass actor = ActorClass::Unattributed;
    double score = 0.0;
    std::string label;        // matching profile label, empty if none
    bool ambiguous = false;   // best score shared by more than one profile

    friend bool operator==(const Attribution&, const Attribution&) = default;
};

/// score = |key ids known to the profile| / |key ids|. The best profile wins
/// when its score reaches overlap_min; an exact tie for best yields
/// Unattributed with ambiguous set.
Attribution attribution_hypothesis(const Campaign& campaign, std::span<const ActorProfile> profiles,
                                   double overlap_min = kDefaultOverlapMin);

/// Member-target frequencies, count descending then target ascending.
std::vector<std::pair<std::string, std::size_t>> target_trends(std::span<const Intrusion> members);

}  // namespace csi::campaigns
