#include "csi/campaigns.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "csi/errors.hpp"
#include "csi/json_codec.hpp"

namespace csi::campaigns {

namespace {

std::size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

const std::set<std::string>& phase_set(const Intrusion& i, KillChainPhase p) {
    static const std::set<std::string> kEmpty;
    const auto it = i.phase_indicators.find(p);
    return it == i.phase_indicators.end() ? kEmpty : it->second;
}

// Shared accumulation so the set path and the packed path round identically.
struct WeightedMean {
    double num = 0.0;
    double den = 0.0;

    void add(double weight, std::uint64_t inter, std::uint64_t uni) {
        if (uni == 0) return;
        num += weight * (static_cast<double>(inter) / static_cast<double>(uni));
        den += weight;
    }
    double value() const { return den > 0.0 ? num / den : 0.0; }
};

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

void check_unit_interval(double v, const char* what) {
    if (!(v > 0.0 && v <= 1.0)) throw InvalidArgument(std::string(what) + " must lie in (0,1]");
}

}  // namespace

void check_weights(const PhaseWeights& w) {
    double total = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw InvalidArgument("phase weights must be non-negative");
        total += x;
    }
    if (total <= 0.0) throw InvalidArgument("phase weights are all zero");
}

double similarity(const Intrusion& a, const Intrusion& b, const PhaseWeights& weights) {
    WeightedMean mean;
    for (KillChainPhase p : kAllPhases) {
        const auto& sa = phase_set(a, p);
        const auto& sb = phase_set(b, p);
        const std::size_t inter = intersection_size(sa, sb);
        mean.add(weights[phase_index(p)], inter, sa.size() + sb.size() - inter);
    }
    return mean.value();
}

PackedIntrusions::PackedIntrusions(std::span<const Intrusion> intrusions) : count_(intrusions.size()) {
    std::set<std::string> all;
    for (const auto& i : intrusions) {
        for (const auto& [phase, ids] : i.phase_indicators) all.insert(ids.begin(), ids.end());
    }
    universe_.assign(all.begin(), all.end());
    words_ = (universe_.size() + simd::kWordBits - 1) / simd::kWordBits;
    bits_.assign(count_ * kPhaseCount * words_, 0);

    for (std::size_t n = 0; n < count_; ++n) {
        for (const auto& [phase, ids] : intrusions[n].phase_indicators) {
            simd::Word* row = bits_.data() + (n * kPhaseCount + phase_index(phase)) * words_;
            for (const auto& id : ids) {
                const auto bit = static_cast<std::size_t>(
                    std::lower_bound(universe_.begin(), universe_.end(), id) - universe_.begin());
                row[bit / simd::kWordBits] |= simd::Word{1} << (bit % simd::kWordBits);
            }
        }
    }
}

std::span<const simd::Word> PackedIntrusions::phase_bits(std::size_t intrusion, KillChainPhase phase) const noexcept {
    return {bits_.data() + (intrusion * kPhaseCount + phase_index(phase)) * words_, words_};
}

double PackedIntrusions::similarity(std::size_t i, std::size_t j, const PhaseWeights& weights,
                                    simd::OverlapFn kernel) const noexcept {
    WeightedMean mean;
    for (KillChainPhase p : kAllPhases) {
        const auto c = kernel(phase_bits(i, p), phase_bits(j, p));
        mean.add(weights[phase_index(p)], c.intersection, c.union_);
    }
    return mean.value();
}

SimilarityMatrix similarity_matrix(std::span<const Intrusion> intrusions, const PhaseWeights& weights,
                                   simd::SimdLevel level) {
    check_weights(weights);
    const PackedIntrusions packed(intrusions);
    const auto kernel = simd::kernel_for(level);
    SimilarityMatrix m;
    m.n = intrusions.size();
    m.values.assign(m.n * m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = i; j < m.n; ++j) {
            const double s = packed.similarity(i, j, weights, kernel);
            m.values[i * m.n + j] = s;
            m.values[j * m.n + i] = s;
        }
    }
    return m;
}

std::vector<Campaign> correlate_campaigns(std::span<const Intrusion> intrusions, const CorrelateParams& params) {
    check_unit_interval(params.threshold, "threshold");
    check_unit_interval(params.support_min, "support_min");
    check_weights(params.weights);

    const std::size_t n = intrusions.size();
    const auto sims = similarity_matrix(intrusions, params.weights);
    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (sims.at(i, j) >= params.threshold) sets.unite(i, j);
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < n; ++i) components[sets.find(i)].push_back(i);

    std::vector<Campaign> out;
    out.reserve(components.size());
    for (const auto& [root, indices] : components) {
        std::vector<Intrusion> members;
        members.reserve(indices.size());
        Campaign c;
        c.threshold = params.threshold;
        c.span = {intrusions[indices.front()].first_at(), intrusions[indices.front()].last_at()};
        for (std::size_t idx : indices) {
            const auto& intr = intrusions[idx];
            c.members.insert(intr.id);
            c.span.first = std::min(c.span.first, intr.first_at());
            c.span.second = std::max(c.span.second, intr.last_at());
            members.push_back(intr);
        }
        c.key_indicators = key_indicators(members, params.support_min);
        out.push_back(std::move(c));
    }

    // member sets are std::set, so comparing them is lexicographic on sorted ids
    std::sort(out.begin(), out.end(), [](const Campaign& a, const Campaign& b) {
        if (a.span.first != b.span.first) return a.span.first < b.span.first;
        return a.members < b.members;
    });
    for (std::size_t k = 0; k < out.size(); ++k) out[k].id = "campaign-" + std::to_string(k + 1);
    return out;
}

std::vector<KeyIndicator> key_indicators(std::span<const Intrusion> members, double support_min) {
    check_unit_interval(support_min, "support_min");
    if (members.empty()) return {};

    std::map<std::string, std::size_t> counts;
    for (const auto& m : members) {
        for (const auto& id : m.all_indicators()) ++counts[id];
    }
    const double n = static_cast<double>(members.size());
    // tolerance so that e.g. 2 of 3 members passes a 2/3 floor typed as 0.6666666667
    constexpr double kSlack = 1e-9;
    std::vector<KeyIndicator> out;
    for (const auto& [id, count] : counts) {
        if (static_cast<double>(count) + kSlack >= support_min * n) out.push_back({id, static_cast<double>(count) / n});
    }
    std::sort(out.begin(), out.end(), [](const KeyIndicator& a, const KeyIndicator& b) {
        if (a.support != b.support) return a.support > b.support;
        return a.id < b.id;
    });
    return out;
}

std::vector<Intrusion> members_of(const Campaign& campaign, std::span<const Intrusion> intrusions) {
    std::map<std::string, const Intrusion*> by_id;
    for (const auto& i : intrusions) by_id.emplace(i.id, &i);
    std::vector<Intrusion> out;
    for (const auto& id : campaign.members) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) throw UnknownMember(id);
        out.push_back(*it->second);
    }
    return out;
}

std::vector<ActorProfile> parse_profiles(std::istream& in) {
    std::vector<ActorProfile> out;
    json_codec::for_each_line(
        in,
        [&](std::size_t line_no, const json_codec::json& j) {
            try {
                ActorProfile p;
                const auto actor = json_codec::require_string(j, "actor");
                const auto a = parse_actor(actor);
                if (!a) throw InvalidArgument("unknown actor class '" + actor + "'");
                p.actor = *a;
                p.label = json_codec::require_string(j, "label");
                const auto& arr = json_codec::require(j, "indicators");
                if (!arr.is_array()) throw InvalidArgument("field 'indicators' must be an array");
                for (const auto& v : arr) {
                    const auto ref = v.is_string() ? parse_indicator_ref(v.get<std::string>()) : std::nullopt;
                    if (!ref) throw InvalidArgument("bad indicator reference " + v.dump());
                    p.known_indicators.insert(ref->id());
                }
                if (p.known_indicators.empty()) throw InvalidArgument("profile without indicators");
                out.push_back(std::move(p));
            } catch (const InvalidArgument& ex) {
                throw ParseError(line_no, ex.what());
            }
        },
        [](std::size_t line_no, const std::string& reason) { throw ParseError(line_no, reason); });
    return out;
}

Attribution attribution_hypothesis(const Campaign& campaign, std::span<const ActorProfile> profiles,
                                   double overlap_min) {
    check_unit_interval(overlap_min, "overlap_min");
    const std::size_t n_keys = campaign.key_indicators.size();
    if (n_keys == 0 || profiles.empty()) return {};

    // scores share the denominator, so ties are compared on the integer numerator
    std::size_t best = 0;
    std::size_t best_hits = 0;
    std::size_t tied = 0;
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        std::size_t hits = 0;
        for (const auto& key : campaign.key_indicators) hits += profiles[k].known_indicators.count(key.id);
        if (k == 0 || hits > best_hits) {
            best = k;
            best_hits = hits;
            tied = 1;
        } else if (hits == best_hits) {
            ++tied;
        }
    }

    const double score = static_cast<double>(best_hits) / static_cast<double>(n_keys);
    if (best_hits == 0 || score < overlap_min) return {};
    if (tied > 1) return Attribution{ActorClass::Unattributed, score, {}, true};
    return Attribution{profiles[best].actor, score, profiles[best].label, false};
}

std::vector<std::pair<std::string, std::size_t>> target_trends(std::span<const Intrusion> members) {
    std::map<std::string, std::size_t> counts;
    for (const auto& m : members) ++counts[m.target];
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

}  // namespace csi::campaigns
