// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Every tolerance used below is pinned in this file.

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "csi/assess.hpp"
#include "csi/c2sim.hpp"
#include "csi/campaigns.hpp"
#include "csi/chains.hpp"
#include "csi/cli.hpp"
#include "csi/coa.hpp"
#include "csi/errors.hpp"
#include "csi/ingest.hpp"
#include "csi/store.hpp"
#include "support/test_support.hpp"

namespace {

using namespace csi;
namespace ts = csi::testing;

const std::string kData = CSI_TESTDATA_DIR;

// Pinned tolerances.
constexpr double kExact = 0.0;          // clustering, key supports, simulator, PER example
constexpr double kRateSumTol = 1e-12;   // rates summing to one on random corpora
constexpr double kOracleSimTol = 1e-12; // library vs independent similarity oracle

struct Verdict {
    bool ok = true;
    std::string detail;
};

/// Collects violations; keeps the first message for the report line.
class Tally {
public:
    void check(bool cond, const std::string& what) {
        ++cases_;
        if (!cond) {
            ++violations_;
            if (first_.empty()) first_ = what;
        }
    }
    Verdict verdict(const std::string& summary) const {
        std::ostringstream s;
        s << summary << "; " << cases_ << " checks, " << violations_ << " violations";
        if (!first_.empty()) s << "; first: " << first_;
        return {violations_ == 0, s.str()};
    }

private:
    std::size_t cases_ = 0;
    std::size_t violations_ = 0;
    std::string first_;
};

std::set<std::set<std::string>> partition(const std::vector<Campaign>& cs) {
    std::set<std::set<std::string>> out;
    for (const auto& c : cs) out.insert(c.members);
    return out;
}

Verdict clustering_oracle() {
    std::mt19937_64 rng(20240601);
    Tally t;
    for (int corpus = 0; corpus < 200; ++corpus) {
        std::vector<Intrusion> xs;
        const int n = static_cast<int>(rng() % 21);
        for (int k = 0; k < n; ++k) xs.push_back(ts::random_intrusion(rng, "i" + std::to_string(k)));
        for (double theta : {0.2, 0.4, 0.8}) {
            const auto got = partition(campaigns::correlate_campaigns(xs, {theta, campaigns::kDefaultSupportMin,
                                                                           campaigns::kEqualWeights}));
            t.check(got == ts::oracle_components(xs, theta),
                    "corpus " + std::to_string(corpus) + " theta " + std::to_string(theta));
        }
    }
    return t.verdict("200 corpora x theta {0.2,0.4,0.8}, exact partition equality");
}

Verdict similarity_laws() {
    std::mt19937_64 rng(7001);
    Tally t;
    std::size_t pairs = 0;
    for (int k = 0; k < 1200; ++k) {
        const auto a = ts::random_intrusion(rng, "a");
        const auto b = ts::random_intrusion(rng, "b");
        const double s = campaigns::similarity(a, b);
        ++pairs;
        t.check(s == campaigns::similarity(b, a), "symmetry");
        t.check(s >= 0.0 && s <= 1.0, "range");
        t.check(std::abs(s - ts::oracle_similarity(a, b)) <= kOracleSimTol, "oracle");
        if (!a.all_indicators().empty()) t.check(campaigns::similarity(a, a) == 1.0, "self-similarity");
    }
    // the packed, dispatched kernel path obeys the same laws
    for (int k = 0; k < 40; ++k) {
        std::vector<Intrusion> xs;
        for (int q = 0; q < 10; ++q) xs.push_back(ts::random_intrusion(rng, "m" + std::to_string(q), 200, 0.5, 0.1));
        const auto m = campaigns::similarity_matrix(xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (std::size_t j = 0; j < xs.size(); ++j) {
                ++pairs;
                t.check(m.at(i, j) == m.at(j, i), "matrix symmetry");
                t.check(m.at(i, j) == campaigns::similarity(xs[i], xs[j]), "matrix equals set path");
            }
            if (!xs[i].all_indicators().empty()) t.check(m.at(i, i) == 1.0, "matrix self-similarity");
        }
    }
    return t.verdict(std::to_string(pairs) + " pairs (kernel " +
                     std::string(simd::level_name(simd::active_level())) + ")");
}

Verdict key_indicator_oracle() {
    Tally t;
    const std::vector<Intrusion> worked = {
        ts::make_intrusion("m1", {{KillChainPhase::Delivery, {"hash:x", "hash:y"}}}),
        ts::make_intrusion("m2", {{KillChainPhase::Delivery, {"hash:x"}}}),
        ts::make_intrusion("m3", {{KillChainPhase::CommandAndControl, {"hash:x"}}}),
    };
    const auto keys = campaigns::key_indicators(worked, 2.0 / 3.0);
    t.check(keys.size() == 1 && keys[0].id == "hash:x" && keys[0].support == 1.0, "worked example");

    std::mt19937_64 rng(31337);
    for (int corpus = 0; corpus < 300; ++corpus) {
        std::vector<Intrusion> members;
        const int n = 1 + static_cast<int>(rng() % 10);
        for (int k = 0; k < n; ++k) members.push_back(ts::random_intrusion(rng, "m" + std::to_string(k)));
        const auto oracle = ts::oracle_supports(members);
        const double floor = (1 + rng() % 100) / 100.0;
        const auto got = campaigns::key_indicators(members, floor);
        std::set<std::string> expected_ids;
        for (const auto& [id, s] : oracle) {
            if (s + 1e-9 >= floor) expected_ids.insert(id);
        }
        std::set<std::string> got_ids;
        for (const auto& k : got) {
            got_ids.insert(k.id);
            t.check(std::abs(k.support - oracle.at(k.id)) <= kExact, "support of " + k.id);
        }
        t.check(got_ids == expected_ids, "selected set, corpus " + std::to_string(corpus));
    }
    return t.verdict("worked example + 300 random corpora");
}

Verdict classification() {
    Tally t;
    for (auto stop : kAllPhases) {
        for (int deepest = 0; deepest < ordinal(stop); ++deepest) {
            const auto i = ts::scripted_intrusion("x", deepest, stop);
            const auto expected = ordinal(stop) <= 4 ? chains::StopClass::ProactiveStop : chains::StopClass::ReactiveStop;
            t.check(chains::classify_stop(i) == expected, "stop at " + std::string(phase_name(stop)));
        }
    }
    return t.verdict("all 8 stop phases x every shallower depth");
}

Verdict simulator_fixtures() {
    Tally t;
    const c2sim::LoopConfig adv{{1, 1.0, 2, 3}, "adversary"};
    const c2sim::LoopConfig def{{0, 0.0, 0, 12}, "defender"};

    const auto a = c2sim::simulate(adv, def, DefensiveAction::Deny, {}, 100);
    t.check(a.adversary_period == 9 && a.defender_period == 12, "periods 9/12");
    t.check(a.deepest_phase == 8 && !a.stopped_at && !a.reactive, "fixture 1: deepest 8");
    t.check(std::abs(a.posture_ratio - 0.75) <= kExact, "fixture 1: ratio 0.75");
    t.check(!a.timeline.empty() && a.timeline.back().tick == 72, "fixture 1: phase 8 at tick 72");

    const auto b = c2sim::simulate(adv, def, DefensiveAction::Deny, {6, 0.0, 0}, 100);
    t.check(b.deepest_phase == 1 && b.stopped_at == KillChainPhase::Weaponization, "fixture 2: stopped at phase 2");
    t.check(std::abs(b.posture_ratio - 1.25) <= kExact && b.reactive, "fixture 2: ratio 1.25, reactive");

    const auto c = c2sim::simulate(adv, def, DefensiveAction::Detect, {0, 1.0, 0}, 50);
    t.check(c.deepest_phase <= 1, "fixture 3: deepest <= 1");
    return t.verdict("three hand-traced scenarios, tolerance 0");
}

Verdict interference_monotonicity() {
    Tally t;
    const c2sim::LoopConfig adv{{1, 1.0, 2, 3}, "adversary"};
    for (auto action : kAllActions) {
        for (Tick pd = 1; pd <= 30; ++pd) {
            const c2sim::LoopConfig def{{0, 0.0, 0, pd}, "defender"};
            int prev_deepest = 9;
            double prev_ratio = -1.0;
            for (Tick extra = 0; extra <= 20; ++extra) {
                const auto r = c2sim::simulate(adv, def, action, {extra, 0.0, 0}, 200);
                t.check(r.deepest_phase <= prev_deepest, "deepest rose at extra " + std::to_string(extra));
                t.check(r.posture_ratio > prev_ratio, "ratio not increasing at extra " + std::to_string(extra));
                prev_deepest = r.deepest_phase;
                prev_ratio = r.posture_ratio;
            }
        }
    }
    return t.verdict("extra_info_delay 0..20 x 6 actions x P_d 1..30");
}

Verdict traceability() {
    Tally t;
    std::mt19937_64 rng(4242);
    ts::TempDir dir;
    std::map<std::string, std::vector<IndicatorRevision>> histories;
    std::map<std::string, std::map<Timestamp, std::optional<ValidationStatus>>> answers;
    {
        auto repo = store::Repository::load(dir.path(), store::Repository::Mode::ReadWrite);
        for (int k = 0; k < 500; ++k) {
            const auto id = "hash:ind" + std::to_string(k);
            histories[id] = ts::random_history(rng);
            for (const auto& r : histories[id]) repo.append_revision(id, r);
            const auto& ind = *repo.find_indicator(id);
            const Timestamp last = histories[id].back().at;
            for (Timestamp q = -1; q <= last + 1; ++q) {
                const auto before = validation_status_at(ind, q);
                answers[id][q] = before;
                t.check(before == ts::oracle_status_at(histories[id], q), "oracle " + id);
                Indicator extended = ind;
                extended.revisions.push_back({std::max(last, q) + 1, ValidationStatus::Refuted, "late", 1.0, ""});
                t.check(validation_status_at(extended, q) == before, "append changed past answer for " + id);
            }
        }
    }
    const auto reloaded = store::Repository::load(dir.path());
    for (const auto& [id, by_t] : answers) {
        const auto* ind = reloaded.find_indicator(id);
        t.check(ind != nullptr && ind->revisions == histories[id], "history survives reload " + id);
        if (ind == nullptr) continue;
        for (const auto& [q, expected] : by_t) t.check(validation_status_at(*ind, q) == expected, "requery " + id);
    }
    return t.verdict("500 random histories, append-then-requery and reload-then-requery");
}

template <typename T, typename Fn>
std::vector<T> from_file(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return fn(in);
}

Verdict end_to_end() {
    Tally t;
    std::ifstream in(kData + "/sample_corpus.jsonl");
    const auto events = ingest::parse_events(in);
    const auto intrusions = chains::reconstruct_intrusions(events);
    t.check(intrusions.size() == 3, "3 intrusions");

    const auto found = campaigns::correlate_campaigns(intrusions, {0.4, campaigns::kDefaultSupportMin,
                                                                   campaigns::kEqualWeights});
    t.check(found.size() == 1, "exactly 1 campaign");
    if (found.size() != 1) return t.verdict("shipped corpus");
    const auto& c = found[0];
    t.check(c.members.size() == 3, "3 members");
    std::set<std::string> key_ids;
    for (const auto& k : c.key_indicators) {
        key_ids.insert(k.id);
        t.check(k.support == 1.0, "key support 1.0 for " + k.id);
    }
    t.check(key_ids == std::set<std::string>{"email:invoice@billing-update.example", "domain:cdn-sync.example"},
            "key indicators are the two shared ones");

    const auto caps = from_file<Capability>(kData + "/capabilities.jsonl",
                                            [](std::istream& s) { return coa::parse_capabilities(s); });
    const auto plan = coa::plan_coa(c, intrusions, coa::build_matrix(caps));
    std::set<int> ordinals;
    for (const auto& r : plan.rows) ordinals.insert(ordinal(r.phase));
    t.check(ordinals == std::set<int>{4, 7}, "plan rows only in phases 4 and 7");
    t.check(plan.gap_warnings.empty(), "no gap warnings");
    return t.verdict("shipped corpus, theta 0.4, " + std::to_string(plan.rows.size()) + " plan rows");
}

Intrusion random_scripted(std::mt19937_64& rng, const std::string& id) {
    const int deepest = static_cast<int>(rng() % 9);
    std::optional<KillChainPhase> stop;
    if (deepest < 8 && rng() % 3 != 0) stop = phase_from_ordinal(deepest + 1 + static_cast<int>(rng() % (8 - deepest)));
    return ts::scripted_intrusion(id, deepest, stop);
}

Verdict per_arithmetic() {
    Tally t;
    const std::vector<Intrusion> worked = {ts::scripted_intrusion("a", 3, KillChainPhase::Delivery),
                                           ts::scripted_intrusion("b", 3, KillChainPhase::Delivery),
                                           ts::scripted_intrusion("c", 6, KillChainPhase::CommandAndControl),
                                           ts::scripted_intrusion("d", 8, std::nullopt)};
    const auto m = assess::tactical_assessment(worked);
    t.check(std::abs(m.proactive_stop_rate - 0.5) <= kExact, "proactive 0.5");
    t.check(std::abs(m.reactive_stop_rate - 0.25) <= kExact, "reactive 0.25");
    t.check(std::abs(m.compromise_rate - 0.25) <= kExact, "compromise 0.25");
    t.check(std::abs(m.mean_deepest - 5.0) <= kExact, "mean_deepest 5.0");

    std::mt19937_64 rng(99);
    for (int corpus = 0; corpus < 500; ++corpus) {
        std::vector<Intrusion> xs;
        const int n = 1 + static_cast<int>(rng() % 30);
        for (int k = 0; k < n; ++k) xs.push_back(random_scripted(rng, "i" + std::to_string(k)));
        const auto r = assess::tactical_assessment(xs);
        const double sum = r.proactive_stop_rate + r.reactive_stop_rate + r.compromise_rate + r.no_contact_rate;
        t.check(std::abs(sum - 1.0) <= kRateSumTol, "rates sum, corpus " + std::to_string(corpus));
    }
    return t.verdict("worked example exact + 500 random corpora");
}

struct RunOutput {
    int code;
    std::string out;
};

RunOutput run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

Verdict determinism() {
    Tally t;
    ts::TempDir dir;
    const auto repo = dir.path().string();
    t.check(run_cli({"--repo", repo, "ingest", kData + "/sample_corpus.jsonl"}).code == 0, "ingest");

    const std::vector<std::string> sim = {"--repo", repo, "simulate", "--scenario", kData + "/s1.json"};
    const std::vector<std::string> cor = {"--repo", repo, "correlate", "--profiles", kData + "/profiles.jsonl"};
    const auto s1 = run_cli(sim);
    const auto c1 = run_cli(cor);
    t.check(s1.code == 0 && c1.code == 0, "commands succeed");
    for (int k = 0; k < 5; ++k) {
        t.check(run_cli(sim).out == s1.out, "simulate output differs");
        t.check(run_cli(cor).out == c1.out, "correlate output differs");
    }
    // a fresh repository built from the same input gives the same bytes
    ts::TempDir other;
    run_cli({"--repo", other.path().string(), "ingest", kData + "/sample_corpus.jsonl"});
    auto cor2 = cor;
    cor2[1] = other.path().string();
    auto expected = c1.out;
    auto got = run_cli(cor2).out;
    // the header echoes the repository path; compare past it
    auto past_header = [](const std::string& s) { return s.substr(std::min(s.size(), s.find('\n') + 1)); };
    t.check(past_header(got) == past_header(expected), "correlate differs across repositories");
    return t.verdict("6 runs each of simulate and correlate, byte comparison");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"clustering equals brute-force transitive closure", clustering_oracle},
        {"similarity laws", similarity_laws},
        {"key-indicator supports equal exhaustive counting", key_indicator_oracle},
        {"chain-break classification", classification},
        {"simulator hand-trace fixtures", simulator_fixtures},
        {"interference monotonicity", interference_monotonicity},
        {"traceability and point-in-time queries", traceability},
        {"end-to-end fixture", end_to_end},
        {"tactical assessment arithmetic", per_arithmetic},
        {"structured output determinism", determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& ex) {
            v = {false, std::string("exception: ") + ex.what()};
        }
        failures += v.ok ? 0 : 1;
        std::cout << (v.ok ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << criteria[k].first << " -- " << v.detail
                  << '\n';
    }
    std::cout << (criteria.size() - failures) << '/' << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
