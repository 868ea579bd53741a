#include "csi/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "csi/assess.hpp"
#include "csi/c2sim.hpp"
#include "csi/campaigns.hpp"
#include "csi/chains.hpp"
#include "csi/coa.hpp"
#include "csi/errors.hpp"
#include "csi/ingest.hpp"
#include "csi/json_codec.hpp"
#include "csi/store.hpp"

namespace csi::cli {

namespace {

using json_codec::json;

enum class Format { Human, Jsonl };

struct GlobalOptions {
    std::string repo;
    std::string format = "jsonl";
};

struct PipelineOptions {
    Timestamp gap = chains::kDefaultGap;
    double threshold = campaigns::kDefaultThreshold;
    double support = campaigns::kDefaultSupportMin;
    std::vector<double> phase_weights;  // empty = equal

    campaigns::CorrelateParams correlate_params() const {
        campaigns::CorrelateParams p;
        p.threshold = threshold;
        p.support_min = support;
        if (!phase_weights.empty()) {
            if (phase_weights.size() != kPhaseCount) throw InvalidArgument("--phase-weights needs 8 values");
            std::copy(phase_weights.begin(), phase_weights.end(), p.weights.begin());
        }
        return p;
    }

    json to_json() const {
        json w = json::array();
        const auto p = correlate_params();
        for (double x : p.weights) w.push_back(x);
        return json{{"gap", gap}, {"threshold", threshold}, {"support", support}, {"phase_weights", w}};
    }
};

class Output {
public:
    Output(std::ostream& out, Format format) : out_(out), format_(format) {}

    bool human() const noexcept { return format_ == Format::Human; }
    std::ostream& stream() { return out_; }

    void header(const std::string& command, const json& params) {
        if (human()) {
            out_ << "# " << command;
            for (const auto& [k, v] : params.items()) out_ << "  " << k << '=' << v.dump();
            out_ << '\n';
        } else {
            record(json{{"type", "header"}, {"command", command}, {"params", params}});
        }
    }

    void record(const json& j) { out_ << json_codec::dump_line(j) << '\n'; }

private:
    std::ostream& out_;
    Format format_;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

template <typename Fn>
auto with_file(const std::string& path, Fn&& fn) {
    auto in = open_input(path);
    try {
        return fn(in);
    } catch (const ParseError& ex) {
        throw InputError(path + ":" + std::to_string(ex.line_no()) + ": " + ex.reason());
    }
}

std::vector<Intrusion> load_intrusions(const store::Repository& repo, Timestamp gap) {
    return chains::reconstruct_intrusions(repo.events(), gap);
}

json phase_list(const std::set<KillChainPhase>& phases) {
    json arr = json::array();
    for (auto p : phases) arr.push_back(std::string(phase_name(p)));
    return arr;
}

json intrusion_summary(const Intrusion& i) {
    json events = json::array();
    for (const auto& e : i.events) events.push_back(e.id);
    json phases = json::object();
    for (const auto& [p, ids] : i.phase_indicators) phases[std::string(phase_name(p))] = ids;
    return json{{"type", "intrusion"},
                {"id", i.id},
                {"target", i.target},
                {"first_at", i.first_at()},
                {"last_at", i.last_at()},
                {"events", events},
                {"phase_indicators", phases},
                {"deepest_completed", i.deepest_completed},
                {"stopped_at", i.stopped_at ? json(std::string(phase_name(*i.stopped_at))) : json(nullptr)},
                {"class", std::string(chains::stop_class_name(chains::classify_stop(i)))}};
}

json metrics_json(const assess::TacticalMetrics& m) {
    return json{{"n", m.n},
                {"proactive_stop_rate", m.proactive_stop_rate},
                {"reactive_stop_rate", m.reactive_stop_rate},
                {"compromise_rate", m.compromise_rate},
                {"no_contact_rate", m.no_contact_rate},
                {"mean_deepest", m.mean_deepest}};
}

void print_metrics(std::ostream& out, const std::string& title, const assess::TacticalMetrics& m) {
    out << title << ": n=" << m.n;
    if (m.empty()) {
        out << " (empty)\n";
        return;
    }
    out << std::fixed << std::setprecision(3) << "  proactive=" << m.proactive_stop_rate
        << "  reactive=" << m.reactive_stop_rate << "  compromise=" << m.compromise_rate
        << "  no_contact=" << m.no_contact_rate << "  mean_deepest=" << m.mean_deepest << '\n';
    out.unsetf(std::ios::floatfield);
}

// 8 x 6 grid; '*' marks phases of interest, rows without any capability are GAP.
void print_matrix(std::ostream& out, const coa::CoaMatrix& m, const std::set<KillChainPhase>& marked = {}) {
    out << std::left << std::setw(22) << "phase";
    for (auto a : kAllActions) out << std::setw(9) << action_name(a);
    out << '\n';
    for (auto p : kAllPhases) {
        std::string label = std::to_string(ordinal(p)) + " " + std::string(phase_name(p));
        if (marked.count(p)) label += " *";
        out << std::setw(22) << label;
        for (auto a : kAllActions) {
            const auto n = m.cell(p, a).size();
            out << std::setw(9) << (n == 0 ? std::string(".") : std::to_string(n));
        }
        if (m.row_empty(p)) out << "GAP";
        out << '\n';
    }
}

std::vector<double> parse_weights(const std::string& text, std::size_t expected) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidArgument("bad weight '" + item + "'");
        }
    }
    if (out.size() != expected) {
        throw InvalidArgument("expected " + std::to_string(expected) + " comma-separated weights");
    }
    return out;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int cmd_ingest(const GlobalOptions& g, Output& out, std::ostream& err, const std::string& path) {
    out.header("ingest", json{{"file", path}});
    auto parsed = with_file(path, [](std::istream& in) { return ingest::parse_events_lenient(in); });

    auto repo = store::Repository::load(g.repo, store::Repository::Mode::ReadWrite);
    std::vector<Event> added;
    std::size_t skipped = 0;
    for (const auto& e : parsed.events) {
        try {
            if (repo.append_event(e)) {
                added.push_back(e);
            } else {
                ++skipped;
            }
        } catch (const DuplicateId& ex) {
            parsed.diagnostics.push_back({0, std::string(ex.what()) + " (conflicts with stored event)"});
        }
    }

    std::size_t new_indicators = 0;
    for (const auto& ind : ingest::extract_indicators(added)) {
        if (repo.find_indicator(ind.id)) continue;  // history already started
        repo.append_revision(ind.id, ind.revisions.front(), ind.is_precursor);
        ++new_indicators;
    }
    const auto manifest = repo.snapshot();

    json diags = json::array();
    for (const auto& d : parsed.diagnostics) {
        err << path << ':' << d.line_no << ": " << d.reason << '\n';
        diags.push_back(json{{"line", d.line_no}, {"reason", d.reason}});
    }
    if (out.human()) {
        out.stream() << "events added: " << added.size() << ", unchanged: " << skipped
                     << ", new indicators: " << new_indicators << ", rejected lines: " << diags.size() << '\n';
    } else {
        out.record(json{{"type", "ingest"},
                        {"events_added", added.size()},
                        {"events_unchanged", skipped},
                        {"indicators_added", new_indicators},
                        {"diagnostics", diags},
                        {"manifest", store::encode(manifest)}});
    }
    return parsed.diagnostics.empty() ? kExitOk : kExitInputError;
}

int cmd_qualify(const GlobalOptions& g, Output& out, const std::string& sources_path,
                const ingest::QualifyParams& params) {
    out.header("qualify", json{{"sources", sources_path},
                               {"corroboration", params.corroboration_min},
                               {"reliability", params.reliability_min}});
    const auto registry = with_file(sources_path, [](std::istream& in) { return ingest::SourceRegistry::parse(in); });
    auto repo = store::Repository::load(g.repo, store::Repository::Mode::ReadWrite);
    const auto records = ingest::records_from_events(repo.events(), registry);
    const auto items = ingest::qualify(records, params);

    // indicator -> (latest actionable sighting, best reliability)
    std::map<std::string, std::pair<Timestamp, double>> to_validate;
    std::size_t actionable = 0;
    for (std::size_t k = 0; k < items.size(); ++k) {
        const auto& item = items[k];
        if (item.actionable) {
            ++actionable;
            for (const auto& id : item.event.indicators) {
                auto [it, fresh] = to_validate.emplace(id, std::make_pair(item.event.at, records[k].source_reliability));
                if (!fresh) {
                    it->second.first = std::max(it->second.first, item.event.at);
                    it->second.second = std::max(it->second.second, records[k].source_reliability);
                }
            }
        }
        if (out.human()) {
            out.stream() << std::left << std::setw(24) << item.event.id << (item.actionable ? "ACTIONABLE" : "-")
                         << "  processed=" << item.processed << " evaluated=" << item.evaluated
                         << " corroborated=" << item.corroborated << " relevant=" << item.relevant << '\n';
        } else {
            out.record(json{{"type", "item"},
                            {"event", item.event.id},
                            {"processed", item.processed},
                            {"evaluated", item.evaluated},
                            {"corroborated", item.corroborated},
                            {"relevant", item.relevant},
                            {"actionable", item.actionable}});
        }
    }

    std::size_t validated = 0;
    for (const auto& [id, info] : to_validate) {
        const auto* ind = repo.find_indicator(id);
        Timestamp at = info.first;
        if (ind != nullptr && !ind->revisions.empty()) {
            if (ind->revisions.back().status == ValidationStatus::Validated) continue;
            at = std::max(at, ind->revisions.back().at);
        }
        repo.append_revision(id, IndicatorRevision{at, ValidationStatus::Validated, "qualify", info.second,
                                                   "corroborated by reliable sources"});
        ++validated;
    }
    repo.snapshot();

    if (out.human()) {
        out.stream() << "actionable items: " << actionable << ", indicators validated: " << validated << '\n';
    } else {
        out.record(json{{"type", "qualify_summary"}, {"actionable", actionable}, {"validated", validated}});
    }
    return kExitOk;
}

int cmd_chains(const GlobalOptions& g, Output& out, const PipelineOptions& p, bool save) {
    out.header("chains", json{{"gap", p.gap}, {"save", save}});
    auto repo = store::Repository::load(g.repo, save ? store::Repository::Mode::ReadWrite
                                                     : store::Repository::Mode::ReadOnly);
    const auto intrusions = load_intrusions(repo, p.gap);
    for (const auto& i : intrusions) {
        if (save) repo.put_intrusion(i);
        if (out.human()) {
            out.stream() << std::left << std::setw(24) << i.id << "events=" << i.events.size()
                         << "  deepest=" << i.deepest_completed << "  stopped_at="
                         << (i.stopped_at ? phase_name(*i.stopped_at) : "-") << "  "
                         << chains::stop_class_name(chains::classify_stop(i)) << '\n';
        } else {
            out.record(intrusion_summary(i));
        }
    }
    if (save) repo.snapshot();
    return kExitOk;
}

int cmd_correlate(const GlobalOptions& g, Output& out, const PipelineOptions& p, const std::string& profiles_path,
                  double overlap_min, bool save) {
    json params = p.to_json();
    params["profiles"] = profiles_path;
    params["overlap_min"] = overlap_min;
    params["save"] = save;
    out.header("correlate", params);

    const auto cp = p.correlate_params();
    if (!(overlap_min > 0.0 && overlap_min <= 1.0)) throw InvalidArgument("--overlap-min must lie in (0,1]");
    std::vector<campaigns::ActorProfile> profiles;
    if (!profiles_path.empty()) {
        profiles = with_file(profiles_path, [](std::istream& in) { return campaigns::parse_profiles(in); });
    }

    auto repo = store::Repository::load(g.repo, save ? store::Repository::Mode::ReadWrite
                                                     : store::Repository::Mode::ReadOnly);
    const auto intrusions = load_intrusions(repo, p.gap);
    auto found = campaigns::correlate_campaigns(intrusions, cp);
    for (auto& c : found) {
        const auto members = campaigns::members_of(c, intrusions);
        const auto attribution = campaigns::attribution_hypothesis(c, profiles, overlap_min);
        c.actor = attribution.actor;
        const auto trends = campaigns::target_trends(members);
        if (save) repo.put_campaign(c);

        if (out.human()) {
            auto& s = out.stream();
            s << c.id << "  members=" << c.members.size() << "  span=[" << c.span.first << ',' << c.span.second
              << "]  actor=" << actor_name(c.actor);
            if (attribution.ambiguous) s << " (ambiguous)";
            if (!attribution.label.empty()) s << " via " << attribution.label;
            s << '\n';
            for (const auto& k : c.key_indicators) {
                s << "    key " << std::fixed << std::setprecision(3) << k.support << "  " << k.id << '\n';
                s.unsetf(std::ios::floatfield);
            }
            for (const auto& [target, count] : trends) s << "    target " << target << " x" << count << '\n';
        } else {
            json j = json_codec::encode(c);
            j["type"] = "campaign";
            j["attribution"] = json{{"actor", std::string(actor_name(attribution.actor))},
                                    {"score", attribution.score},
                                    {"label", attribution.label},
                                    {"ambiguous", attribution.ambiguous}};
            json tj = json::array();
            for (const auto& [target, count] : trends) tj.push_back(json{{"target", target}, {"count", count}});
            j["target_trends"] = tj;
            out.record(j);
        }
    }
    if (save) repo.snapshot();
    return kExitOk;
}

int cmd_coa_plan(const GlobalOptions& g, Output& out, const PipelineOptions& p, const std::string& caps_path,
                 const std::string& campaign_id) {
    json params = p.to_json();
    params["capabilities"] = caps_path;
    params["campaign"] = campaign_id;
    out.header("coa plan", params);

    const auto caps = with_file(caps_path, [](std::istream& in) { return coa::parse_capabilities(in); });
    const auto matrix = coa::build_matrix(caps);
    const auto repo = store::Repository::load(g.repo);
    const auto intrusions = load_intrusions(repo, p.gap);
    const auto found = campaigns::correlate_campaigns(intrusions, p.correlate_params());
    const auto it = std::find_if(found.begin(), found.end(), [&](const Campaign& c) { return c.id == campaign_id; });
    if (it == found.end()) throw UnknownCampaign(campaign_id);

    const auto coverage = coa::coverage_report(matrix);
    const auto plan = coa::plan_coa(*it, intrusions, matrix);

    if (out.human()) {
        std::set<KillChainPhase> key_phases = plan.gap_warnings;
        for (const auto& r : plan.rows) key_phases.insert(r.phase);
        auto& s = out.stream();
        print_matrix(s, matrix, key_phases);
        s << "proactivity index: " << coverage.proactivity_index << '\n';
        for (const auto& r : plan.rows) {
            s << std::left << std::setw(20) << phase_name(r.phase) << std::setw(9) << action_name(r.action);
            for (const auto& c : r.capabilities) s << c << ' ';
            s << " <- ";
            for (const auto& t : r.triggers) s << t << ' ';
            s << '\n';
        }
        for (auto gp : plan.gap_warnings) s << "WARNING: no capability covers key phase " << phase_name(gp) << '\n';
    } else {
        out.record(json{{"type", "coverage"},
                        {"covered", phase_list(coverage.covered)},
                        {"gaps", phase_list(coverage.gaps)},
                        {"proactivity_index", coverage.proactivity_index}});
        for (const auto& r : plan.rows) {
            out.record(json{{"type", "plan_row"},
                            {"phase", std::string(phase_name(r.phase))},
                            {"ordinal", ordinal(r.phase)},
                            {"action", std::string(action_name(r.action))},
                            {"capabilities", r.capabilities},
                            {"triggers", r.triggers}});
        }
        for (auto gp : plan.gap_warnings) {
            out.record(json{{"type", "gap_warning"}, {"phase", std::string(phase_name(gp))}});
        }
    }
    return kExitOk;
}

int cmd_coa_compare(Output& out, const std::string& caps_path, const std::string& candidates_path,
                    const std::string& weights_text) {
    const auto w = parse_weights(weights_text, 3);
    const coa::Weights weights{w[0], w[1], w[2]};
    out.header("coa compare", json{{"capabilities", caps_path},
                                   {"candidates", candidates_path},
                                   {"weights", json::array({weights.coverage, weights.proactivity, weights.cost})}});

    const auto caps = with_file(caps_path, [](std::istream& in) { return coa::parse_capabilities(in); });
    coa::build_matrix(caps);  // rejects duplicate ids up front
    const auto candidates =
        with_file(candidates_path, [&](std::istream& in) { return coa::parse_candidates(in, caps); });
    const auto ranked = coa::compare_coas(candidates, caps, weights);

    std::size_t rank = 0;
    for (const auto& s : ranked) {
        ++rank;
        if (out.human()) {
            out.stream() << rank << ". " << std::left << std::setw(20) << s.name << std::fixed << std::setprecision(4)
                         << "score=" << s.score << "  coverage=" << s.coverage_term
                         << "  proactivity=" << s.proactivity_term << "  cost=" << s.cost_term << " ("
                         << s.total_cost << ")\n";
            out.stream().unsetf(std::ios::floatfield);
        } else {
            out.record(json{{"type", "candidate_score"},
                            {"rank", rank},
                            {"name", s.name},
                            {"score", s.score},
                            {"coverage_term", s.coverage_term},
                            {"proactivity_term", s.proactivity_term},
                            {"cost_term", s.cost_term},
                            {"total_cost", s.total_cost}});
        }
    }
    if (out.human() && !ranked.empty()) out.stream() << "recommendation: " << ranked.front().name << '\n';
    return kExitOk;
}

int cmd_assess(const GlobalOptions& g, Output& out, const PipelineOptions& p, std::optional<Timestamp> split_at,
               const std::string& caps_path) {
    json params{{"gap", p.gap}, {"split_at", split_at ? json(*split_at) : json(nullptr)}, {"capabilities", caps_path}};
    out.header("assess", params);
    const auto repo = store::Repository::load(g.repo);
    const auto intrusions = load_intrusions(repo, p.gap);
    const auto whole = assess::tactical_assessment(intrusions);

    if (out.human()) {
        print_metrics(out.stream(), "tactical", whole);
    } else {
        json j = metrics_json(whole);
        j["type"] = "tactical";
        out.record(j);
    }
    if (!split_at) return kExitOk;

    const auto op = assess::operational_assessment(intrusions, *split_at);
    std::optional<double> roi;
    if (!caps_path.empty()) {
        const auto caps = with_file(caps_path, [](std::istream& in) { return coa::parse_capabilities(in); });
        double cost = 0.0;
        for (const auto& c : caps) cost += c.cost;
        roi = assess::cost_per_avoided_compromise(op, cost);
    }
    if (out.human()) {
        auto& s = out.stream();
        print_metrics(s, "before", op.before);
        print_metrics(s, "after", op.after);
        s << "posture: " << assess::posture_name(op.posture);
        if (op.before_empty) s << " (before window empty)";
        if (op.after_empty) s << " (after window empty)";
        s << '\n';
        if (roi) s << "estimated cost per avoided compromise: " << *roi << '\n';
    } else {
        out.record(json{{"type", "operational"},
                        {"before", metrics_json(op.before)},
                        {"after", metrics_json(op.after)},
                        {"deltas",
                         {{"proactive_stop_rate", op.deltas.proactive_stop_rate},
                          {"reactive_stop_rate", op.deltas.reactive_stop_rate},
                          {"compromise_rate", op.deltas.compromise_rate},
                          {"no_contact_rate", op.deltas.no_contact_rate},
                          {"mean_deepest", op.deltas.mean_deepest}}},
                        {"posture", std::string(assess::posture_name(op.posture))},
                        {"before_empty", op.before_empty},
                        {"after_empty", op.after_empty},
                        {"cost_per_avoided_compromise_estimate", roi ? json(*roi) : json(nullptr)}});
    }
    return kExitOk;
}

int cmd_simulate(const GlobalOptions& g, Output& out, const std::string& scenario_path, const std::string& save_id) {
    const auto scenario = with_file(scenario_path, [](std::istream& in) { return c2sim::parse_scenario(in); });
    out.header("simulate", json{{"scenario", c2sim::encode(scenario)}});
    const auto result = c2sim::run(scenario);
    const auto encoded = c2sim::encode(result);

    if (!save_id.empty()) {
        auto repo = store::Repository::load(g.repo, store::Repository::Mode::ReadWrite);
        repo.put_simresult(save_id, c2sim::encode(scenario), encoded);
        repo.snapshot();
    }
    if (out.human()) {
        auto& s = out.stream();
        s << "adversary period: " << result.adversary_period << "  defender period: " << result.defender_period
          << "  posture ratio: " << result.posture_ratio << (result.reactive ? "  (adversary reactive)" : "") << '\n';
        s << "deepest phase: " << result.deepest_phase
          << "  stopped at: " << (result.stopped_at ? phase_name(*result.stopped_at) : "-") << "\n\n";
        c2sim::write_timeline_table(s, result);
    } else {
        json j = encoded;
        j["type"] = "simresult";
        out.record(j);
    }
    return kExitOk;
}

int cmd_report(const GlobalOptions& g, Output& out, const PipelineOptions& p, const std::string& caps_path,
               const std::string& profiles_path) {
    json params = p.to_json();
    params["capabilities"] = caps_path;
    params["profiles"] = profiles_path;
    out.header("report", params);

    const auto repo = store::Repository::load(g.repo);
    const auto intrusions = load_intrusions(repo, p.gap);
    const auto found = campaigns::correlate_campaigns(intrusions, p.correlate_params());
    std::vector<campaigns::ActorProfile> profiles;
    if (!profiles_path.empty()) {
        profiles = with_file(profiles_path, [](std::istream& in) { return campaigns::parse_profiles(in); });
    }
    std::optional<coa::CoaMatrix> matrix;
    if (!caps_path.empty()) {
        const auto caps = with_file(caps_path, [](std::istream& in) { return coa::parse_capabilities(in); });
        matrix = coa::build_matrix(caps);
    }
    const auto metrics = assess::tactical_assessment(intrusions);
    const auto manifest = repo.snapshot();

    if (!out.human()) {
        out.record(json{{"type", "manifest"}, {"counts", store::encode(manifest)}});
        for (const auto& [id, ind] : repo.indicators()) {
            json j = json_codec::encode(ind);
            j["type"] = "indicator";
            out.record(j);
        }
        for (const auto& i : intrusions) out.record(intrusion_summary(i));
        for (auto c : found) {
            const auto a = campaigns::attribution_hypothesis(c, profiles);
            c.actor = a.actor;
            json j = json_codec::encode(c);
            j["type"] = "campaign";
            j["ambiguous_attribution"] = a.ambiguous;
            out.record(j);
        }
        json m = metrics_json(metrics);
        m["type"] = "tactical";
        out.record(m);
        if (matrix) {
            const auto cov = coa::coverage_report(*matrix);
            out.record(json{{"type", "coverage"},
                            {"covered", phase_list(cov.covered)},
                            {"gaps", phase_list(cov.gaps)},
                            {"proactivity_index", cov.proactivity_index}});
        }
        return kExitOk;
    }

    auto& s = out.stream();
    s << "\n== Repository\n"
      << "events " << manifest.events << ", indicators " << manifest.indicators << " (" << manifest.indicator_revisions
      << " revisions)\n";
    std::size_t validated = 0, precursors = 0;
    for (const auto& [id, ind] : repo.indicators()) {
        if (!ind.revisions.empty() && ind.revisions.back().status == ValidationStatus::Validated) ++validated;
        if (ind.is_precursor) ++precursors;
    }
    s << "validated indicators " << validated << ", precursors " << precursors << '\n';

    s << "\n== Intrusions (" << intrusions.size() << ")\n";
    for (const auto& i : intrusions) {
        s << std::left << std::setw(24) << i.id << "deepest=" << i.deepest_completed
          << "  stopped_at=" << (i.stopped_at ? phase_name(*i.stopped_at) : "-") << "  "
          << chains::stop_class_name(chains::classify_stop(i)) << '\n';
    }

    s << "\n== Campaigns (" << found.size() << ")\n";
    for (const auto& c : found) {
        const auto a = campaigns::attribution_hypothesis(c, profiles);
        s << c.id << "  members=" << c.members.size() << "  actor=" << actor_name(a.actor)
          << (a.ambiguous ? " (ambiguous)" : "") << '\n';
        for (const auto& k : c.key_indicators) s << "    key " << k.support << "  " << k.id << '\n';
    }

    s << "\n== Assessment\n";
    print_metrics(s, "tactical", metrics);

    if (matrix) {
        s << "\n== Course-of-action matrix\n";
        print_matrix(s, *matrix);
        s << "proactivity index: " << coa::coverage_report(*matrix).proactivity_index << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Threat-intelligence correlation engine and control-loop simulator", "csi"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    if (const char* env = std::getenv("CSI_REPO")) g.repo = env;
    if (g.repo.empty()) g.repo = "csi-repo";
    app.add_option("--repo", g.repo, "Repository directory (default $CSI_REPO or ./csi-repo)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"human", "jsonl"}));

    PipelineOptions p;
    auto add_gap = [&](CLI::App* sub) { sub->add_option("--gap", p.gap, "Intrusion split gap in seconds"); };
    auto add_correlation = [&](CLI::App* sub) {
        add_gap(sub);
        sub->add_option("--threshold", p.threshold, "Similarity threshold in (0,1]");
        sub->add_option("--support", p.support, "Key-indicator support floor in (0,1]");
        sub->add_option("--phase-weights", p.phase_weights, "Eight per-phase similarity weights")->delimiter(',');
    };

    std::string events_path;
    auto* ingest_cmd = app.add_subcommand("ingest", "Ingest an event file into the repository");
    ingest_cmd->add_option("events", events_path, "Event file (JSON Lines)")->required();

    std::string sources_path;
    ingest::QualifyParams qparams;
    auto* qualify_cmd = app.add_subcommand("qualify", "Qualify stored events into actionable intelligence");
    qualify_cmd->add_option("--sources", sources_path, "Source reliability registry")->required();
    qualify_cmd->add_option("--corroboration", qparams.corroboration_min, "Distinct reliable sources required");
    qualify_cmd->add_option("--reliability", qparams.reliability_min, "Minimum source reliability");

    bool save = false;
    auto* chains_cmd = app.add_subcommand("chains", "Reconstruct intrusions");
    add_gap(chains_cmd);
    chains_cmd->add_flag("--save", save, "Persist intrusions to the repository");

    std::string profiles_path;
    double overlap_min = campaigns::kDefaultOverlapMin;
    auto* correlate_cmd = app.add_subcommand("correlate", "Correlate intrusions into campaigns");
    add_correlation(correlate_cmd);
    correlate_cmd->add_option("--profiles", profiles_path, "Actor profile registry");
    correlate_cmd->add_option("--overlap-min", overlap_min, "Attribution overlap floor in (0,1]");
    correlate_cmd->add_flag("--save", save, "Persist campaigns to the repository");

    std::string caps_path, campaign_id, candidates_path, weights_text = "1,1,0.5";
    auto* coa_cmd = app.add_subcommand("coa", "Course-of-action planning");
    coa_cmd->require_subcommand(1);
    auto* plan_cmd = coa_cmd->add_subcommand("plan", "Plan actions against a campaign's key indicators");
    plan_cmd->add_option("--capabilities", caps_path, "Capability registry")->required();
    plan_cmd->add_option("--campaign", campaign_id, "Campaign id")->required();
    add_correlation(plan_cmd);
    auto* compare_cmd = coa_cmd->add_subcommand("compare", "Rank candidate courses of action");
    compare_cmd->add_option("--candidates", candidates_path, "Candidate file")->required();
    compare_cmd->add_option("--capabilities", caps_path, "Capability registry")->required();
    compare_cmd->add_option("--weights", weights_text, "wc,wp,wk");

    std::optional<Timestamp> split_at;
    auto* assess_cmd = app.add_subcommand("assess", "Tactical and operational assessment");
    add_gap(assess_cmd);
    assess_cmd->add_option("--split-at", split_at, "Split timestamp for before/after comparison");
    assess_cmd->add_option("--capabilities", caps_path, "Deployed capabilities, for the cost estimate");

    std::string scenario_path, save_id;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run the two-loop control simulation");
    simulate_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    simulate_cmd->add_option("--save", save_id, "Persist the result under this id");

    auto* report_cmd = app.add_subcommand("report", "Full intelligence report");
    add_correlation(report_cmd);
    report_cmd->add_option("--capabilities", caps_path, "Capability registry");
    report_cmd->add_option("--profiles", profiles_path, "Actor profile registry");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    Output output(out, g.format == "human" ? Format::Human : Format::Jsonl);
    try {
        if (*ingest_cmd) return cmd_ingest(g, output, err, events_path);
        if (*qualify_cmd) return cmd_qualify(g, output, sources_path, qparams);
        if (*chains_cmd) return cmd_chains(g, output, p, save);
        if (*correlate_cmd) return cmd_correlate(g, output, p, profiles_path, overlap_min, save);
        if (*plan_cmd) return cmd_coa_plan(g, output, p, caps_path, campaign_id);
        if (*compare_cmd) return cmd_coa_compare(output, caps_path, candidates_path, weights_text);
        if (*assess_cmd) return cmd_assess(g, output, p, split_at, caps_path);
        if (*simulate_cmd) return cmd_simulate(g, output, scenario_path, save_id);
        if (*report_cmd) return cmd_report(g, output, p, caps_path, profiles_path);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
    err << "error: no command given\n";
    return kExitInputError;
}

}  // namespace csi::cli
