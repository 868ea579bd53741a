#include "csi/json_codec.hpp"

#include <string_view>

#include "csi/errors.hpp"

namespace csi::json_codec {

namespace {

std::set<std::string> decode_string_set(const json& j, const char* key) {
    const auto& arr = require(j, key);
    if (!arr.is_array()) throw InvalidArgument(std::string("field '") + key + "' must be an array");
    std::set<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw InvalidArgument(std::string("field '") + key + "' must hold strings");
        out.insert(v.get<std::string>());
    }
    return out;
}

std::set<std::string> decode_indicator_ids(const json& j, const char* key) {
    std::set<std::string> out;
    for (const auto& raw : decode_string_set(j, key)) {
        const auto ref = parse_indicator_ref(raw);
        if (!ref) throw InvalidArgument("bad indicator reference '" + raw + "'");
        out.insert(ref->id());
    }
    return out;
}

KillChainPhase decode_phase(const json& j, const char* key) {
    const auto name = require_string(j, key);
    const auto p = parse_phase(name);
    if (!p) throw InvalidArgument("unknown phase '" + name + "'");
    return *p;
}

}  // namespace

const json& require(const json& j, const char* key) {
    if (!j.is_object()) throw InvalidArgument("record is not a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw InvalidArgument(std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_string()) throw InvalidArgument(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::int64_t require_int(const json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number_integer()) throw InvalidArgument(std::string("field '") + key + "' must be an integer");
    return v.get<std::int64_t>();
}

double require_number(const json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number()) throw InvalidArgument(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

json encode(const Event& e) {
    json j{{"id", e.id},
           {"at", e.at},
           {"target", e.target},
           {"sensor", e.sensor},
           {"phase", std::string(phase_name(e.phase))},
           {"outcome", std::string(outcome_name(e.outcome))},
           {"indicators", e.indicators}};
    if (!e.tags.empty()) j["tags"] = e.tags;
    return j;
}

Event decode_event(const json& j) {
    Event e;
    e.id = require_string(j, "id");
    if (e.id.empty()) throw InvalidArgument("empty event id");
    e.at = require_int(j, "at");
    if (e.at < 0) throw InvalidArgument("negative timestamp");
    e.target = require_string(j, "target");
    e.sensor = require_string(j, "sensor");
    e.phase = decode_phase(j, "phase");
    const auto outcome = require_string(j, "outcome");
    const auto o = parse_outcome(outcome);
    if (!o) throw InvalidArgument("unknown outcome '" + outcome + "'");
    e.outcome = *o;
    e.indicators = decode_indicator_ids(j, "indicators");
    if (j.contains("tags")) e.tags = decode_string_set(j, "tags");
    if (e.outcome == EventOutcome::Succeeded && e.indicators.empty()) {
        throw InvalidArgument("succeeded event without indicators");
    }
    return e;
}

json encode(const IndicatorRevision& r) {
    return json{{"at", r.at},
                {"status", std::string(status_name(r.status))},
                {"source", r.source},
                {"confidence", r.confidence},
                {"note", r.note}};
}

IndicatorRevision decode_revision(const json& j) {
    IndicatorRevision r;
    r.at = require_int(j, "at");
    const auto status = require_string(j, "status");
    const auto s = parse_status(status);
    if (!s) throw InvalidArgument("unknown status '" + status + "'");
    r.status = *s;
    r.source = require_string(j, "source");
    r.confidence = require_number(j, "confidence");
    r.note = j.value("note", std::string{});
    check_revision(r);
    return r;
}

json encode_revision_record(const Indicator& ind, const IndicatorRevision& r) {
    json j = encode(r);
    j["id"] = ind.id;
    j["kind"] = std::string(kind_name(ind.kind));
    j["value"] = ind.value;
    j["is_precursor"] = ind.is_precursor;
    return j;
}

json encode(const Indicator& ind) {
    json revs = json::array();
    for (const auto& r : ind.revisions) revs.push_back(encode(r));
    return json{{"id", ind.id},
                {"kind", std::string(kind_name(ind.kind))},
                {"value", ind.value},
                {"is_precursor", ind.is_precursor},
                {"revisions", revs}};
}

json encode(const Intrusion& i) {
    json events = json::array();
    for (const auto& e : i.events) events.push_back(encode(e));
    json phases = json::object();
    for (const auto& [phase, ids] : i.phase_indicators) phases[std::string(phase_name(phase))] = ids;
    return json{{"id", i.id},
                {"target", i.target},
                {"events", events},
                {"phase_indicators", phases},
                {"deepest_completed", i.deepest_completed},
                {"stopped_at", i.stopped_at ? json(std::string(phase_name(*i.stopped_at))) : json(nullptr)}};
}

Intrusion decode_intrusion(const json& j) {
    Intrusion i;
    i.id = require_string(j, "id");
    i.target = require_string(j, "target");
    const auto& events = require(j, "events");
    if (!events.is_array()) throw InvalidArgument("field 'events' must be an array");
    for (const auto& e : events) i.events.push_back(decode_event(e));
    const auto& phases = require(j, "phase_indicators");
    if (!phases.is_object()) throw InvalidArgument("field 'phase_indicators' must be an object");
    for (const auto& [name, ids] : phases.items()) {
        const auto p = parse_phase(name);
        if (!p) throw InvalidArgument("unknown phase '" + name + "'");
        i.phase_indicators[*p] = ids.get<std::set<std::string>>();
    }
    i.deepest_completed = static_cast<int>(require_int(j, "deepest_completed"));
    const auto& stop = require(j, "stopped_at");
    if (!stop.is_null()) i.stopped_at = decode_phase(j, "stopped_at");
    return i;
}

json encode(const Campaign& c) {
    json keys = json::array();
    for (const auto& k : c.key_indicators) keys.push_back(json{{"id", k.id}, {"support", k.support}});
    return json{{"id", c.id},
                {"members", c.members},
                {"threshold", c.threshold},
                {"key_indicators", keys},
                {"span", json::array({c.span.first, c.span.second})},
                {"actor", std::string(actor_name(c.actor))}};
}

Campaign decode_campaign(const json& j) {
    Campaign c;
    c.id = require_string(j, "id");
    c.members = decode_string_set(j, "members");
    if (c.members.empty()) throw InvalidArgument("campaign without members");
    c.threshold = require_number(j, "threshold");
    for (const auto& k : require(j, "key_indicators")) {
        c.key_indicators.push_back({require_string(k, "id"), require_number(k, "support")});
    }
    const auto& span = require(j, "span");
    if (!span.is_array() || span.size() != 2) throw InvalidArgument("field 'span' must be a pair");
    c.span = {span[0].get<Timestamp>(), span[1].get<Timestamp>()};
    const auto actor = require_string(j, "actor");
    const auto a = parse_actor(actor);
    if (!a) throw InvalidArgument("unknown actor class '" + actor + "'");
    c.actor = *a;
    return c;
}

json encode(const Capability& c) {
    json cov = json::array();
    for (const auto& pa : c.coverage) cov.push_back(phase_action_name(pa));
    return json{{"id", c.id}, {"name", c.name}, {"cost", c.cost}, {"coverage", cov}};
}

Capability decode_capability(const json& j) {
    Capability c;
    c.id = require_string(j, "id");
    if (c.id.empty()) throw InvalidArgument("empty capability id");
    c.name = j.contains("name") ? require_string(j, "name") : c.id;
    c.cost = require_number(j, "cost");
    for (const auto& raw : decode_string_set(j, "coverage")) {
        const auto pa = parse_phase_action(raw);
        if (!pa) throw InvalidArgument("bad coverage entry '" + raw + "'");
        c.coverage.insert(*pa);
    }
    check_capability(c);
    return c;
}

json encode(const LoopDelays& d) {
    return json{{"dead_time", d.dead_time},
                {"time_constant", d.time_constant},
                {"info_delay", d.info_delay},
                {"decision_time", d.decision_time}};
}

LoopDelays decode_delays(const json& j) {
    LoopDelays d;
    d.dead_time = require_int(j, "dead_time");
    d.time_constant = require_number(j, "time_constant");
    d.info_delay = require_int(j, "info_delay");
    d.decision_time = require_int(j, "decision_time");
    check_delays(d);
    return d;
}

void for_each_line(std::istream& in,
                   const std::function<void(std::size_t, const json&)>& fn,
                   const std::function<void(std::size_t, const std::string&)>& on_error) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json parsed;
        try {
            parsed = json::parse(line);
        } catch (const json::parse_error&) {
            on_error(line_no, "malformed JSON");
            continue;
        }
        fn(line_no, parsed);
    }
}

std::string dump_line(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

}  // namespace csi::json_codec
