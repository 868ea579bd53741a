#include "csi/ingest.hpp"

#include <algorithm>
#include <ostream>

#include "csi/errors.hpp"
#include "csi/json_codec.hpp"

namespace csi::ingest {

using json_codec::json;

ParseResult parse_events_lenient(std::istream& in) {
    ParseResult result;
    std::map<std::string, std::size_t> seen;  // id -> line
    json_codec::for_each_line(
        in,
        [&](std::size_t line_no, const json& j) {
            Event e;
            try {
                e = json_codec::decode_event(j);
            } catch (const InvalidArgument& ex) {
                result.diagnostics.push_back({line_no, ex.what()});
                return;
            } catch (const json::exception& ex) {
                result.diagnostics.push_back({line_no, ex.what()});
                return;
            }
            if (const auto [it, inserted] = seen.emplace(e.id, line_no); !inserted) {
                result.diagnostics.push_back(
                    {line_no, "duplicate id '" + e.id + "' (first on line " + std::to_string(it->second) + ")"});
                return;
            }
            result.events.push_back(std::move(e));
        },
        [&](std::size_t line_no, const std::string& reason) { result.diagnostics.push_back({line_no, reason}); });
    return result;
}

std::vector<Event> parse_events(std::istream& in) {
    std::vector<Event> events;
    std::set<std::string> seen;
    json_codec::for_each_line(
        in,
        [&](std::size_t line_no, const json& j) {
            Event e;
            try {
                e = json_codec::decode_event(j);
            } catch (const InvalidArgument& ex) {
                throw ParseError(line_no, ex.what());
            } catch (const json::exception& ex) {
                throw ParseError(line_no, ex.what());
            }
            if (!seen.insert(e.id).second) throw DuplicateId(e.id);
            events.push_back(std::move(e));
        },
        [](std::size_t line_no, const std::string& reason) { throw ParseError(line_no, reason); });
    return events;
}

void write_events(std::ostream& out, const std::vector<Event>& events) {
    for (const auto& e : events) out << json_codec::dump_line(json_codec::encode(e)) << '\n';
}

std::vector<Indicator> extract_indicators(const std::vector<Event>& events) {
    struct Sighting {
        const Event* first = nullptr;
        bool all_proactive = true;
    };
    std::map<std::string, Sighting> sightings;
    for (const auto& e : events) {
        for (const auto& id : e.indicators) {
            auto& s = sightings[id];
            // earliest time wins; equal times fall back to the smaller event id
            if (s.first == nullptr || e.at < s.first->at || (e.at == s.first->at && e.id < s.first->id)) {
                s.first = &e;
            }
            s.all_proactive = s.all_proactive && is_proactive_phase(e.phase);
        }
    }

    std::vector<Indicator> out;
    out.reserve(sightings.size());
    for (const auto& [id, s] : sightings) {
        const auto ref = parse_indicator_ref(id);
        if (!ref) throw InvariantViolation("event carries unparseable indicator id " + id);
        Indicator ind;
        ind.id = id;
        ind.kind = ref->kind;
        ind.value = ref->value;
        // only ever seen ahead of exploitation: a sign of potential, not actual, impact
        ind.is_precursor = s.all_proactive;
        ind.revisions.push_back(IndicatorRevision{
            s.first->at, ValidationStatus::Unvalidated, s.first->sensor, kDefaultReliability,
            "first sighting in event " + s.first->id});
        out.push_back(std::move(ind));
    }
    return out;
}

SourceRegistry::SourceRegistry(std::map<std::string, double> reliability)
    : reliability_(std::move(reliability)) {
    for (const auto& [source, r] : reliability_) {
        if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("reliability of " + source + " outside [0,1]");
    }
}

SourceRegistry SourceRegistry::parse(std::istream& in) {
    std::map<std::string, double> entries;
    json_codec::for_each_line(
        in,
        [&](std::size_t line_no, const json& j) {
            try {
                const auto source = json_codec::require_string(j, "source");
                const double r = json_codec::require_number(j, "reliability");
                if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("reliability outside [0,1]");
                if (!entries.emplace(source, r).second) throw InvalidArgument("duplicate source '" + source + "'");
            } catch (const InvalidArgument& ex) {
                throw ParseError(line_no, ex.what());
            }
        },
        [](std::size_t line_no, const std::string& reason) { throw ParseError(line_no, reason); });
    return SourceRegistry(std::move(entries));
}

double SourceRegistry::reliability(const std::string& source) const {
    const auto it = reliability_.find(source);
    return it == reliability_.end() ? kDefaultReliability : it->second;
}

std::vector<RawRecord> records_from_events(const std::vector<Event>& events, const SourceRegistry& registry) {
    std::vector<RawRecord> out;
    out.reserve(events.size());
    std::size_t line_no = 0;
    for (const auto& e : events) {
        out.push_back(RawRecord{e, ++line_no, e.sensor, registry.reliability(e.sensor), e.tags});
    }
    return out;
}

std::vector<IntelligenceItem> qualify(const std::vector<RawRecord>& records, const QualifyParams& params) {
    if (params.corroboration_min < 1) throw InvalidArgument("corroboration_min must be >= 1");
    if (!(params.reliability_min >= 0.0 && params.reliability_min <= 1.0)) {
        throw InvalidArgument("reliability_min must lie in [0,1]");
    }

    // indicator id -> distinct reliable sources reporting it
    std::map<std::string, std::set<std::string>> reliable_sources;
    for (const auto& r : records) {
        if (!r.payload || r.source_reliability < params.reliability_min) continue;
        for (const auto& id : r.payload->indicators) reliable_sources[id].insert(r.source);
    }
    const auto needed = static_cast<std::size_t>(params.corroboration_min);

    std::vector<IntelligenceItem> items;
    items.reserve(records.size());
    for (const auto& r : records) {
        IntelligenceItem item;
        item.line_no = r.line_no;
        item.processed = r.payload.has_value();
        if (item.processed) {
            item.event = *r.payload;
            item.evaluated = r.source_reliability >= params.reliability_min;
            item.corroborated = std::any_of(r.payload->indicators.begin(), r.payload->indicators.end(),
                                            [&](const std::string& id) {
                                                const auto it = reliable_sources.find(id);
                                                return it != reliable_sources.end() && it->second.size() >= needed;
                                            });
            item.relevant = !r.relevance_tags.empty();
        }
        item.actionable = item.processed && item.evaluated && item.corroborated && item.relevant;
        items.push_back(std::move(item));
    }
    return items;
}

}  // namespace csi::ingest
