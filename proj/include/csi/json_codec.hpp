#pragma once

// JSON encoding of the domain types. Every record type used in event files,
// registries and repository logs goes through here so that readers and
// writers agree on one schema.
//
// Decoders throw InvalidArgument with a short reason; callers that know the
// line number rewrap it as ParseError or CorruptLog.

#include <functional>
#include <istream>
#include <string>

#include <json.hpp>

#include "csi/core_model.hpp"

namespace csi::json_codec {

using nlohmann::json;

json encode(const Event& e);
Event decode_event(const json& j);

json encode(const IndicatorRevision& r);
IndicatorRevision decode_revision(const json& j);

/// One indicators.jsonl record: identity fields plus a single revision.
json encode_revision_record(const Indicator& ind, const IndicatorRevision& r);

json encode(const Indicator& ind);

json encode(const Intrusion& i);
Intrusion decode_intrusion(const json& j);

json encode(const Campaign& c);
Campaign decode_campaign(const json& j);

json encode(const Capability& c);
Capability decode_capability(const json& j);

json encode(const LoopDelays& d);
LoopDelays decode_delays(const json& j);

/// Strict field accessors used by decoders.
const json& require(const json& j, const char* key);
std::string require_string(const json& j, const char* key);
std::int64_t require_int(const json& j, const char* key);
double require_number(const json& j, const char* key);

/// Calls `fn(line_no, parsed)` for every non-blank line. Lines that are not
/// valid JSON are reported through `on_error(line_no, reason)`.
void for_each_line(std::istream& in,
                   const std::function<void(std::size_t, const json&)>& fn,
                   const std::function<void(std::size_t, const std::string&)>& on_error);

/// Compact single-line dump used for every structured output.
std::string dump_line(const json& j);

}  // namespace csi::json_codec
