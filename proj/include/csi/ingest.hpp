#pragma once

// Event-file parsing, indicator extraction, and qualification of raw records
// into actionable intelligence.

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csi/core_model.hpp"

namespace csi::ingest {

struct Diagnostic {
    std::size_t line_no = 0;
    std::string reason;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ParseResult {
    std::vector<Event> events;
    std::vector<Diagnostic> diagnostics;
};

/// Parses every line, collecting malformed or duplicate ones as diagnostics
/// instead of stopping. Blank lines are skipped.
ParseResult parse_events_lenient(std::istream& in);

/// Strict variant: throws ParseError for the first malformed line, or
/// DuplicateId when an id repeats.
std::vector<Event> parse_events(std::istream& in);

/// Writes one JSON line per event; parse_events reads it back unchanged.
void write_events(std::ostream& out, const std::vector<Event>& events);

/// One Indicator per distinct id, each with a single Unvalidated revision at
/// its earliest sighting. Output sorted by id.
std::vector<Indicator> extract_indicators(const std::vector<Event>& events);

// ---------------------------------------------------------------------------
// Source registry
// ---------------------------------------------------------------------------

inline constexpr double kDefaultReliability = 0.5;

class SourceRegistry {
public:
    SourceRegistry() = default;
    explicit SourceRegistry(std::map<std::string, double> reliability);

    /// JSON Lines with "source" and "reliability" fields.
    static SourceRegistry parse(std::istream& in);

    double reliability(const std::string& source) const;
    const std::map<std::string, double>& entries() const noexcept { return reliability_; }

private:
    std::map<std::string, double> reliability_;
};

// ---------------------------------------------------------------------------
// Qualification
// ---------------------------------------------------------------------------

struct RawRecord {
    std::optional<Event> payload;  // empty when the line failed to parse
    std::size_t line_no = 1;
    std::string source;
    double source_reliability = kDefaultReliability;
    std::set<std::string> relevance_tags;
};

struct IntelligenceItem {
    Event event;
    std::size_t line_no = 0;
    bool processed = false;
    bool evaluated = false;
    bool corroborated = false;
    bool relevant = false;
    bool actionable = false;
};

struct QualifyParams {
    int corroboration_min = 2;
    double reliability_min = 0.5;
};

/// Builds one record per event, taking the source from the event's sensor and
/// the relevance tags from the event's tags.
std::vector<RawRecord> records_from_events(const std::vector<Event>& events, const SourceRegistry& registry);

/// Throws InvalidArgument when corroboration_min < 1 or reliability_min is
/// outside [0,1].
std::vector<IntelligenceItem> qualify(const std::vector<RawRecord>& records, const QualifyParams& params);

}  // namespace csi::ingest
