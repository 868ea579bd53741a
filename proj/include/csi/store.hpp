#pragma once

// Append-only, file-backed repository. Each entity kind has its own JSON Lines
// log under the root directory; the in-memory index is a fold over the logs,
// so reloading from disk reproduces it exactly.
//
//   indicators.jsonl   one revision per line (identity fields repeated)
//   events.jsonl       one event per line
//   intrusions.jsonl   derived intrusions, latest record per id wins
//   campaigns.jsonl    derived campaigns, latest record per id wins
//   simresults.jsonl   {"id", "scenario", "result"} records
//   manifest.json      record counts written by snapshot()
//
// A writer holds an exclusive advisory lock on <root>/.lock for the lifetime
// of the Repository object.

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "csi/core_model.hpp"

namespace csi::store {

struct Manifest {
    std::size_t indicators = 0;
    std::size_t indicator_revisions = 0;
    std::size_t events = 0;
    std::size_t intrusions = 0;
    std::size_t campaigns = 0;
    std::size_t simresults = 0;

    friend bool operator==(const Manifest&, const Manifest&) = default;
};

nlohmann::json encode(const Manifest& m);

class Repository {
public:
    enum class Mode { ReadOnly, ReadWrite };

    /// Replays every log under `root`. A missing root is an empty repository
    /// (created on disk in ReadWrite mode). Throws CorruptLog with the file
    /// and line of the first bad record, RepositoryLocked if another writer
    /// holds the lock.
    static Repository load(const std::filesystem::path& root, Mode mode = Mode::ReadOnly);

    Repository(Repository&&) noexcept;
    Repository& operator=(Repository&&) noexcept;
    ~Repository();

    const std::filesystem::path& root() const noexcept { return root_; }
    bool writable() const noexcept { return mode_ == Mode::ReadWrite; }

    // -- indicators ---------------------------------------------------------

    /// Appends to the log, then to memory. The first revision of an unknown id
    /// creates the indicator; kind and value come from the "kind:value" id.
    /// Throws OutOfOrderRevision if rev.at precedes the last revision.
    const Indicator& append_revision(const std::string& id, const IndicatorRevision& rev, bool is_precursor = false);

    /// Throws UnknownIndicator.
    const std::vector<IndicatorRevision>& indicator_history(const std::string& id) const;

    const Indicator* find_indicator(const std::string& id) const;
    const std::map<std::string, Indicator>& indicators() const noexcept { return indicators_; }

    // -- events -------------------------------------------------------------

    /// Returns false (and writes nothing) if an identical event is already
    /// stored; throws DuplicateId if the id exists with different content.
    bool append_event(const Event& e);

    const std::vector<Event>& events() const noexcept { return events_; }

    // -- derived results ----------------------------------------------------

    void put_intrusion(const Intrusion& i);
    void put_campaign(const Campaign& c);
    void put_simresult(const std::string& id, const nlohmann::json& scenario, const nlohmann::json& result);

    const std::map<std::string, Intrusion>& intrusions() const noexcept { return intrusions_; }
    const std::map<std::string, Campaign>& campaigns() const noexcept { return campaigns_; }
    const std::map<std::string, nlohmann::json>& simresults() const noexcept { return simresults_; }

    /// Current counts; also written to manifest.json when writable.
    Manifest snapshot() const;

private:
    Repository(std::filesystem::path root, Mode mode);

    void replay();
    void require_writable() const;
    void append_line(const char* file, const nlohmann::json& record) const;
    const Indicator& apply_revision(const std::string& id, const IndicatorRevision& rev, bool is_precursor);

    std::filesystem::path root_;
    Mode mode_ = Mode::ReadOnly;
    int lock_fd_ = -1;

    std::map<std::string, Indicator> indicators_;
    std::size_t revision_count_ = 0;
    std::vector<Event> events_;
    std::map<std::string, std::size_t> event_index_;
    std::map<std::string, Intrusion> intrusions_;
    std::map<std::string, Campaign> campaigns_;
    std::map<std::string, nlohmann::json> simresults_;
};

}  // namespace csi::store
