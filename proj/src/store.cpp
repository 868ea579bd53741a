#include "csi/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <utility>

#include "csi/errors.hpp"
#include "csi/json_codec.hpp"

namespace csi::store {

namespace fs = std::filesystem;
using json_codec::json;

namespace {

constexpr const char* kIndicatorsLog = "indicators.jsonl";
constexpr const char* kEventsLog = "events.jsonl";
constexpr const char* kIntrusionsLog = "intrusions.jsonl";
constexpr const char* kCampaignsLog = "campaigns.jsonl";
constexpr const char* kSimResultsLog = "simresults.jsonl";
constexpr const char* kManifest = "manifest.json";
constexpr const char* kLockFile = ".lock";

// Replays one log; any malformed line is fatal and reported by position.
template <typename Fn>
void replay_log(const fs::path& root, const char* name, Fn&& apply) {
    std::ifstream in(root / name);
    if (!in) return;
    json_codec::for_each_line(
        in,
        [&](std::size_t line_no, const json& j) {
            try {
                apply(j);
            } catch (const InputError& ex) {
                throw CorruptLog(name, line_no, ex.what());
            } catch (const json::exception& ex) {
                throw CorruptLog(name, line_no, ex.what());
            }
        },
        [&](std::size_t line_no, const std::string& reason) { throw CorruptLog(name, line_no, reason); });
}

}  // namespace

json encode(const Manifest& m) {
    return json{{"indicators", m.indicators}, {"indicator_revisions", m.indicator_revisions},
                {"events", m.events},         {"intrusions", m.intrusions},
                {"campaigns", m.campaigns},   {"simresults", m.simresults}};
}

Repository::Repository(fs::path root, Mode mode) : root_(std::move(root)), mode_(mode) {}

Repository::Repository(Repository&& other) noexcept
    : root_(std::move(other.root_)),
      mode_(other.mode_),
      lock_fd_(std::exchange(other.lock_fd_, -1)),
      indicators_(std::move(other.indicators_)),
      revision_count_(other.revision_count_),
      events_(std::move(other.events_)),
      event_index_(std::move(other.event_index_)),
      intrusions_(std::move(other.intrusions_)),
      campaigns_(std::move(other.campaigns_)),
      simresults_(std::move(other.simresults_)) {}

Repository& Repository::operator=(Repository&& other) noexcept {
    if (this != &other) {
        if (lock_fd_ >= 0) ::close(lock_fd_);
        root_ = std::move(other.root_);
        mode_ = other.mode_;
        lock_fd_ = std::exchange(other.lock_fd_, -1);
        indicators_ = std::move(other.indicators_);
        revision_count_ = other.revision_count_;
        events_ = std::move(other.events_);
        event_index_ = std::move(other.event_index_);
        intrusions_ = std::move(other.intrusions_);
        campaigns_ = std::move(other.campaigns_);
        simresults_ = std::move(other.simresults_);
    }
    return *this;
}

Repository::~Repository() {
    if (lock_fd_ >= 0) ::close(lock_fd_);  // closing drops the flock
}

Repository Repository::load(const fs::path& root, Mode mode) {
    Repository repo(root, mode);
    if (mode == Mode::ReadWrite) {
        fs::create_directories(root);
        repo.lock_fd_ = ::open((root / kLockFile).c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
        if (repo.lock_fd_ < 0) throw InputError("cannot open lock file in " + root.string());
        if (::flock(repo.lock_fd_, LOCK_EX | LOCK_NB) != 0) throw RepositoryLocked(root.string());
    }
    repo.replay();
    return repo;
}

void Repository::replay() {
    replay_log(root_, kIndicatorsLog, [&](const json& j) {
        const auto id = json_codec::require_string(j, "id");
        apply_revision(id, json_codec::decode_revision(j), j.value("is_precursor", false));
    });
    replay_log(root_, kEventsLog, [&](const json& j) {
        auto e = json_codec::decode_event(j);
        if (event_index_.count(e.id)) throw DuplicateId(e.id);
        event_index_.emplace(e.id, events_.size());
        events_.push_back(std::move(e));
    });
    replay_log(root_, kIntrusionsLog, [&](const json& j) {
        auto i = json_codec::decode_intrusion(j);
        intrusions_[i.id] = std::move(i);
    });
    replay_log(root_, kCampaignsLog, [&](const json& j) {
        auto c = json_codec::decode_campaign(j);
        campaigns_[c.id] = std::move(c);
    });
    replay_log(root_, kSimResultsLog, [&](const json& j) {
        const auto id = json_codec::require_string(j, "id");
        json_codec::require(j, "result");
        simresults_[id] = j;
    });
}

void Repository::require_writable() const {
    if (mode_ != Mode::ReadWrite) throw InvalidArgument("repository " + root_.string() + " is opened read-only");
}

void Repository::append_line(const char* file, const json& record) const {
    std::ofstream out(root_ / file, std::ios::app | std::ios::binary);
    out << json_codec::dump_line(record) << '\n';
    out.flush();
    if (!out) throw Error("write failed: " + (root_ / file).string());
}

const Indicator& Repository::apply_revision(const std::string& raw_id, const IndicatorRevision& rev,
                                            bool is_precursor) {
    check_revision(rev);
    const auto ref = parse_indicator_ref(raw_id);
    if (!ref) throw InvalidArgument("bad indicator id '" + raw_id + "'");
    const auto id = ref->id();

    auto it = indicators_.find(id);
    if (it == indicators_.end()) {
        Indicator ind;
        ind.id = id;
        ind.kind = ref->kind;
        ind.value = ref->value;
        ind.is_precursor = is_precursor;
        it = indicators_.emplace(id, std::move(ind)).first;
    } else if (!it->second.revisions.empty() && rev.at < it->second.revisions.back().at) {
        throw OutOfOrderRevision(id, rev.at, it->second.revisions.back().at);
    }
    it->second.revisions.push_back(rev);
    ++revision_count_;
    return it->second;
}

const Indicator& Repository::append_revision(const std::string& id, const IndicatorRevision& rev, bool is_precursor) {
    require_writable();
    check_revision(rev);
    const auto ref = parse_indicator_ref(id);
    if (!ref) throw InvalidArgument("bad indicator id '" + id + "'");

    Indicator proto;
    proto.id = ref->id();
    proto.kind = ref->kind;
    proto.value = ref->value;
    proto.is_precursor = is_precursor;
    if (const auto* existing = find_indicator(proto.id)) {
        if (!existing->revisions.empty() && rev.at < existing->revisions.back().at) {
            throw OutOfOrderRevision(proto.id, rev.at, existing->revisions.back().at);
        }
        proto.is_precursor = existing->is_precursor;
    }
    append_line(kIndicatorsLog, json_codec::encode_revision_record(proto, rev));
    return apply_revision(proto.id, rev, proto.is_precursor);
}

const std::vector<IndicatorRevision>& Repository::indicator_history(const std::string& id) const {
    const auto* ind = find_indicator(id);
    if (ind == nullptr) throw UnknownIndicator(id);
    return ind->revisions;
}

const Indicator* Repository::find_indicator(const std::string& id) const {
    auto it = indicators_.find(id);
    if (it == indicators_.end()) {
        // accept un-normalized spellings such as "domain:EVIL.example"
        if (const auto ref = parse_indicator_ref(id)) it = indicators_.find(ref->id());
    }
    return it == indicators_.end() ? nullptr : &it->second;
}

bool Repository::append_event(const Event& e) {
    require_writable();
    if (const auto it = event_index_.find(e.id); it != event_index_.end()) {
        if (events_[it->second] == e) return false;
        throw DuplicateId(e.id);
    }
    append_line(kEventsLog, json_codec::encode(e));
    event_index_.emplace(e.id, events_.size());
    events_.push_back(e);
    return true;
}

void Repository::put_intrusion(const Intrusion& i) {
    require_writable();
    append_line(kIntrusionsLog, json_codec::encode(i));
    intrusions_[i.id] = i;
}

void Repository::put_campaign(const Campaign& c) {
    require_writable();
    append_line(kCampaignsLog, json_codec::encode(c));
    campaigns_[c.id] = c;
}

void Repository::put_simresult(const std::string& id, const json& scenario, const json& result) {
    require_writable();
    json record{{"id", id}, {"scenario", scenario}, {"result", result}};
    append_line(kSimResultsLog, record);
    simresults_[id] = std::move(record);
}

Manifest Repository::snapshot() const {
    Manifest m;
    m.indicators = indicators_.size();
    m.indicator_revisions = revision_count_;
    m.events = events_.size();
    m.intrusions = intrusions_.size();
    m.campaigns = campaigns_.size();
    m.simresults = simresults_.size();
    if (writable()) {
        const auto tmp = root_ / (std::string(kManifest) + ".tmp");
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << encode(m).dump(2) << '\n';
            if (!out) throw Error("write failed: " + tmp.string());
        }
        fs::rename(tmp, root_ / kManifest);
    }
    return m;
}

}  // namespace csi::store
