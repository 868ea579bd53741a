#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csi {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, out-of-range parameters, unknown ids.
/// The CLI maps these to exit code 1.
class InputError : public Error {
public:
    using Error::Error;
};

/// A broken internal invariant. The CLI maps these to exit code 2.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public InputError {
public:
    using InputError::InputError;
};

class ParseError : public InputError {
public:
    ParseError(std::size_t line_no, const std::string& reason)
        : InputError("line " + std::to_string(line_no) + ": " + reason),
          line_no_(line_no), reason_(reason) {}

    std::size_t line_no() const noexcept { return line_no_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_no_;
    std::string reason_;
};

class DuplicateId : public InputError {
public:
    explicit DuplicateId(const std::string& id)
        : InputError("duplicate id: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class DuplicateCapabilityId : public InputError {
public:
    explicit DuplicateCapabilityId(const std::string& id)
        : InputError("duplicate capability id: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class UnknownCapability : public InputError {
public:
    explicit UnknownCapability(const std::string& id)
        : InputError("unknown capability: " + id) {}
};

class EmptyCandidateSet : public InputError {
public:
    EmptyCandidateSet() : InputError("no course-of-action candidates given") {}
};

class UnknownMember : public InputError {
public:
    explicit UnknownMember(const std::string& id)
        : InputError("campaign member not found: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class UnknownCampaign : public InputError {
public:
    explicit UnknownCampaign(const std::string& id)
        : InputError("unknown campaign: " + id) {}
};

class UnknownIndicator : public InputError {
public:
    explicit UnknownIndicator(const std::string& id)
        : InputError("unknown indicator: " + id) {}
};

class OutOfOrderRevision : public InputError {
public:
    OutOfOrderRevision(const std::string& id, long long at, long long last_at)
        : InputError("revision for " + id + " at " + std::to_string(at) +
                     " precedes last revision at " + std::to_string(last_at)) {}
};

class CorruptLog : public InputError {
public:
    CorruptLog(const std::string& file, std::size_t line_no, const std::string& reason)
        : InputError(file + ":" + std::to_string(line_no) + ": corrupt record: " + reason),
          file_(file), line_no_(line_no) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::string file_;
    std::size_t line_no_;
};

class RepositoryLocked : public InputError {
public:
    explicit RepositoryLocked(const std::string& root)
        : InputError("repository is locked by another writer: " + root) {}
};

/// Raised when the adversary loop period is zero.
class DegenerateLoop : public InputError {
public:
    DegenerateLoop() : InputError("adversary loop period is 0 ticks") {}
};

}  // namespace csi
