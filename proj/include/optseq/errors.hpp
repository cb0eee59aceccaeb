#pragma once

#include <stdexcept>
#include <string>

namespace optseq {

// Exit codes used by the command-line tool. Each error type maps to one.
enum class ExitCode : int { Ok = 0, Config = 2, Precondition = 3, Io = 4 };

class Error : public std::runtime_error {
public:
    Error(const std::string& what, ExitCode code) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("configuration error: " + what, ExitCode::Config) {}
};

// Violated argument contracts (negative distances, non-unit quaternions, ...).
struct ContractError : Error {
    explicit ContractError(const std::string& what) : Error("contract violation: " + what, ExitCode::Precondition) {}
};

struct PreconditionError : Error {
    PreconditionError(const std::string& what, std::string predicate = {})
        : Error("precondition failed: " + what, ExitCode::Precondition), predicate_(std::move(predicate)) {}
    const std::string& predicate() const noexcept { return predicate_; }

private:
    std::string predicate_;
};

struct ProvenanceError : Error {
    explicit ProvenanceError(const std::string& what) : Error("provenance error: " + what, ExitCode::Precondition) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("I/O error: " + what, ExitCode::Io) {}
};

}  // namespace optseq
