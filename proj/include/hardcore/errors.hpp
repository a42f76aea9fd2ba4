#pragma once
// Error taxonomy. Every failure the library reports deliberately is one of
// the five kinds below; anything else escaping is a bug.

#include <stdexcept>
#include <string>
#include <utility>

#include "hardcore/interval.hpp"

namespace hardcore {

enum class ErrorKind {
    InvalidInput,      // malformed or out-of-contract input
    BudgetExceeded,    // a hard resource cap was hit with nothing usable
    NoConvergence,     // accuracy target missed; best bracket is attached
    NotReducible,      // the requested reduction does not exist
    OracleUnsupported, // reference method cannot certify this instance
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::NotReducible: return "NotReducible";
        case ErrorKind::OracleUnsupported: return "OracleUnsupported";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& w) : Error(ErrorKind::InvalidInput, w) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& w) : Error(ErrorKind::BudgetExceeded, w) {}
};

struct NotReducible : Error {
    explicit NotReducible(const std::string& w) : Error(ErrorKind::NotReducible, w) {}
};

struct OracleUnsupported : Error {
    explicit OracleUnsupported(const std::string& w) : Error(ErrorKind::OracleUnsupported, w) {}
};

// Carries the best certified interval reached before the accuracy target was
// given up on, so callers can still report a sound (if wide) answer.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& w, CertifiedInterval best)
        : Error(ErrorKind::NoConvergence, w), best_(std::move(best)) {
        best_.certified = false;
    }
    const CertifiedInterval& best() const { return best_; }

private:
    CertifiedInterval best_;
};

} // namespace hardcore
