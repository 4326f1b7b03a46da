#pragma once

#include <stdexcept>
#include <string>

namespace betadyn {

// Base for everything this library throws on a domain-level failure.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An interval/enclosure could not be resolved at the precision ceiling.
class AmbiguousError : public Error {
public:
    explicit AmbiguousError(const std::string& what) : Error("ambiguous: " + what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain: " + what) {}
};

// Simple-Parry termination could not be certified within the probe depth.
class UndecidedParryError : public Error {
public:
    explicit UndecidedParryError(const std::string& what) : Error("undecided-parry: " + what) {}
};

class NotAdmissibleError : public Error {
public:
    explicit NotAdmissibleError(const std::string& what) : Error("not-admissible: " + what) {}
};

class InvalidTruncationError : public Error {
public:
    explicit InvalidTruncationError(const std::string& what) : Error("invalid-truncation: " + what) {}
};

class DegenerateRootError : public Error {
public:
    explicit DegenerateRootError(const std::string& what) : Error("degenerate-root: " + what) {}
};

class BudgetExceededError : public Error {
public:
    explicit BudgetExceededError(const std::string& what) : Error("budget-exceeded: " + what) {}
};

class AutomatonUnavailableError : public Error {
public:
    explicit AutomatonUnavailableError(const std::string& what) : Error("automaton-unavailable: " + what) {}
};

class RegimeUnsupportedError : public Error {
public:
    explicit RegimeUnsupportedError(const std::string& what) : Error("regime-unsupported: " + what) {}
};

class SparsityViolatedError : public Error {
public:
    explicit SparsityViolatedError(const std::string& what) : Error("sparsity-violated: " + what) {}
};

class ConditionViolatedError : public Error {
public:
    explicit ConditionViolatedError(const std::string& what) : Error("condition-violated: " + what) {}
};

class SlotLengthMismatchError : public Error {
public:
    explicit SlotLengthMismatchError(const std::string& what) : Error("slot-length-mismatch: " + what) {}
};

class PreconditionViolatedError : public Error {
public:
    explicit PreconditionViolatedError(const std::string& what) : Error("precondition-violated: " + what) {}
};

} // namespace betadyn
