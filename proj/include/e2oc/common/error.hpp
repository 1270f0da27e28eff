#pragma once

#include <stdexcept>
#include <string>

namespace e2oc {

/// Base of every error raised by the library. The kind is a stable string so
/// callers (and the CLI error record) can branch on it without RTTI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& m) : Error("dimension", m) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& m, int line)
        : Error("parse", "line " + std::to_string(line) + ": " + m), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class InfeasibleEncoding : public Error {
public:
    explicit InfeasibleEncoding(const std::string& m) : Error("infeasible-encoding", m) {}
};

class ContractError : public Error {
public:
    explicit ContractError(const std::string& m) : Error("contract", m) {}
};

class OperatorFailure : public Error {
public:
    explicit OperatorFailure(const std::string& m) : Error("operator-failure", m) {}
};

class ProtocolError : public Error {
public:
    explicit ProtocolError(const std::string& m) : Error("protocol", m) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& m) : Error("config", m) {}
};

class BackendError : public Error {
public:
    explicit BackendError(const std::string& m) : Error("backend", m) {}
};

class BudgetExhausted : public Error {
public:
    explicit BudgetExhausted(const std::string& m) : Error("budget-exhausted", m) {}
};

class UndefinedBaseline : public Error {
public:
    explicit UndefinedBaseline(const std::string& m) : Error("undefined-baseline", m) {}
};

}  // namespace e2oc
