#pragma once

#include <stdexcept>
#include <string>

namespace pretlab {

// Base for every library error. `kind` is the machine-readable tag the
// CLI prints alongside the message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// input exceeds an exhaustive/scan cap
struct CapacityError : Error {
    explicit CapacityError(const std::string& w) : Error("capacity", w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error("domain", w) {}
};

struct PoleError : Error {
    explicit PoleError(const std::string& w) : Error("pole", w) {}
};

struct AccuracyError : Error {
    explicit AccuracyError(const std::string& w) : Error("accuracy", w) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& w) : Error("precondition", w) {}
};

// |f(p^k)| > 1 found while summing or building
struct UnitDiscError : Error {
    explicit UnitDiscError(const std::string& w) : Error("unit-disc", w) {}
};

struct DegeneracyError : Error {
    explicit DegeneracyError(const std::string& w) : Error("degeneracy", w) {}
};

}  // namespace pretlab
