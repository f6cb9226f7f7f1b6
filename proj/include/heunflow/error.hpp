#pragma once

#include <stdexcept>
#include <string>

namespace heunflow {

/// Precondition violated by the caller (bad u, m, dimension, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative procedure failed to reach its target before a cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_change)
        : std::runtime_error(what), last_change_(last_change) {}

    double last_change() const noexcept { return last_change_; }

private:
    double last_change_;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DomainError(msg);
}

}  // namespace detail
}  // namespace heunflow
