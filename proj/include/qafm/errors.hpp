#pragma once

#include <stdexcept>
#include <string>

namespace qafm {

/// Base of every error raised by the library; carries the owning module name
/// so front ends can prefix messages uniformly.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Input outside a documented precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Valid input for which the physical model has no answer (snap-in, pole, ...).
class PhysicsError : public Error {
public:
    using Error::Error;
};

/// Oscillation is suppressed: the stiffness softening exceeds the elastic restoring stiffness.
class SnapInError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

/// The tip left the attractive (non-contact) regime, gap <= a0.
class ContactRegimeError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class IoError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool cond, const char* module, const std::string& msg) {
    if (!cond) throw ValidationError(module, msg);
}

} // namespace detail
} // namespace qafm
