#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dsy {

/// A module precondition was violated (bad parameter, depth over cap, ...).
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A kernel sampler gave up, typically a rejection sampler hitting its
/// proposal cap. `address()` names the vertex whose children were being drawn
/// when known, empty otherwise.
class sampling_failure : public std::runtime_error {
public:
    explicit sampling_failure(const std::string& what, std::string address = {})
        : std::runtime_error(address.empty() ? what : what + " at vertex " + address),
          address_(std::move(address)),
          reason_(what) {}

    const std::string& address() const noexcept { return address_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string address_;
    std::string reason_;
};

/// Numerical routine failed to reach its requested tolerance.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* message) {
    if (!condition) throw precondition_error(message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) throw precondition_error(message);
}

}  // namespace dsy
