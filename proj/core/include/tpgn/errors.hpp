#pragma once

#include <stdexcept>
#include <string>

namespace tpgn {

/// Raised when a caller breaks an operation's documented precondition
/// (shape mismatch, out-of-range index, malformed configuration).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised when training produces a non-finite loss or gradient.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed or unreadable files (corpus, checkpoint, pool).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
[[noreturn]] inline void contract_failure(const std::string& what) {
    throw ContractViolation(what);
}
}  // namespace detail

#define TPGN_REQUIRE(cond, msg)                                   \
    do {                                                          \
        if (!(cond)) ::tpgn::detail::contract_failure(msg);       \
    } while (0)

}  // namespace tpgn
