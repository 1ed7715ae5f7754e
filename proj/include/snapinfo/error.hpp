#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace snapinfo {

/// Base for every error raised by the library. `kind()` is a stable
/// machine-readable tag (e.g. "MalformedRecord") used by the CLI and API.
class Error : public std::runtime_error {
public:
    Error(std::string kind, std::string message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)), message_(std::move(message)) {}

    const std::string& kind() const noexcept { return kind_; }
    /// what() without the kind prefix.
    const std::string& message() const noexcept { return message_; }
    /// Throws a copy of the same dynamic type with `context` prefixed to the message.
    [[noreturn]] virtual void raise_with_context(const std::string& context) const {
        throw Error(kind_, context + ": " + message_);
    }

private:
    std::string kind_;
    std::string message_;
};

#define SNAPINFO_DEFINE_ERROR(Name)                                        \
    class Name : public ::snapinfo::Error {                                \
    public:                                                                \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
        [[noreturn]] void raise_with_context(const std::string& context) const override { \
            throw Name(context + ": " + message());                         \
        }                                                                  \
    }

}  // namespace snapinfo
