#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idiomine {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed tree text, grammar/idiom files or mini-language source.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t offset)
        : Error(message + " at byte " + std::to_string(offset)), message_(message), offset_(offset) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::string message_;
    std::size_t offset_;
};

// A tree or rule sequence that does not conform to a grammar.
class InvalidTree : public Error {
public:
    using Error::Error;
};

// Idiom set bound to a different base grammar.
class FingerprintMismatch : public Error {
public:
    using Error::Error;
};

} // namespace idiomine
