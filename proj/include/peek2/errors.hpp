#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace peek2 {

/// Input bytes are not well-formed UTF-8. `offset` is the byte position of
/// the first offending byte.
class InvalidUtf8 : public std::runtime_error {
public:
    explicit InvalidUtf8(std::size_t offset)
        : std::runtime_error("invalid UTF-8 at byte offset " + std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// The reference pattern failed to match at a position it must cover.
class OracleGap : public std::runtime_error {
public:
    explicit OracleGap(std::size_t offset)
        : std::runtime_error("oracle pattern matched nothing at byte offset " +
                             std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidModel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MissingFixture : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ClockError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace peek2
