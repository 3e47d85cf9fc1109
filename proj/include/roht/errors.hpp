#pragma once
// Error types shared across the library. Everything derives from RohtError so
// callers (the CLI in particular) can catch one base and map it to exit codes.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roht {

struct RohtError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed question text; `position` is a byte offset into the input.
struct ParseError : RohtError {
    ParseError(const std::string& msg, std::size_t position)
        : RohtError(msg + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

struct NotFoundError : RohtError {
    using RohtError::RohtError;
};

struct InvalidTreeError : RohtError {
    using RohtError::RohtError;
};

struct InvalidGroupError : RohtError {
    using RohtError::RohtError;
};

struct BuildError : RohtError {
    using RohtError::RohtError;
};

struct ExecError : RohtError {
    using RohtError::RohtError;
};

struct OpError : RohtError {
    using RohtError::RohtError;
};

struct SubstitutionError : RohtError {
    using RohtError::RohtError;
};

struct GenError : RohtError {
    using RohtError::RohtError;
};

// Dataset/KB/corpus fixture problems surfaced before a run starts.
struct ValidationError : RohtError {
    using RohtError::RohtError;
};

}  // namespace roht
