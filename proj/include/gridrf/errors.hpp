#pragma once

#include <stdexcept>
#include <string>

namespace gridrf {

// Invalid values or inconsistent telemetry (scores out of [0,1], counters
// that cannot happen, duplicate ids in a ranking request).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration: mismatched factor sets, non-positive alpha,
// non-increasing checkpoints.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unknown or duplicate node/job identity.
class LookupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Nothing eligible to run a job (empty registry or empty ranking).
class NoResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File or format problem; message carries path and, where known,
// line/field location.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gridrf
