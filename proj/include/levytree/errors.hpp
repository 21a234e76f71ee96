#pragma once

#include <stdexcept>
#include <string>

namespace levytree {

// Argument outside the documented domain (times off the path, r > |mu|, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A value that must sit on the grid (or on the delta-lattice) does not.
class PrecisionError : public std::invalid_argument {
public:
    explicit PrecisionError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input data (files, serialized objects, inconsistent walks).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds a hard resource limit (enumeration size caps).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Randomized procedure ran out of budget; retrying with a fresh substream is sound.
class RetryableError : public std::runtime_error {
public:
    explicit RetryableError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace levytree
