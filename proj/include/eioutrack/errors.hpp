#pragma once

#include <stdexcept>
#include <string>

namespace eioutrack {

// An input file could not be read, or a line in it failed to parse.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A configuration value is out of range; the message lists the offending keys.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Frames were fed to the tracker out of order.
class SequenceError : public std::logic_error {
public:
    explicit SequenceError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace eioutrack
