#pragma once

#include <stdexcept>
#include <string>

namespace uppex {

// Violated precondition or interface contract (bad sizes, unknown labels, ...).
class contract_error : public std::runtime_error {
public:
    explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input document.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Work would exceed a configured budget (enumeration sizes, divergence ceilings).
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace uppex
