#pragma once

#include <stdexcept>
#include <string>

namespace pigeonhole {

/// Malformed arguments: length mismatches, out-of-range parameters, bad patterns.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// The request is well formed but outside what the routine models.
class UnsupportedCase : public std::runtime_error {
public:
    explicit UnsupportedCase(const std::string& what) : std::runtime_error(what) {}
};

/// No physical parameter set satisfies the design constraints.
class InfeasibleDesign : public std::runtime_error {
public:
    explicit InfeasibleDesign(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pigeonhole
