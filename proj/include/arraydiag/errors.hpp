// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors

#ifndef ARRAYDIAG_ERRORS_HPP
#define ARRAYDIAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace arraydiag {

/// A request exceeds a structural budget (too many combiner columns for the
/// available null space, combinatorial search too large, ...).
class CapacityError : public std::invalid_argument {
public:
    explicit CapacityError(const std::string& what) : std::invalid_argument(what) {}
};

/// A linear system is too close to singular to solve reliably
/// (near-coincident steering directions make D*D numerically rank deficient).
class IllConditionedError : public std::runtime_error {
public:
    explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

/// The least-squares system on the selected support is singular.
class DegenerateProblemError : public std::runtime_error {
public:
    explicit DegenerateProblemError(const std::string& what) : std::runtime_error(what) {}
};

/// Experiment configuration is malformed or out of range; the message names
/// the offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace arraydiag

#endif // ARRAYDIAG_ERRORS_HPP
