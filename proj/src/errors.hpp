/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace beetle {

// Bad inputs: malformed manifests, schema violations, out-of-domain values,
// infeasible parameters. Maps to exit code 1 at the CLI.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Failures arising during computation: numerical breakdown, degenerate
// regressions, I/O faults. Maps to exit code 2 at the CLI.
class ComputeError : public std::runtime_error {
 public:
  explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace beetle
