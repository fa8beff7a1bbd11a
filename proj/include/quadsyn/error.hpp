#pragma once

#include <stdexcept>
#include <string>

namespace quadsyn {

// Bad inputs: malformed files, invariant violations, out-of-range configuration.
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Failures of an otherwise valid run: rejection budget exhausted, animal out of
// frame, unwritable output. The CLI maps these to exit code 2.
class PipelineError : public std::runtime_error {
 public:
  explicit PipelineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quadsyn
