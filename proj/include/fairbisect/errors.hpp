#pragma once

#include <stdexcept>
#include <string>

namespace fairbisect {

/// Input text could not be parsed into an instance or document.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration-bounded routine was asked to exceed its configured budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// The desk-scale decomposition builder could not produce a certified result.
class BuilderError : public std::runtime_error {
 public:
  explicit BuilderError(const std::string& what) : std::runtime_error(what) {}
};

/// A pipeline stage produced an object violating its contract; the message
/// names the stage whose guarantee failed.
class PipelineError : public std::logic_error {
 public:
  explicit PipelineError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace fairbisect
