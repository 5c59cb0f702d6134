// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <exception>
#include <string>
#include <utility>

namespace qseries {

/// Base of every evaluation failure. The message can be prefixed with
/// context (term index, parameter name) while the exception propagates.
class QSeriesError : public std::exception {
 public:
  explicit QSeriesError(std::string msg) : msg_(std::move(msg)) {}
  const char* what() const noexcept override { return msg_.c_str(); }
  void add_context(const std::string& ctx) { msg_ = ctx + ": " + msg_; }
  virtual const char* kind() const noexcept = 0;

 private:
  std::string msg_;
};

#define QSERIES_DEFINE_ERROR(Name)                                   \
  class Name : public QSeriesError {                                 \
   public:                                                           \
    using QSeriesError::QSeriesError;                                \
    const char* kind() const noexcept override { return #Name; }     \
  };

// (x;q)_n is infinite, or an exact division by zero.
QSERIES_DEFINE_ERROR(PoleError)
// A ball cannot certify a nonzero divisor at the working precision.
QSERIES_DEFINE_ERROR(PrecisionError)
// Input outside the supported domain (|q| >= 1, zero parameter, ...).
QSERIES_DEFINE_ERROR(DomainError)
// Ratio test certifies divergence.
QSERIES_DEFINE_ERROR(DivergenceError)
// Term budget exhausted before the requested tolerance.
QSERIES_DEFINE_ERROR(BudgetError)
// Sampler could not find enough admissible parameter sets.
QSERIES_DEFINE_ERROR(ExhaustionError)
// Malformed configuration or catalog text.
QSERIES_DEFINE_ERROR(ConfigError)

#undef QSERIES_DEFINE_ERROR

}  // namespace qseries
