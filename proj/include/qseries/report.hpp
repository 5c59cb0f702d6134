// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "qseries/verifier.hpp"

namespace qseries {

enum class Format { text, json, csv };

/// Throws ConfigError for anything but text, json, csv.
Format parse_format(const std::string& s);

/// Byte-identical for identical reports.
std::string to_json(const std::vector<VerificationReport>& reports);
std::string to_csv(const std::vector<VerificationReport>& reports);
/// Human-readable; `seconds` is appended per section when nonnegative.
std::string to_text(const std::vector<VerificationReport>& reports, const std::vector<double>& seconds = {});

std::string render(const std::vector<VerificationReport>& reports, Format f,
                   const std::vector<double>& seconds = {});

}  // namespace qseries
