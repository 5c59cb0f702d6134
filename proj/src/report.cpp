// SPDX-License-Identifier: Apache-2.0
#include "qseries/report.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "qseries/errors.hpp"

namespace qseries {

namespace {

using json = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
  return r + "\"";
}

std::string joined_params(const SampleRecord& r) {
  std::string s;
  for (const auto& [k, v] : r.params) s += (s.empty() ? "" : ";") + k + "=" + v;
  return s;
}

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << x;
  return os.str();
}

}  // namespace

Format parse_format(const std::string& s) {
  if (s == "text") return Format::text;
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw ConfigError("unknown format '" + s + "' (expected text, json or csv)");
}

std::string to_json(const std::vector<VerificationReport>& reports) {
  json out = json::array();
  for (const VerificationReport& rep : reports) {
    const ReportSummary s = rep.summary();
    json records = json::array();
    for (const SampleRecord& r : rep.records) {
      json params = json::object();
      for (const auto& [k, v] : r.params) params[k] = v;
      json j;
      j["identity"] = r.identity;
      j["sample_index"] = r.sample_index;
      j["params"] = params;
      j["lhs"] = r.lhs;
      j["rhs"] = r.rhs;
      j["abs_err"] = r.abs_err;
      j["rel_err"] = r.rel_err;
      j["radius"] = r.radius;
      j["precision_bits"] = r.precision_bits;
      j["terms_used"] = r.terms_used;
      j["status"] = to_string(r.status);
      if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
      records.push_back(std::move(j));
    }
    json section;
    section["identity"] = rep.identity;
    section["summary"] = {{"count", rep.records.size()}, {"pass", s.pass},           {"fail", s.fail},
                          {"inconclusive", s.inconclusive}, {"rejected", s.rejected}, {"max_rel_err", s.max_rel_err}};
    section["records"] = std::move(records);
    out.push_back(std::move(section));
  }
  return json{{"reports", out}, {"exit_code", exit_code(reports)}}.dump(2) + "\n";
}

std::string to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "identity,sample_index,params,lhs,rhs,abs_err,rel_err,radius,precision_bits,terms_used,status\n";
  os << std::setprecision(17);
  for (const VerificationReport& rep : reports)
    for (const SampleRecord& r : rep.records)
      os << csv_field(r.identity) << ',' << r.sample_index << ',' << csv_field(joined_params(r)) << ','
         << csv_field(r.lhs) << ',' << csv_field(r.rhs) << ',' << r.abs_err << ',' << r.rel_err << ',' << r.radius
         << ',' << r.precision_bits << ',' << r.terms_used << ',' << to_string(r.status) << '\n';
  return os.str();
}

std::string to_text(const std::vector<VerificationReport>& reports, const std::vector<double>& seconds) {
  std::ostringstream os;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const VerificationReport& rep = reports[i];
    const ReportSummary s = rep.summary();
    os << "== " << rep.identity << ": " << s.pass << " pass, " << s.fail << " fail, " << s.inconclusive
       << " inconclusive, " << s.rejected << " rejected; max rel err " << sci(s.max_rel_err);
    if (i < seconds.size() && seconds[i] >= 0) os << " (" << std::fixed << std::setprecision(2) << seconds[i] << " s)";
    os << "\n";
    for (const SampleRecord& r : rep.records) {
      os << "  #" << r.sample_index << " " << std::left << std::setw(12) << to_string(r.status) << std::right
         << " rel " << sci(r.rel_err) << "  rad " << sci(r.radius) << "  bits " << r.precision_bits << "  "
         << joined_params(r);
      if (!r.diagnostic.empty()) os << "\n      " << r.diagnostic;
      os << "\n";
    }
  }
  return os.str();
}

std::string render(const std::vector<VerificationReport>& reports, Format f, const std::vector<double>& seconds) {
  switch (f) {
    case Format::json:
      return to_json(reports);
    case Format::csv:
      return to_csv(reports);
    case Format::text:
      break;
  }
  return to_text(reports, seconds);
}

}  // namespace qseries
