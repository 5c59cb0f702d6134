// SPDX-License-Identifier: Apache-2.0
#include "qseries/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qseries/errors.hpp"
#include "qseries/report.hpp"

namespace qseries {

namespace {

using json = nlohmann::ordered_json;

const std::vector<long> kLadder{64, 128, 256};

struct VerifyArgs {
  std::vector<std::string> identities;
  bool all = false;
  std::size_t samples = 25;
  std::uint64_t seed = 1;
  long precision = 0;  // 0: default cap
  double tol = 1e-20;
  bool exact = false;
  std::string n;
  bool fold = false;
  std::string limit_eps;
  std::string format = "text";
  std::string out;
  std::string q_range;
  std::string param_range;
  bool real_only = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> r;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) r.push_back(item);
  return r;
}

long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("malformed " + what + " '" + s + "'");
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("malformed " + what + " '" + s + "'");
}

Interval parse_interval(const std::string& s, const std::string& what) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw ConfigError(what + " needs the form lo,hi");
  return {parse_double(parts[0], what), parse_double(parts[1], what)};
}

std::vector<long> ladder_for(long cap) {
  std::vector<long> r;
  for (long p : kLadder)
    if (p < cap) r.push_back(p);
  r.push_back(cap);
  return r;
}

long precision_cap(long flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("QSERIES_PRECISION_CAP"); env && *env)
    return parse_long(env, "QSERIES_PRECISION_CAP");
  return kLadder.back();
}

json listing(const IdentityDescriptor& id) {
  json conds = json::array();
  for (const Condition& c : id.conditions) conds.push_back("|" + c.display + "|<1");
  json j;
  j["id"] = id.id;
  j["title"] = id.title;
  j["free_params"] = id.free_params;
  j["constraint"] = id.constraint ? json(id.constraint->display) : json(nullptr);
  j["solved_for"] = id.constraint ? json(id.constraint->solved) : json(nullptr);
  j["conditions"] = conds;
  j["finite"] = id.finite_form();
  return j;
}

int cmd_list(const std::vector<std::string>& ids, const std::string& format, std::ostream& out) {
  std::vector<const IdentityDescriptor*> chosen;
  if (ids.empty())
    for (const IdentityDescriptor& d : catalog()) chosen.push_back(&d);
  else
    for (const std::string& s : ids) chosen.push_back(&find_identity(s));
  const Format f = parse_format(format);
  if (f == Format::json) {
    json arr = json::array();
    for (const auto* d : chosen) arr.push_back(listing(*d));
    out << arr.dump(2) << "\n";
    return 0;
  }
  if (f == Format::csv) out << "id,constraint,conditions,finite\n";
  for (const auto* d : chosen) {
    std::string conds;
    for (const Condition& c : d->conditions) conds += (conds.empty() ? "" : "; ") + ("|" + c.display + "|<1");
    const std::string cons = d->constraint ? d->constraint->display : "";
    if (f == Format::csv)
      out << d->id << ",\"" << cons << "\",\"" << conds << "\"," << (d->finite_form() ? "yes" : "no") << "\n";
    else
      out << d->id << "  " << d->title << (cons.empty() ? "" : "  [" + cons + "]") << (conds.empty() ? "" : "  " + conds)
          << "\n";
  }
  return 0;
}

bool is_theorem(const std::string& id) { return id == "thm-a" || id == "thm-b"; }

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<const IdentityDescriptor*> chosen;
  if (a.all) {
    if (!a.identities.empty()) throw ConfigError("--all and --identity are exclusive");
    for (const IdentityDescriptor& d : catalog())
      if (!a.exact || d.finite_form()) chosen.push_back(&d);
  } else {
    for (const std::string& s : a.identities)
      for (const std::string& id : split(s, ',')) chosen.push_back(&find_identity(id));
  }
  if (chosen.empty()) throw ConfigError("nothing to verify: give --identity or --all");
  if (a.fold || !a.limit_eps.empty()) {
    bool any = false;
    for (const auto* d : chosen) any = any || is_theorem(d->id);
    if (!any) throw ConfigError("--fold and --limit-eps apply to thm-a and thm-b only");
  }

  SampleSpec spec;
  spec.seed = a.seed;
  spec.count = a.samples;
  spec.allow_complex = !a.real_only;
  if (!a.q_range.empty()) spec.q_range = parse_interval(a.q_range, "--q-range");
  if (!a.param_range.empty()) spec.param_range = parse_interval(a.param_range, "--param-range");
  if (!a.n.empty()) spec.n_values = parse_n_values(a.n);
  const long cap = precision_cap(a.precision);
  if (cap < 32) throw ConfigError("precision cap must be at least 32 bits");
  spec.certify.ladder = ladder_for(cap);
  spec.certify.rel_tol = a.tol;
  spec.validate();

  std::vector<ExactRational> eps;
  for (const std::string& e : split(a.limit_eps, ',')) {
    const ExactRational v = ExactRational::parse(e);
    if (v.is_zero()) throw ConfigError("--limit-eps values must be nonzero");
    eps.push_back(v);
  }
  const Format format = parse_format(a.format);

  std::vector<VerificationReport> reports;
  std::vector<double> seconds;
  auto timed = [&](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    reports.push_back(fn());
    seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  };
  for (const IdentityDescriptor* d : chosen) {
    if (a.exact) {
      static const std::vector<ExactRational> qs{ExactRational::fraction(1, 2), ExactRational::fraction(2, 3),
                                                  ExactRational::fraction(3, 5)};
      timed([&] {
        VerificationReport rep{d->id, {}};
        for (long n : spec.n_values) {
          SampleSpec one = spec;
          one.n_values = {n};
          one.seed = spec.seed + static_cast<std::uint64_t>(n);
          for (SampleRecord& r : verify_exact(*d, sample_exact(*d, one, qs)).records) {
            r.sample_index = rep.records.size();
            rep.records.push_back(std::move(r));
          }
        }
        return rep;
      });
      continue;
    }
    const std::vector<ParamSet> params = sample(*d, spec);
    timed([&] { return verify(*d, params, spec.certify); });
    if (!is_theorem(d->id)) continue;
    if (a.fold) timed([&] { return verify_fold(d->id, params, spec.certify); });
    if (!eps.empty()) {
      EvalOptions eo;
      eo.precision = Precision{spec.certify.ladder.back()};
      timed([&] { return verify_limit(d->id, params, eps, eo); });
    }
  }

  const std::string text = render(reports, format, seconds);
  if (a.out.empty()) {
    out << text;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + a.out + "' for writing");
    f << text;
    f.close();
    if (!f) throw ConfigError("failed writing '" + a.out + "'");
    if (format != Format::text) err << to_text(reports, seconds);
  }
  return exit_code(reports);
}

}  // namespace

std::vector<long> parse_n_values(const std::string& s) {
  std::vector<long> r;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const long lo = parse_long(s.substr(0, dots), "--n");
    const long hi = parse_long(s.substr(dots + 2), "--n");
    if (lo > hi) throw ConfigError("empty --n range '" + s + "'");
    for (long n = lo; n <= hi; ++n) r.push_back(n);
  } else {
    for (const std::string& p : split(s, ',')) r.push_back(parse_long(p, "--n"));
  }
  if (r.empty()) throw ConfigError("empty --n");
  for (long n : r)
    if (n < 0) throw ConfigError("--n values must be nonnegative");
  return r;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate basic hypergeometric series and verify q-series identities."};
  app.require_subcommand(1);

  std::vector<std::string> list_ids;
  std::string list_format = "text";
  CLI::App* list = app.add_subcommand("list", "List identities, constraints and convergence conditions");
  list->add_option("--identity", list_ids, "Identity id (repeatable)");
  list->add_option("--format", list_format, "text, json or csv");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "Sample parameters and certify identities");
  verify->add_option("--identity", va.identities, "Identity id (repeatable or comma separated)");
  verify->add_flag("--all", va.all, "Verify every identity");
  verify->add_option("--samples", va.samples, "Samples per identity (per n in exact mode)");
  verify->add_option("--seed", va.seed, "Random seed");
  verify->add_option("--precision", va.precision, "Precision cap in bits (default 256)");
  verify->add_option("--tol", va.tol, "Relative residual tolerance");
  verify->add_flag("--exact", va.exact, "Exact rational mode for the finite identities");
  verify->add_option("--n", va.n, "n values: 3, 0..5 or 1,2,4");
  verify->add_flag("--fold", va.fold, "Also run the fold check (thm-a, thm-b)");
  verify->add_option("--limit-eps", va.limit_eps, "Comma separated eps for the limit check (thm-a, thm-b)");
  verify->add_option("--format", va.format, "text, json or csv");
  verify->add_option("--out", va.out, "Write the report here instead of stdout");
  verify->add_option("--q-range", va.q_range, "lo,hi bounds on |q|");
  verify->add_option("--param-range", va.param_range, "lo,hi bounds on |parameter|");
  verify->add_flag("--real-only", va.real_only, "Real parameters only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (list->parsed()) return cmd_list(list_ids, list_format, out);
    return cmd_verify(va, out, err);
  } catch (const ConfigError& e) {
    err << "qseries: " << e.what() << "\n";
    return 2;
  } catch (const ExhaustionError& e) {
    err << "qseries: " << e.what() << "\n";
    return 2;
  } catch (const QSeriesError& e) {
    err << "qseries: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"qseries"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qseries
