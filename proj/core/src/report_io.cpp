#include "svlab/report_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "svlab/error.hpp"

namespace svlab {

namespace {

using nlohmann::json;

std::int64_t int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    fail(std::string("report field \"") + key + "\" missing or not an integer");
  return j.at(key).get<std::int64_t>();
}

std::vector<std::int64_t> count_field(const json& j, const char* key, std::size_t expect) {
  if (!j.contains(key) || !j.at(key).is_array())
    fail(std::string("report field \"") + key + "\" missing or not an array");
  std::vector<std::int64_t> out;
  out.reserve(expect);
  for (const auto& v : j.at(key)) {
    if (!v.is_number_integer())
      fail(std::string("report field \"") + key + "\" must hold integers");
    out.push_back(v.get<std::int64_t>());
  }
  if (out.size() != expect)
    fail(std::string("report field \"") + key + "\" has wrong length");
  return out;
}

}  // namespace

json report_to_json(const TrialReport& report) {
  json j;
  j["n_max"] = report.n_max;
  j["trials"] = report.trials;
  j["master_seed"] = report.master_seed;
  j["trial_offset"] = report.trial_offset;
  if (report.target_payload)
    j["target_payload"] = *report.target_payload;
  else
    j["target_payload"] = nullptr;
  j["accept_any"] = report.accept_any;
  j["accept_target"] = report.accept_target;
  j["eventual_target"] = report.eventual_target;
  j["tail_any"] = report.tail_any;
  return j;
}

TrialReport report_from_json(const json& j) {
  TrialReport r;
  r.n_max = int_field(j, "n_max");
  r.trials = int_field(j, "trials");
  if (!j.contains("master_seed") || !j.at("master_seed").is_number())
    fail("report field \"master_seed\" missing or not a number");
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  r.trial_offset = int_field(j, "trial_offset");
  if (!j.contains("target_payload"))
    fail("report field \"target_payload\" missing");
  if (!j.at("target_payload").is_null())
    r.target_payload = j.at("target_payload").get<std::int32_t>();
  if (r.n_max < 0) fail("report field \"n_max\" must be non-negative");
  auto expect = static_cast<std::size_t>(r.n_max);
  r.accept_any = count_field(j, "accept_any", expect);
  r.accept_target = count_field(j, "accept_target", expect);
  r.eventual_target = int_field(j, "eventual_target");
  r.tail_any = int_field(j, "tail_any");
  return r;
}

json claim_result_to_json(const ClaimResult& result) {
  json j;
  j["kind"] = result.claim.kind;
  j["alpha"] = rational_str(result.claim.alpha);
  j["target"] = result.claim.target;
  j["horizon"] = result.claim.horizon;
  j["pass"] = result.pass;
  j["measured"] = result.measured;
  j["bound"] = result.bound;
  j["detail"] = result.detail;
  return j;
}

json claim_results_to_json(const std::vector<ClaimResult>& results) {
  json arr = json::array();
  for (const auto& r : results) arr.push_back(claim_result_to_json(r));
  return arr;
}

json weak_convergence_to_json(const WeakConvergenceReport& report) {
  json j;
  j["converged"] = report.converged;
  json events = json::array();
  for (const auto& e : report.events) {
    events.push_back({{"event", e.event},
                      {"max_tail_deviation", e.max_tail_deviation},
                      {"within_tolerance", e.within_tolerance}});
  }
  j["events"] = events;
  return j;
}

std::string format_rate(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

void write_report_csv(std::ostream& out, const TrialReport& report) {
  out << "n,accept_rate,ci_low,ci_high,cum_error\n";
  double running = 0.0;
  for (std::int64_t n = 1; n <= report.n_max; ++n) {
    double rate = report.accept_rate(n);
    auto [lo, hi] = report.wilson_ci(n);
    running += rate;
    out << n << ',' << format_rate(rate) << ',' << format_rate(lo) << ','
        << format_rate(hi) << ',' << format_rate(running) << '\n';
  }
}

void write_inquiry_csv(std::ostream& out, const std::vector<PropConclusion>& stages) {
  out << "stage,conclusion\n";
  for (std::size_t i = 0; i < stages.size(); ++i)
    out << i << ',' << stages[i].label << '\n';
}

json inquiry_to_json(const std::vector<PropConclusion>& stages) {
  json arr = json::array();
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto& c = stages[i];
    const char* kind = c.kind == PropConclusion::Kind::Whole    ? "whole"
                       : c.kind == PropConclusion::Kind::Piece  ? "piece"
                                                                : "answer";
    arr.push_back({{"stage", i}, {"kind", kind}, {"index", c.index}, {"label", c.label}});
  }
  return arr;
}

void write_weak_convergence_csv(std::ostream& out, const WeakConvergenceReport& report) {
  out << "event,max_tail_deviation,within_tolerance\n";
  for (const auto& e : report.events) {
    std::string cell = e.event;
    // Commas inside event descriptions get CSV quoting.
    if (cell.find(',') != std::string::npos || cell.find('"') != std::string::npos) {
      std::string quoted = "\"";
      for (char c : cell) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      quoted += '"';
      cell = quoted;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9e", e.max_tail_deviation);
    out << cell << ',' << buf << ',' << (e.within_tolerance ? "true" : "false") << '\n';
  }
}

}  // namespace svlab
