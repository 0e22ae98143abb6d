#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "svlab/measures.hpp"
#include "svlab/montecarlo.hpp"
#include "svlab/propositional.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// Report serialization. JSON carries the raw integer counts, so a report
// round-trips to an equal in-memory value. CSV is the flat per-n table for
// downstream plotting; its header is part of the output contract:
//   n,accept_rate,ci_low,ci_high,cum_error
// with one row per sample size and cum_error the running sum of accept_rate.
// ---------------------------------------------------------------------------

nlohmann::json report_to_json(const TrialReport& report);
TrialReport report_from_json(const nlohmann::json& j);

nlohmann::json claim_result_to_json(const ClaimResult& result);
nlohmann::json claim_results_to_json(const std::vector<ClaimResult>& results);

nlohmann::json weak_convergence_to_json(const WeakConvergenceReport& report);

void write_report_csv(std::ostream& out, const TrialReport& report);

// Stage table for a propositional inquiry: rows stage,conclusion.
void write_inquiry_csv(std::ostream& out, const std::vector<PropConclusion>& stages);
nlohmann::json inquiry_to_json(const std::vector<PropConclusion>& stages);

// Per-event table for a weak-convergence check:
// rows event,max_tail_deviation,within_tolerance.
void write_weak_convergence_csv(std::ostream& out, const WeakConvergenceReport& report);

// Fixed-point decimal with six places, used for every CSV rate column so
// seeded reruns are byte-identical.
std::string format_rate(double x);

}  // namespace svlab
