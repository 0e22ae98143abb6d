#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svlab/verifiers.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// Trial plans and reports
//
// A plan fixes (family, world, horizon, trial count, master seed). Each
// trial draws one path with the counter RNG keyed by (master seed, trial
// index) and evaluates every prefix. Reports hold integer counts, so they
// are exactly reproducible, mergeable across disjoint trial ranges, and
// independent of evaluation order.
// ---------------------------------------------------------------------------

struct TrialPlan {
  VerifierFamily family;
  World world;
  std::int64_t n_max = 0;
  std::int64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::int64_t trial_offset = 0;  // first trial index (for range splitting)
  int threads = 1;
  // Payload counted as "the designated outcome" (e.g. the correct answer of
  // a solver). Unset = any acceptance counts.
  std::optional<std::int32_t> target_payload;
};

struct TrialReport {
  std::int64_t n_max = 0;
  std::int64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::int64_t trial_offset = 0;
  std::optional<std::int32_t> target_payload;

  // Per-n counts over trials (index n-1).
  std::vector<std::int64_t> accept_any;     // any Accept verdict
  std::vector<std::int64_t> accept_target;  // Accept with the designated payload
  // Trajectory counts over the tail (last quarter of the horizon).
  std::int64_t eventual_target = 0;  // designated accept at every tail n
  std::int64_t tail_any = 0;         // at least one accept somewhere in the tail

  bool operator==(const TrialReport&) const = default;

  // 1-based first index of the tail ("last quarter") for this horizon.
  static std::int64_t tail_start(std::int64_t n_max) { return n_max * 3 / 4 + 1; }

  double accept_rate(std::int64_t n) const;   // any-accept frequency at n
  double target_rate(std::int64_t n) const;   // designated-accept frequency at n
  // Two-sided 95% Wilson interval for accept_rate(n).
  std::pair<double, double> wilson_ci(std::int64_t n) const;
  // Sum of accept_rate over all n: off the hypothesis this estimates the
  // total error budget actually spent.
  double cum_error() const;
  double eventual_rate() const;     // eventual_target / trials
  double tail_accept_rate() const;  // tail_any / trials
  // Least n with target_rate(n) >= rate; nullopt if never reached.
  std::optional<std::int64_t> convergence_n(double rate) const;
};

// Runs the plan. Throws Error("infeasible verifier/world pair ...") if any
// event the family tests has boundary mass in the world.
TrialReport run_trials(const TrialPlan& plan);

// Merges reports over disjoint trial ranges of the same plan shape.
TrialReport merge_reports(const TrialReport& a, const TrialReport& b);

// ---------------------------------------------------------------------------
// Claims
//
// Claim kinds and their pass conditions (sigma = sqrt(alpha/trials) is the
// Monte Carlo slack scale):
//   sv3-bound     cum_error <= alpha + 3*sigma          world must be off-target
//   sv4-eventual  eventual_rate >= target               world must be on-target
//   convergence   least n with target_rate >= target is <= horizon (on-target)
//   limsup-bound  tail_accept_rate <= alpha + 3*sigma   world must be off-target
//
// limsup-bound is the limiting-family analogue of sv3-bound: off the union,
// every piece is produced only finitely often, so the chance of any piece
// output in the tail must stay within the alpha budget. The per-n output
// sum carries no alpha bound for limiting families (early piece conjectures
// are near-certain by design), so sv3-bound does not apply to them.
// ---------------------------------------------------------------------------

struct Claim {
  std::string kind;      // sv3-bound | sv4-eventual | convergence | limsup-bound
  Rational alpha = 0;    // sv3-bound / limsup-bound budget
  double target = 0;     // sv4-eventual / convergence required rate
  std::int64_t horizon = 0;  // convergence deadline (defaults to n_max)
  int depth = 64;        // ground-truth membership search depth
};

struct ClaimResult {
  Claim claim;
  bool pass = false;
  double measured = 0;  // the quantity the claim constrains
  double bound = 0;     // the threshold it was compared against
  std::string detail;
};

// Evaluates each claim against the report. Ground truth comes from the
// membership oracle (hypotheses::contains, or Partition::classify for
// solvers), never from the verifier's own output; a claim that presumes a
// membership the oracle definitively contradicts throws
// Error("claim/ground-truth mismatch ...").
std::vector<ClaimResult> certify(const TrialPlan& plan, const TrialReport& report,
                                 const std::vector<Claim>& claims);

}  // namespace svlab
