#include "svlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "svlab/error.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// TrialReport derived quantities
// ---------------------------------------------------------------------------

namespace {

void check_n(const TrialReport& r, std::int64_t n) {
  if (n < 1 || n > r.n_max) fail("report index out of range");
}

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

std::pair<double, double> wilson(double successes, double n) {
  if (n <= 0) return {0.0, 1.0};
  double p = successes / n;
  double z2 = kZ95 * kZ95;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // At the extremes the interval endpoint is exactly 0 or 1; center -/+ half
  // cancels algebraically but leaves rounding dust in doubles.
  double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  double hi = successes == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

}  // namespace

double TrialReport::accept_rate(std::int64_t n) const {
  check_n(*this, n);
  return static_cast<double>(accept_any[n - 1]) / static_cast<double>(trials);
}

double TrialReport::target_rate(std::int64_t n) const {
  check_n(*this, n);
  return static_cast<double>(accept_target[n - 1]) / static_cast<double>(trials);
}

std::pair<double, double> TrialReport::wilson_ci(std::int64_t n) const {
  check_n(*this, n);
  return wilson(static_cast<double>(accept_any[n - 1]), static_cast<double>(trials));
}

double TrialReport::cum_error() const {
  double s = 0;
  for (auto c : accept_any) s += static_cast<double>(c);
  return s / static_cast<double>(trials);
}

double TrialReport::eventual_rate() const {
  return static_cast<double>(eventual_target) / static_cast<double>(trials);
}

double TrialReport::tail_accept_rate() const {
  return static_cast<double>(tail_any) / static_cast<double>(trials);
}

std::optional<std::int64_t> TrialReport::convergence_n(double rate) const {
  for (std::int64_t n = 1; n <= n_max; ++n)
    if (target_rate(n) >= rate) return n;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// run_trials
// ---------------------------------------------------------------------------

namespace {

struct Accumulator {
  std::vector<std::int64_t> accept_any;
  std::vector<std::int64_t> accept_target;
  std::int64_t eventual_target = 0;
  std::int64_t tail_any = 0;

  explicit Accumulator(std::int64_t n_max)
      : accept_any(static_cast<std::size_t>(n_max), 0),
        accept_target(static_cast<std::size_t>(n_max), 0) {}

  void merge(const Accumulator& other) {
    for (std::size_t i = 0; i < accept_any.size(); ++i) {
      accept_any[i] += other.accept_any[i];
      accept_target[i] += other.accept_target[i];
    }
    eventual_target += other.eventual_target;
    tail_any += other.tail_any;
  }
};

void run_range(const TrialPlan& plan, const CompiledFamily& compiled,
               std::int64_t first, std::int64_t last, Accumulator& acc) {
  auto eval = compiled.evaluator();
  std::int64_t tail_from = TrialReport::tail_start(plan.n_max);
  for (std::int64_t t = first; t < last; ++t) {
    eval->reset();
    TrialRng rng = TrialRng::keyed(plan.master_seed,
                                   static_cast<std::uint64_t>(plan.trial_offset + t));
    bool all_target_tail = true;
    bool any_tail = false;
    for (std::int64_t i = 0; i < plan.n_max; ++i) {
      Verdict v = eval->step(plan.world.draw(rng, static_cast<std::uint64_t>(i)));
      std::int64_t n = i + 1;
      if (v.accepted) {
        acc.accept_any[i] += 1;
        bool on_target = !plan.target_payload || v.payload == *plan.target_payload;
        if (on_target) acc.accept_target[i] += 1;
        if (n >= tail_from) {
          any_tail = true;
          if (!on_target) all_target_tail = false;
        }
      } else if (n >= tail_from) {
        all_target_tail = false;
      }
    }
    if (all_target_tail) acc.eventual_target += 1;
    if (any_tail) acc.tail_any += 1;
  }
}

}  // namespace

TrialReport run_trials(const TrialPlan& plan) {
  if (plan.n_max < 1) fail("n_max must be at least 1");
  if (plan.trials < 1) fail("trials must be at least 1");
  if (plan.threads < 1) fail("threads must be at least 1");
  if (plan.family.space() != plan.world.space())
    fail("space mismatch between verifier and world");

  CompiledFamily compiled = CompiledFamily::compile(plan.family, plan.n_max);
  for (const auto& ev : compiled.events()) {
    if (!is_feasible(plan.world, ev))
      fail("infeasible verifier/world pair: boundary mass on event " + ev.describe());
  }

  int threads = plan.threads;
  if (threads > plan.trials) threads = static_cast<int>(plan.trials);
  std::vector<Accumulator> parts(static_cast<std::size_t>(threads),
                                 Accumulator(plan.n_max));
  if (threads == 1) {
    run_range(plan, compiled, 0, plan.trials, parts[0]);
  } else {
    // Static contiguous split; partial results merge in thread order, so
    // the report does not depend on scheduling.
    std::vector<std::thread> pool;
    std::int64_t chunk = (plan.trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      std::int64_t first = w * chunk;
      std::int64_t last = std::min<std::int64_t>(plan.trials, first + chunk);
      if (first >= last) break;
      pool.emplace_back([&plan, &compiled, first, last, &parts, w] {
        run_range(plan, compiled, first, last, parts[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& th : pool) th.join();
    for (int w = 1; w < threads; ++w) parts[0].merge(parts[static_cast<std::size_t>(w)]);
  }

  TrialReport report;
  report.n_max = plan.n_max;
  report.trials = plan.trials;
  report.master_seed = plan.master_seed;
  report.trial_offset = plan.trial_offset;
  report.target_payload = plan.target_payload;
  report.accept_any = std::move(parts[0].accept_any);
  report.accept_target = std::move(parts[0].accept_target);
  report.eventual_target = parts[0].eventual_target;
  report.tail_any = parts[0].tail_any;
  return report;
}

TrialReport merge_reports(const TrialReport& a, const TrialReport& b) {
  if (a.n_max != b.n_max || a.master_seed != b.master_seed ||
      a.target_payload != b.target_payload)
    fail("reports come from different plans");
  bool disjoint = a.trial_offset + a.trials <= b.trial_offset ||
                  b.trial_offset + b.trials <= a.trial_offset;
  if (!disjoint) fail("reports cover overlapping trial ranges");
  TrialReport out = a;
  out.trial_offset = std::min(a.trial_offset, b.trial_offset);
  out.trials = a.trials + b.trials;
  for (std::size_t i = 0; i < out.accept_any.size(); ++i) {
    out.accept_any[i] += b.accept_any[i];
    out.accept_target[i] += b.accept_target[i];
  }
  out.eventual_target += b.eventual_target;
  out.tail_any += b.tail_any;
  return out;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

namespace {

// Ground-truth gate: claims presuming membership the oracle contradicts are
// configuration errors, not failed measurements.
void require_membership(const TrialPlan& plan, const Claim& claim, bool expect_in) {
  if (plan.family.tag() == "solver") {
    auto truth = plan.family.partition().classify(plan.world, claim.depth);
    if (!expect_in)
      fail("claim/ground-truth mismatch: off-target claims do not apply to solvers");
    if (!truth)
      fail("claim/ground-truth mismatch: no answer contains world " + plan.world.label() +
           " at depth " + std::to_string(claim.depth));
    if (!plan.target_payload || *plan.target_payload != *truth)
      fail("claim/ground-truth mismatch: designated answer differs from the true answer \"" +
           plan.family.partition().answers()[*truth].label + "\"");
    return;
  }
  Membership m = contains(plan.family.target(), plan.world, claim.depth);
  if (expect_in && m == Membership::Out)
    fail("claim/ground-truth mismatch: world " + plan.world.label() +
         " is outside the target hypothesis");
  if (!expect_in && m == Membership::In)
    fail("claim/ground-truth mismatch: world " + plan.world.label() +
         " is inside the target hypothesis");
}

}  // namespace

std::vector<ClaimResult> certify(const TrialPlan& plan, const TrialReport& report,
                                 const std::vector<Claim>& claims) {
  std::vector<ClaimResult> results;
  for (const auto& claim : claims) {
    ClaimResult r;
    r.claim = claim;
    double sigma_slack =
        3.0 * std::sqrt(rational_to_double(claim.alpha) / static_cast<double>(report.trials));
    if (claim.kind == "sv3-bound") {
      if (sgn(claim.alpha) < 0 || claim.alpha >= 1) fail("claim alpha must lie in [0,1)");
      require_membership(plan, claim, false);
      r.measured = report.cum_error();
      r.bound = rational_to_double(claim.alpha) + sigma_slack;
      r.pass = r.measured <= r.bound;
      r.detail = "cumulative acceptance rate vs alpha budget";
    } else if (claim.kind == "limsup-bound") {
      if (sgn(claim.alpha) < 0 || claim.alpha >= 1) fail("claim alpha must lie in [0,1)");
      require_membership(plan, claim, false);
      r.measured = report.tail_accept_rate();
      r.bound = rational_to_double(claim.alpha) + sigma_slack;
      r.pass = r.measured <= r.bound;
      r.detail = "trajectories with tail output vs alpha budget";
    } else if (claim.kind == "sv4-eventual") {
      require_membership(plan, claim, true);
      r.measured = report.eventual_rate();
      r.bound = claim.target;
      r.pass = r.measured >= r.bound;
      r.detail = "trajectories accepting at every tail n";
    } else if (claim.kind == "convergence") {
      require_membership(plan, claim, true);
      std::int64_t deadline = claim.horizon > 0 ? claim.horizon : report.n_max;
      if (deadline > report.n_max) fail("convergence horizon exceeds the report horizon");
      auto reached = report.convergence_n(claim.target);
      r.measured = reached ? static_cast<double>(*reached)
                           : std::numeric_limits<double>::infinity();
      r.bound = static_cast<double>(deadline);
      r.pass = reached && *reached <= deadline;
      r.detail = "least n reaching the required acceptance rate";
    } else {
      fail("unknown claim kind: " + claim.kind);
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace svlab
