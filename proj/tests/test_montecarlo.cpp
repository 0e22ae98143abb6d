#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "svlab/config.hpp"
#include "svlab/error.hpp"
#include "svlab/montecarlo.hpp"
#include "svlab/rng.hpp"

using namespace svlab;

namespace {

Event heads() {
  World c = World::coin(Rational(1, 2));
  return Event::of_symbols(c.space(), {"H"});
}

VerifierFamily over_half(const Rational& alpha = Rational(1, 20)) {
  return subbasic_verifier(heads(), Rational(1, 2), alpha);
}

TrialReport fake_report(std::int64_t successes, std::int64_t trials) {
  TrialReport r;
  r.n_max = 1;
  r.trials = trials;
  r.accept_any = {successes};
  r.accept_target = {successes};
  return r;
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("tail windows cover the last quarter of the horizon") {
  CHECK(TrialReport::tail_start(2000) == 1501);
  CHECK(TrialReport::tail_start(4) == 4);
  CHECK(TrialReport::tail_start(8) == 7);
  CHECK(TrialReport::tail_start(1) == 1);
  CHECK(TrialReport::tail_start(100) == 76);
}

TEST_CASE("counting semantics are exact on a certain world") {
  // Under mu(H) = 1 every trial accepts exactly at the sizes n with
  // count(n) <= n, which for b = 1/2, alpha = 1/20 means n >= 19.
  TrialPlan plan{.family = over_half(),
                 .world = World::coin(Rational(1)),
                 .n_max = 30,
                 .trials = 5,
                 .master_seed = 7};
  TrialReport r = run_trials(plan);
  REQUIRE(r.n_max == 30);
  for (std::int64_t n = 1; n <= 30; ++n) {
    CAPTURE(n);
    CHECK(r.accept_any[n - 1] == (n >= 19 ? 5 : 0));
    CHECK(r.accept_target[n - 1] == r.accept_any[n - 1]);
  }
  // Tail = 23..30, all accepted, every acceptance on target (payload 0).
  CHECK(r.eventual_target == 5);
  CHECK(r.tail_any == 5);
  CHECK(r.eventual_rate() == 1.0);
  CHECK(r.tail_accept_rate() == 1.0);
  CHECK(r.accept_rate(18) == 0.0);
  CHECK(r.accept_rate(19) == 1.0);
  CHECK(r.cum_error() == doctest::Approx(12.0));  // sizes 19..30
  CHECK(r.convergence_n(1.0) == 19);
  CHECK(r.convergence_n(2.0) == std::nullopt);
  CHECK_THROWS_WITH_AS(r.accept_rate(31), doctest::Contains("out of range"), Error);

  // A designated payload nobody produces zeroes the target counters but
  // still registers tail activity.
  TrialPlan off = plan;
  off.target_payload = 1;
  TrialReport r2 = run_trials(off);
  CHECK(r2.accept_any == r.accept_any);
  for (std::int64_t n = 1; n <= 30; ++n) CHECK(r2.accept_target[n - 1] == 0);
  CHECK(r2.eventual_target == 0);
  CHECK(r2.tail_any == 5);
}

TEST_CASE("reports are reproducible and thread-count independent") {
  TrialPlan plan{.family = over_half(),
                 .world = World::coin(Rational(3, 5)),
                 .n_max = 120,
                 .trials = 90,
                 .master_seed = 20260823};
  TrialReport first = run_trials(plan);
  TrialReport second = run_trials(plan);
  CHECK(first == second);

  TrialPlan threaded = plan;
  threaded.threads = 3;
  CHECK(run_trials(threaded) == first);
  TrialPlan oversubscribed = plan;
  oversubscribed.threads = 200;  // more threads than trials
  CHECK(run_trials(oversubscribed) == first);

  // A different master seed moves the counts.
  TrialPlan reseeded = plan;
  reseeded.master_seed = 1;
  CHECK(run_trials(reseeded) != first);
}

TEST_CASE("disjoint trial ranges merge into the full run") {
  TrialPlan plan{.family = over_half(),
                 .world = World::coin(Rational(3, 5)),
                 .n_max = 80,
                 .trials = 100,
                 .master_seed = 99};
  TrialReport whole = run_trials(plan);

  TrialPlan lo = plan;
  lo.trials = 60;
  TrialPlan hi = plan;
  hi.trials = 40;
  hi.trial_offset = 60;
  TrialReport left = run_trials(lo);
  TrialReport right = run_trials(hi);
  CHECK(merge_reports(left, right) == whole);
  CHECK(merge_reports(right, left) == whole);

  CHECK_THROWS_WITH_AS(merge_reports(left, left),
                       doctest::Contains("overlapping trial ranges"), Error);
  TrialReport other = right;
  other.master_seed = 7;
  CHECK_THROWS_WITH_AS(merge_reports(left, other),
                       doctest::Contains("different plans"), Error);
}

TEST_CASE("plans validate their shape before running") {
  TrialPlan plan{.family = over_half(),
                 .world = World::coin(Rational(1, 2)),
                 .n_max = 0,
                 .trials = 10,
                 .master_seed = 1};
  CHECK_THROWS_WITH_AS(run_trials(plan), doctest::Contains("n_max must be at least 1"), Error);
  plan.n_max = 10;
  plan.trials = 0;
  CHECK_THROWS_WITH_AS(run_trials(plan), doctest::Contains("trials must be at least 1"), Error);
  plan.trials = 10;
  plan.threads = 0;
  CHECK_THROWS_WITH_AS(run_trials(plan), doctest::Contains("threads must be at least 1"), Error);
}

TEST_CASE("worlds with boundary mass on a tested event are rejected") {
  // Atom exactly on the cut point of the tested interval event.
  World atom = World::real_line({DensityPiece{Rational(0), Rational(1), {Rational(1, 2)}}},
                                {Atom{Rational(1, 2), Rational(1, 2)}});
  Interval below_half{Rational(0), Rational(1, 2), true, false};
  Event ev = Event::of_intervals(SampleSpace::real_line(), {below_half});
  TrialPlan plan{.family = subbasic_verifier(ev, Rational(1, 4), Rational(1, 20)),
                 .world = atom,
                 .n_max = 10,
                 .trials = 5,
                 .master_seed = 3};
  CHECK_THROWS_WITH_AS(run_trials(plan),
                       doctest::Contains("infeasible verifier/world pair"), Error);
}

TEST_CASE("wilson intervals match frozen high-precision values") {
  auto ci = fake_report(50, 100).wilson_ci(1);
  CHECK(ci.first == doctest::Approx(0.403831530366).epsilon(1e-9));
  CHECK(ci.second == doctest::Approx(0.596168469634).epsilon(1e-9));

  ci = fake_report(0, 200).wilson_ci(1);
  CHECK(ci.first == 0.0);
  CHECK(ci.second == doctest::Approx(0.0188453263773).epsilon(1e-9));

  ci = fake_report(137, 1000).wilson_ci(1);
  CHECK(ci.first == doctest::Approx(0.117073130633).epsilon(1e-9));
  CHECK(ci.second == doctest::Approx(0.159705096028).epsilon(1e-9));

  ci = fake_report(200, 200).wilson_ci(1);
  CHECK(ci.first == doctest::Approx(0.981154673623).epsilon(1e-9));
  CHECK(ci.second == 1.0);
}

TEST_CASE("wilson intervals cover the true rate at close to nominal frequency") {
  // 1000 simulated binomial(100, 0.3) draws; the 95% interval should cover
  // 0.3 in at least 93% of them (Wilson's true coverage here is ~95%).
  const double p = 0.3;
  int covered = 0;
  for (int m = 0; m < 1000; ++m) {
    TrialRng rng = TrialRng::keyed(777, static_cast<std::uint64_t>(m));
    std::int64_t s = 0;
    for (int i = 0; i < 100; ++i)
      if (rng.uniform(static_cast<std::uint64_t>(i)) < p) ++s;
    auto ci = fake_report(s, 100).wilson_ci(1);
    if (ci.first <= p && p <= ci.second) ++covered;
  }
  CHECK(covered >= 930);
  CHECK(covered <= 990);
}

TEST_CASE("claims pass and fail on the measured quantities") {
  // Off-target world: mu(H) = 2/5 is outside {mu(H) > 1/2}.
  TrialPlan off{.family = over_half(),
                .world = World::coin(Rational(2, 5)),
                .n_max = 100,
                .trials = 400,
                .master_seed = 11};
  TrialReport off_report = run_trials(off);
  Claim sv3{.kind = "sv3-bound", .alpha = Rational(1, 20)};
  Claim limsup{.kind = "limsup-bound", .alpha = Rational(1, 20)};
  auto results = certify(off, off_report, {sv3, limsup});
  REQUIRE(results.size() == 2);
  CHECK(results[0].pass);
  CHECK(results[0].bound ==
        doctest::Approx(0.05 + 3.0 * std::sqrt(0.05 / 400.0)).epsilon(1e-12));
  CHECK(results[0].measured <= results[0].bound);
  CHECK(results[1].pass);

  // On-target world: mu(H) = 4/5.
  TrialPlan on{.family = over_half(),
               .world = World::coin(Rational(4, 5)),
               .n_max = 200,
               .trials = 200,
               .master_seed = 5};
  TrialReport on_report = run_trials(on);
  Claim sv4{.kind = "sv4-eventual", .target = 0.9};
  Claim conv{.kind = "convergence", .target = 0.9, .horizon = 200};
  results = certify(on, on_report, {sv4, conv});
  CHECK(results[0].pass);
  CHECK(results[0].measured >= 0.9);
  CHECK(results[1].pass);
  CHECK(results[1].measured <= 200.0);

  // An unreachable target fails the claim without throwing.
  Claim impossible{.kind = "sv4-eventual", .target = 1.1};
  results = certify(on, on_report, {impossible});
  CHECK_FALSE(results[0].pass);
}

TEST_CASE("claims that contradict ground truth are configuration errors") {
  TrialPlan on{.family = over_half(),
               .world = World::coin(Rational(4, 5)),
               .n_max = 20,
               .trials = 10,
               .master_seed = 2};
  TrialReport on_report = run_trials(on);
  // sv3 presumes the world is off-target, but 4/5 is inside.
  CHECK_THROWS_WITH_AS(certify(on, on_report, {Claim{.kind = "sv3-bound", .alpha = Rational(1, 20)}}),
                       doctest::Contains("is inside the target hypothesis"), Error);

  TrialPlan off{.family = over_half(),
                .world = World::coin(Rational(1, 5)),
                .n_max = 20,
                .trials = 10,
                .master_seed = 2};
  TrialReport off_report = run_trials(off);
  CHECK_THROWS_WITH_AS(certify(off, off_report, {Claim{.kind = "sv4-eventual", .target = 0.5}}),
                       doctest::Contains("is outside the target hypothesis"), Error);

  CHECK_THROWS_WITH_AS(certify(off, off_report, {Claim{.kind = "bogus"}}),
                       doctest::Contains("unknown claim kind: bogus"), Error);
  CHECK_THROWS_WITH_AS(certify(off, off_report, {Claim{.kind = "sv3-bound", .alpha = Rational(1)}}),
                       doctest::Contains("claim alpha must lie in [0,1)"), Error);
  // Ground truth is checked first, so the horizon complaint needs a world
  // that actually sits inside the target.
  CHECK_THROWS_WITH_AS(
      certify(on, on_report,
              {Claim{.kind = "convergence", .target = 0.5, .horizon = 21}}),
      doctest::Contains("exceeds the report horizon"), Error);
}

TEST_CASE("solver claims check the designated answer against the classifier") {
  VerifierFamily fam = solver(builtin_partition("bias-3cell"), Rational(1, 20));
  World w = World::coin(Rational(4, 5));  // true cell: high (index 2)

  TrialPlan good{.family = fam,
                 .world = w,
                 .n_max = 40,
                 .trials = 10,
                 .master_seed = 4,
                 .target_payload = 2};
  TrialReport report = run_trials(good);
  auto results = certify(good, report, {Claim{.kind = "sv4-eventual", .target = 0.0}});
  CHECK(results[0].pass);

  TrialPlan wrong = good;
  wrong.target_payload = 0;
  CHECK_THROWS_WITH_AS(certify(wrong, run_trials(wrong),
                               {Claim{.kind = "sv4-eventual", .target = 0.0}}),
                       doctest::Contains("designated answer differs from the true answer"),
                       Error);

  // Off-target claims make no sense for solvers: some answer always holds.
  CHECK_THROWS_WITH_AS(certify(good, report, {Claim{.kind = "sv3-bound", .alpha = Rational(1, 20)}}),
                       doctest::Contains("do not apply to solvers"), Error);

  // A world no cell can claim at the search depth is flagged.
  TrialPlan edge = good;
  edge.world = World::coin(Rational(1, 3) + Rational(1, 100));
  edge.target_payload = 1;
  CHECK_THROWS_WITH_AS(certify(edge, run_trials(edge),
                               {Claim{.kind = "sv4-eventual", .target = 0.0, .depth = 64}}),
                       doctest::Contains("no answer contains world"), Error);
}

}  // TEST_SUITE
