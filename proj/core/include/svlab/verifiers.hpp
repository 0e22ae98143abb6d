#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "svlab/hypotheses.hpp"
#include "svlab/measures.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// Verdicts
//
// A test family either keeps sampling (Continue) or accepts. The payload
// identifies what was accepted:
//   - simple families (hoeffding / conjunction / disjunction): 0, the target
//   - limiting families: the 1-based index of the union piece produced
//   - solvers: the 0-based index of the answer produced
// ---------------------------------------------------------------------------

struct Verdict {
  bool accepted = false;
  std::int32_t payload = -1;

  static Verdict accept(std::int32_t payload) { return {true, payload}; }
  static Verdict carry_on() { return {}; }
  bool operator==(const Verdict&) const = default;
};

// ---------------------------------------------------------------------------
// Acceptance thresholds
//
// The count threshold at sample size n for level alpha and bound b is
//   k(n) = ceil(n * (b + t_n)),   t_n = sqrt(ln(pi^2 n^2 / (6 alpha)) / (2n)).
// Accepting iff the empirical count is >= k(n) (ties accept) keeps the
// per-n false-acceptance chance at or below 6 alpha / (pi^2 n^2), which
// sums to alpha over all n.
//
// t_n is computed in double precision and then nudged up by 4 ulps; the
// ceiling is taken in exact rational arithmetic. Over-shooting the ideal
// threshold only tightens the error bound, so the rounding direction is
// always conservative.
// ---------------------------------------------------------------------------

struct ThresholdPoint {
  double t = 0;            // the deviation term t_n actually used
  std::int64_t count = 0;  // k(n): accept iff empirical count >= count
};

ThresholdPoint hoeffding_threshold(std::int64_t n, const Rational& b, const Rational& alpha);

// The full schedule for one (b, alpha) pair.
struct ThresholdSchedule {
  Rational b;
  Rational alpha;
  double t(std::int64_t n) const;
  std::int64_t count(std::int64_t n) const;
};

// ---------------------------------------------------------------------------
// Verifier families
// ---------------------------------------------------------------------------

class CompiledFamily;
struct FamilyNode;  // internal representation, defined in verifiers.cpp

class VerifierFamily {
 public:
  // Internal: families are made by the constructors below, not directly.
  explicit VerifierFamily(std::shared_ptr<const FamilyNode> node);

  // "hoeffding", "conjunction", "disjunction", "limiting", or "solver".
  const std::string& tag() const;
  const Rational& alpha() const;
  const SampleSpace& space() const;

  // The hypothesis acceptance asserts. For limiting families this is the
  // FSigma union; solvers have no single target and throw (use partition()).
  Hypothesis target() const;
  const Partition& partition() const;  // solver families only

  // Verdict on the full sample (n = number of points).
  Verdict test_at(const SampleVector& sample) const;

  // Human-readable name for an accepted payload.
  std::string payload_label(std::int32_t payload) const;

  // Every event the family tests, up to piece index n_max (used for
  // feasibility checks before a run).
  std::vector<Event> events_used(std::int64_t n_max) const;

  const std::shared_ptr<const FamilyNode>& node() const { return node_; }

 private:
  std::shared_ptr<const FamilyNode> node_;
};

// One disjunct of a disjunction: its hypothesis and a builder producing a
// verifier for it at a requested level.
struct Disjunct {
  Hypothesis hypothesis;
  std::function<VerifierFamily(const Rational&)> build;
};

// Verifier for the sub-basic hypothesis {mu : mu(A) > b}: accept at n iff
// the empirical count of A among the first n draws reaches k(n).
VerifierFamily subbasic_verifier(const Event& A, const Rational& b, const Rational& alpha);

// Compiles any open hypothesis (SubBasic / Band / And / Or) into a verifier
// at the given level: bands become conjunctions via the band identity,
// finite disjunctions split the level as alpha/2^i.
VerifierFamily verifier_for(const Hypothesis& open_hypothesis, const Rational& alpha);

// Accept iff both accept. Requires equal levels; the result verifies the
// conjunction of the targets at that same level.
VerifierFamily conjoin(const VerifierFamily& a, const VerifierFamily& b);

// Accept at n iff some disjunct i <= n accepts, where disjunct i runs at
// level alpha/2^i. `disjuncts` is a 1-based enumerator; nullopt ends a
// finite list. The result verifies the union at level alpha.
VerifierFamily disjoin(std::function<std::optional<Disjunct>(int)> disjuncts,
                       const Rational& alpha);

// Convenience: disjoin over open hypotheses, building each disjunct with
// verifier_for.
VerifierFamily disjoin_open(std::function<std::optional<Hypothesis>(int)> parts,
                            const Rational& alpha);

// Limiting verifier for an FSigma union of closed pieces C_1, C_2, ...:
// at sample size n, run the level-alpha verifier for the open complement of
// each piece j <= n and output the least j whose complement-verifier has
// NOT accepted; if every one has accepted, output Continue (read: "not H").
// The output stabilizes, almost surely, to a true piece exactly when the
// world lies in the union.
VerifierFamily limiting_verifier(const Hypothesis& f_sigma, const Rational& alpha);

// Solver for a countable partition into FSigma answers. Piece (i,j) of
// answer i occupies enumeration slot k via the diagonal pairing; at sample
// size n the solver outputs the answer owning the least slot k <= n whose
// complement-verifier has not accepted. Slots pointing past a finite answer
// or piece list never fire.
VerifierFamily solver(const Partition& partition, const Rational& alpha);

// 1-based diagonal (Cantor) unpairing: 1->(1,1), 2->(2,1), 3->(1,2), ...
std::pair<std::int64_t, std::int64_t> diagonal_unpair(std::int64_t k);

// ---------------------------------------------------------------------------
// Compiled evaluation
//
// CompiledFamily freezes a family for horizons up to n_max: it interns the
// distinct events, precomputes every count threshold, and materializes
// union pieces. It is immutable and safe to share across threads; each
// trial gets its own PrefixEvaluator holding the running counts.
// ---------------------------------------------------------------------------

class PrefixEvaluator {
 public:
  virtual ~PrefixEvaluator() = default;
  virtual void reset() = 0;
  // Feeds the next draw; returns the verdict at the new sample size.
  virtual Verdict step(const Point& p) = 0;
};

class CompiledFamily {
 public:
  struct Impl;  // internal plan representation

  static CompiledFamily compile(const VerifierFamily& family, std::int64_t n_max);
  std::unique_ptr<PrefixEvaluator> evaluator() const;
  const std::vector<Event>& events() const;
  std::int64_t n_max() const;

 private:
  explicit CompiledFamily(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Verdict sequence for one simulated trial: seed keys the draw stream.
std::vector<Verdict> run(const VerifierFamily& family, const World& world,
                         std::int64_t n_max, std::uint64_t seed);

}  // namespace svlab
