#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "svlab/measures.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// Hypotheses are sets of worlds (probability measures), built from the
// sub-basis of the weak topology:
//
//   SubBasic(A, b)          {mu : mu(A) > b}                        open
//   Band(A, lo, hi)         {mu : lo < mu(A) < hi}                  open
//   And(h1, h2), Or(list)   finite intersection / union
//   ClosedComplement(u)     complement of an open set               closed
//   FSigma(pieces)          countable union of pieces (usually closed)
//
// FSigma pieces come from an enumerator so infinite unions (e.g. a band
// exhausted by closed sub-bands) stay representable.
// ---------------------------------------------------------------------------

enum class HypKind { SubBasic, Band, And, Or, ClosedComplement, FSigma };

enum class Membership { In, Out, Unknown };

class Hypothesis {
 public:
  static Hypothesis sub_basic(const Event& A, const Rational& b);
  static Hypothesis band(const Event& A, const Rational& lo, const Rational& hi);
  static Hypothesis conj(const Hypothesis& a, const Hypothesis& b);
  static Hypothesis disj(std::vector<Hypothesis> parts);
  static Hypothesis closed_complement(const Hypothesis& open);

  // 1-based enumerator; nullopt marks the end of a finite list. The
  // enumerator must be pure: piece(i) always returns the same hypothesis.
  using PieceFn = std::function<std::optional<Hypothesis>(int)>;
  static Hypothesis f_sigma(PieceFn pieces, std::string name = "");
  static Hypothesis f_sigma(std::vector<Hypothesis> pieces, std::string name = "");

  HypKind kind() const;
  const SampleSpace& space() const;

  const Event& event() const;        // SubBasic, Band
  const Rational& threshold() const; // SubBasic
  const Rational& low() const;       // Band
  const Rational& high() const;      // Band
  const std::vector<Hypothesis>& parts() const;  // And (size 2), Or
  const Hypothesis& inner() const;   // ClosedComplement
  std::optional<Hypothesis> piece(int i) const;  // FSigma, 1-based
  std::optional<int> piece_count() const;        // FSigma; nullopt if unbounded

  // Built from the open fragment only (SubBasic/Band/And/Or).
  bool is_open() const;

  std::string describe() const;

 private:
  struct Impl;
  explicit Hypothesis(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Three-valued membership. Exact rational comparisons decide the open
// fragment and closed complements outright; FSigma unions are searched to
// `depth` pieces, so In answers are definitive and never downgrade as depth
// grows, while Unknown may upgrade to In (or to Out once a finite piece
// list is exhausted).
Membership contains(const Hypothesis& h, const World& world, int depth = 64);

// The band identity {mu : mu(A) in (lo,hi)} =
//   {mu : mu(A) > lo} intersect {mu : mu(complement A) > 1-hi},
// returned as an And of two SubBasic nodes.
Hypothesis band_as_intersection(const Event& A, const Rational& lo, const Rational& hi);

// ---------------------------------------------------------------------------
// Partitions: countably many exclusive answers covering the space, each an
// FSigma hypothesis. The "true answer" for a world is the unique answer
// containing it.
// ---------------------------------------------------------------------------

struct Answer {
  std::string label;
  Hypothesis hypothesis;
};

class Partition {
 public:
  explicit Partition(std::vector<Answer> answers);

  const std::vector<Answer>& answers() const { return answers_; }

  // Index of the unique answer containing the world, searching each answer's
  // pieces to `depth`. nullopt if no answer is confirmed at this depth.
  // Throws Error if two answers both claim the world (overlap).
  std::optional<int> classify(const World& world, int depth = 64) const;

  // Runs classify on each world; throws if any world is claimed by two
  // answers. Returns the answer index per world (nullopt = undecided).
  std::vector<std::optional<int>> validate(const std::vector<World>& worlds,
                                           int depth = 64) const;

 private:
  std::vector<Answer> answers_;
};

}  // namespace svlab
