#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "svlab/rational.hpp"
#include "svlab/rng.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// Sample spaces
//
// Two kinds of observation space are supported:
//   - finite alphabet: draws are symbols from a fixed list;
//   - real line: draws are reals, laws are piecewise-polynomial densities
//     plus finitely many point masses.
// Spaces compare structurally; every cross-space operation checks agreement
// and throws Error("space mismatch ...") otherwise.
// ---------------------------------------------------------------------------

enum class SpaceKind { FiniteAlphabet, RealLine };

class SampleSpace {
 public:
  static SampleSpace finite_alphabet(std::vector<std::string> symbols);
  static SampleSpace real_line();

  SpaceKind kind() const;
  // Finite-alphabet accessors; throw on a real-line space.
  const std::vector<std::string>& symbols() const;
  std::uint32_t symbol_index(const std::string& name) const;

  bool operator==(const SampleSpace& other) const;
  bool operator!=(const SampleSpace& other) const { return !(*this == other); }
  std::string describe() const;

 private:
  struct Impl;
  explicit SampleSpace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
  friend class Event;
};

// One observation: a symbol index (finite alphabet) or a real (real line).
using Point = std::variant<std::uint32_t, double>;

struct SampleVector {
  SampleSpace space;
  std::vector<Point> points;
};

// ---------------------------------------------------------------------------
// Events
//
// Finite alphabet: an event is a set of symbols, stored as sorted indices.
// Real line: an event is a finite union of intervals with rational endpoints,
// kept in canonical form: pieces are nonempty, sorted, pairwise disjoint, and
// maximal (no two pieces can be merged into one interval). Canonical form is
// unique per extension, so operator== decides extensional equality.
// ---------------------------------------------------------------------------

struct Interval {
  // nullopt endpoint = unbounded on that side (tag must then be open).
  std::optional<Rational> lo, hi;
  bool lo_closed = false;
  bool hi_closed = false;
};

class Event {
 public:
  // Finite-alphabet event from symbol names (deduplicated).
  static Event of_symbols(const SampleSpace& space, const std::vector<std::string>& names);
  // Real-line event; the pieces are canonicalized (empty ones dropped,
  // overlapping or touching ones merged).
  static Event of_intervals(const SampleSpace& space, std::vector<Interval> pieces);
  static Event empty(const SampleSpace& space);
  static Event whole(const SampleSpace& space);

  Event complement() const;
  Event intersect(const Event& other) const;
  Event unite(const Event& other) const;

  bool contains_point(const Point& p) const;
  bool is_empty() const;

  const SampleSpace& space() const { return space_; }
  const std::vector<std::uint32_t>& symbol_ids() const;  // finite alphabet
  const std::vector<Interval>& pieces() const;           // real line

  // Finite endpoints of the canonical pieces; the topological boundary for
  // real-line events. Empty for finite-alphabet events.
  std::vector<Rational> boundary_points() const;

  bool operator==(const Event& other) const;
  bool operator!=(const Event& other) const { return !(*this == other); }
  std::string describe() const;

 private:
  Event(SampleSpace space, std::vector<std::uint32_t> ids);
  Event(SampleSpace space, std::vector<Interval> pieces);
  SampleSpace space_;
  std::vector<std::uint32_t> ids_;    // finite alphabet
  std::vector<Interval> pieces_;      // real line
};

// ---------------------------------------------------------------------------
// Worlds (probability measures)
// ---------------------------------------------------------------------------

// Polynomial density on [lo, hi): coeffs[k] multiplies x^k.
struct DensityPiece {
  Rational lo, hi;
  std::vector<Rational> coeffs;
};

struct Atom {
  Rational at;
  Rational mass;
};

class World {
 public:
  // Law on a finite alphabet; probs must sum to exactly 1.
  static World finite(const SampleSpace& space, std::vector<Rational> probs,
                      std::string label = "");
  // Real-line law: piecewise-polynomial density plus point masses. Total
  // mass must be exactly 1; the density must be nonnegative at piece ends
  // and midpoints (cheap sanity check, not a full positivity proof).
  static World real_line(std::vector<DensityPiece> density, std::vector<Atom> atoms,
                         std::string label = "");
  // Coin world on the two-symbol alphabet {H, T} with P(H) = p.
  static World coin(const Rational& p);

  const SampleSpace& space() const;
  const std::string& label() const;
  const std::vector<Rational>& finite_probs() const;
  const std::vector<Atom>& atoms() const;

  // Exact probability of an event under this law.
  Rational prob(const Event& event) const;

  // Draw i of the trial stream keyed by rng.
  Point draw(const TrialRng& rng, std::uint64_t draw_index) const;

  bool operator==(const World& other) const;

 private:
  struct Impl;
  explicit World(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// ---------------------------------------------------------------------------
// Module operations
// ---------------------------------------------------------------------------

inline Rational prob(const World& world, const Event& event) { return world.prob(event); }

// First n draws of trial `trial_index` under `master_seed`. Extending n with
// the same seed and trial preserves the earlier draws.
SampleVector sample(const World& world, std::int64_t n, std::uint64_t master_seed,
                    std::uint64_t trial_index = 0);

// Number of the first n sample points lying in the event.
std::int64_t empirical_count(const SampleVector& sample, const Event& event, std::int64_t n);

// True iff the event's boundary carries no mass under the world: no atom of
// the world sits on a canonical interval endpoint. Finite-alphabet events
// are always feasible (discrete topology, empty boundary).
bool is_feasible(const World& world, const Event& event);

struct WeakConvergenceEventReport {
  std::string event;
  double max_tail_deviation = 0.0;
  bool within_tolerance = false;
};

struct WeakConvergenceReport {
  bool converged = false;
  std::vector<WeakConvergenceEventReport> events;
};

// Checks weak-star convergence of `sequence` to `limit` through the given
// events: for each event, every measure in the tail of the sequence (the
// last quarter of the entries) must be within `tol` of the limit value.
// Throws Error("not a continuity set ...") if an event is infeasible for
// the limit world.
WeakConvergenceReport weak_convergence_check(const std::vector<World>& sequence,
                                             const World& limit,
                                             const std::vector<Event>& events,
                                             const Rational& tol);

}  // namespace svlab
