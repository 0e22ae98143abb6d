#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace svlab {

// ---------------------------------------------------------------------------
// Propositional (topological) verification over infinite binary sequences.
//
// Information states are cylinders: the set of all infinite extensions of a
// finite bit prefix. Open hypotheses are supplied as entailment oracles:
// entails(sigma) answers "does every extension of sigma lie in the set?".
// Oracles must be monotone (entailment persists under extension), which is
// exactly what makes infinite unions finitely answerable.
// ---------------------------------------------------------------------------

// A finite bit prefix; as a set, the basic open cylinder of its extensions.
struct Cylinder {
  std::string bits;  // characters '0'/'1'

  std::size_t size() const { return bits.size(); }
  Cylinder extended(char b) const { return {bits + b}; }
  bool operator==(const Cylinder&) const = default;
};

// An infinite binary world: a finite prefix followed by a repeating cycle.
// Covers every example in the suite while keeping long-run membership
// questions (like "does a zero ever occur") exactly decidable.
struct BinaryWorld {
  std::string prefix;
  std::string cycle = "0";
  std::string label;

  char bit(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return cycle[(i - prefix.size()) % cycle.size()];
  }
  Cylinder first(std::size_t n) const {
    Cylinder c;
    c.bits.reserve(n);
    for (std::size_t i = 0; i < n; ++i) c.bits.push_back(bit(i));
    return c;
  }
};

// Parses "11(0)" (prefix 11, then zeros), "(01)" (alternating), "0110"
// (that prefix, then zeros), "0101..." (repeat the prefix forever), or the
// names "zeros", "ones", "alternating".
BinaryWorld parse_binary_world(const std::string& pattern);

// Open set presented by a monotone entailment oracle.
struct OpenSetOracle {
  std::string name;
  std::function<bool(const Cylinder&)> entails;
};

// Locally closed piece O \ O': inside the open `in`, outside the open `out`.
struct LocallyClosedPiece {
  OpenSetOracle in;
  OpenSetOracle out;
};

// Countable-union presentation of a hypothesis by locally closed pieces.
// Pieces must be pairwise disjoint (caller obligation); nullopt ends a
// finite list.
struct LocallyClosedPresentation {
  std::string name;
  std::function<std::optional<LocallyClosedPiece>(int)> piece;  // 1-based
};

// What a propositional method says after seeing a prefix: the whole space W
// (no commitment), a piece index, or an answer index for solvers.
struct PropConclusion {
  enum class Kind { Whole, Piece, Answer };
  Kind kind = Kind::Whole;
  int index = 0;          // piece index (1-based) or answer index (0-based)
  std::string label;      // display form: "W", the hypothesis name, or the answer

  bool operator==(const PropConclusion&) const = default;
};

struct PropMethod {
  std::string name;
  std::function<PropConclusion(const Cylinder&)> conclude;
};

// Infallible verifier for an open hypothesis: conclude H exactly when the
// prefix entails it, W otherwise. Never wrong, converges iff the world is
// in H with a finite-stage witness.
PropMethod open_verifier(const OpenSetOracle& open, const std::string& hypothesis_label);

// Limiting verifier for a union of locally closed pieces: conjecture the
// least-indexed piece i with entails(O_i) and not entails(O'_i), searching
// indices up to max(1, prefix length); W when no piece qualifies. Index 1
// stays searchable from the empty prefix so stage-0 conjectures exist.
PropMethod limiting_verifier_prop(const LocallyClosedPresentation& presentation);

// Solver by least-index composition: each answer gets its limiting
// verifier; output the first answer currently conjecturing one of its
// pieces, W if none does.
PropMethod solver_prop(const std::vector<std::pair<std::string, LocallyClosedPresentation>>& answers);

// Conclusions at stages 0..stages, stage n reading the world's first n bits.
std::vector<PropConclusion> simulate_inquiry(const PropMethod& method,
                                             const BinaryWorld& world, int stages);

// ---------------------------------------------------------------------------
// Named examples
// ---------------------------------------------------------------------------

// entails(sigma) iff sigma contains a zero: the open set "some zero occurs".
OpenSetOracle oracle_some_zero();
// entails(sigma) iff sigma contains a one.
OpenSetOracle oracle_some_one();
// entails(sigma) iff sigma has a one at position >= k (0-based).
OpenSetOracle oracle_one_at_or_after(std::size_t k);
OpenSetOracle oracle_whole_space();
OpenSetOracle oracle_empty_set();

// The constantly-zero hypothesis {000...} as the single locally closed
// piece W \ "some one occurs".
LocallyClosedPresentation constant_zero_presentation();
// "Eventually all zeros": piece 1 is the all-zero world; piece k >= 2 keeps
// the worlds whose last one sits at position k-2.
LocallyClosedPresentation eventually_zero_presentation();
// "No zeros" = {111...}: W \ "some zero occurs".
LocallyClosedPresentation no_zeros_presentation();

// Methods addressable by name: "constant-zero" (limiting verifier),
// "some-zero" (open verifier), "eventually-zero" (limiting verifier),
// "zero-solver" (solver over {"some zero", "no zeros"}), "always-whole".
PropMethod prop_method_by_name(const std::string& name);

}  // namespace svlab
