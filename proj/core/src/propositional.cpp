#include "svlab/propositional.hpp"

#include <algorithm>
#include <utility>

#include "svlab/error.hpp"

namespace svlab {

namespace {

bool all_bits(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

}  // namespace

BinaryWorld parse_binary_world(const std::string& pattern) {
  if (pattern == "zeros") return {"", "0", "zeros"};
  if (pattern == "ones") return {"", "1", "ones"};
  if (pattern == "alternating") return {"", "01", "alternating"};

  BinaryWorld w;
  w.label = pattern;
  std::string body = pattern;

  // "0101..." means: repeat the written block forever.
  if (body.size() > 3 && body.substr(body.size() - 3) == "...") {
    body = body.substr(0, body.size() - 3);
    if (body.empty() || !all_bits(body))
      fail("bad world pattern: \"" + pattern + "\" (expected bits before \"...\")");
    w.cycle = body;
    return w;
  }

  auto open = body.find('(');
  if (open != std::string::npos) {
    if (body.back() != ')')
      fail("bad world pattern: \"" + pattern + "\" (expected closing parenthesis)");
    w.prefix = body.substr(0, open);
    w.cycle = body.substr(open + 1, body.size() - open - 2);
    if (w.cycle.empty())
      fail("bad world pattern: \"" + pattern + "\" (cycle must be non-empty)");
    if (!all_bits(w.prefix) || !all_bits(w.cycle))
      fail("bad world pattern: \"" + pattern + "\" (only bits 0/1 allowed)");
    return w;
  }

  if (body.empty() || !all_bits(body))
    fail("bad world pattern: \"" + pattern + "\" (only bits 0/1 allowed)");
  w.prefix = body;
  w.cycle = "0";  // a bare finite word continues with zeros
  return w;
}

PropMethod open_verifier(const OpenSetOracle& open, const std::string& hypothesis_label) {
  PropMethod m;
  m.name = "verify[" + hypothesis_label + "]";
  m.conclude = [open, hypothesis_label](const Cylinder& sigma) {
    if (open.entails(sigma)) return PropConclusion{PropConclusion::Kind::Piece, 1, hypothesis_label};
    return PropConclusion{PropConclusion::Kind::Whole, 0, "W"};
  };
  return m;
}

PropMethod limiting_verifier_prop(const LocallyClosedPresentation& presentation) {
  PropMethod m;
  m.name = "limit[" + presentation.name + "]";
  m.conclude = [presentation](const Cylinder& sigma) {
    int bound = std::max<int>(1, static_cast<int>(sigma.size()));
    for (int i = 1; i <= bound; ++i) {
      auto piece = presentation.piece(i);
      if (!piece) break;  // finite presentation exhausted
      if (piece->in.entails(sigma) && !piece->out.entails(sigma))
        return PropConclusion{PropConclusion::Kind::Piece, i,
                              presentation.name + ":piece-" + std::to_string(i)};
    }
    return PropConclusion{PropConclusion::Kind::Whole, 0, "W"};
  };
  return m;
}

PropMethod solver_prop(
    const std::vector<std::pair<std::string, LocallyClosedPresentation>>& answers) {
  if (answers.empty()) fail("solver needs at least one answer");
  PropMethod m;
  std::string joined;
  std::vector<std::pair<std::string, PropMethod>> limiters;
  limiters.reserve(answers.size());
  for (const auto& [label, presentation] : answers) {
    if (!joined.empty()) joined += "|";
    joined += label;
    limiters.emplace_back(label, limiting_verifier_prop(presentation));
  }
  m.name = "solve[" + joined + "]";
  m.conclude = [limiters](const Cylinder& sigma) {
    for (std::size_t a = 0; a < limiters.size(); ++a) {
      PropConclusion c = limiters[a].second.conclude(sigma);
      if (c.kind == PropConclusion::Kind::Piece)
        return PropConclusion{PropConclusion::Kind::Answer, static_cast<int>(a),
                              limiters[a].first};
    }
    return PropConclusion{PropConclusion::Kind::Whole, 0, "W"};
  };
  return m;
}

std::vector<PropConclusion> simulate_inquiry(const PropMethod& method,
                                             const BinaryWorld& world, int stages) {
  if (stages < 0) fail("stages must be non-negative");
  std::vector<PropConclusion> out;
  out.reserve(static_cast<std::size_t>(stages) + 1);
  for (int n = 0; n <= stages; ++n)
    out.push_back(method.conclude(world.first(static_cast<std::size_t>(n))));
  return out;
}

OpenSetOracle oracle_some_zero() {
  return {"some zero occurs", [](const Cylinder& s) {
            return s.bits.find('0') != std::string::npos;
          }};
}

OpenSetOracle oracle_some_one() {
  return {"some one occurs", [](const Cylinder& s) {
            return s.bits.find('1') != std::string::npos;
          }};
}

OpenSetOracle oracle_one_at_or_after(std::size_t k) {
  return {"a one occurs at or after position " + std::to_string(k),
          [k](const Cylinder& s) {
            return k < s.bits.size() && s.bits.find('1', k) != std::string::npos;
          }};
}

OpenSetOracle oracle_whole_space() {
  return {"W", [](const Cylinder&) { return true; }};
}

OpenSetOracle oracle_empty_set() {
  return {"empty", [](const Cylinder&) { return false; }};
}

LocallyClosedPresentation constant_zero_presentation() {
  LocallyClosedPresentation p;
  p.name = "constant-zero";
  p.piece = [](int i) -> std::optional<LocallyClosedPiece> {
    if (i == 1) return LocallyClosedPiece{oracle_whole_space(), oracle_some_one()};
    return std::nullopt;
  };
  return p;
}

LocallyClosedPresentation eventually_zero_presentation() {
  LocallyClosedPresentation p;
  p.name = "eventually-zero";
  // Piece 1: never a one. Piece k >= 2: a one at or after position k-2, but
  // none at or after k-1, i.e. the last one sits exactly at position k-2.
  p.piece = [](int i) -> std::optional<LocallyClosedPiece> {
    if (i < 1) return std::nullopt;
    if (i == 1) return LocallyClosedPiece{oracle_whole_space(), oracle_some_one()};
    auto k = static_cast<std::size_t>(i);
    return LocallyClosedPiece{oracle_one_at_or_after(k - 2), oracle_one_at_or_after(k - 1)};
  };
  return p;
}

LocallyClosedPresentation no_zeros_presentation() {
  LocallyClosedPresentation p;
  p.name = "no-zeros";
  p.piece = [](int i) -> std::optional<LocallyClosedPiece> {
    if (i == 1) return LocallyClosedPiece{oracle_whole_space(), oracle_some_zero()};
    return std::nullopt;
  };
  return p;
}

PropMethod prop_method_by_name(const std::string& name) {
  if (name == "constant-zero") return limiting_verifier_prop(constant_zero_presentation());
  if (name == "some-zero") return open_verifier(oracle_some_zero(), "some zero occurs");
  if (name == "eventually-zero") return limiting_verifier_prop(eventually_zero_presentation());
  if (name == "zero-solver") {
    // "Some zero" is open, so it is the single locally closed piece O \ empty.
    LocallyClosedPresentation some_zero;
    some_zero.name = "some-zero";
    some_zero.piece = [](int i) -> std::optional<LocallyClosedPiece> {
      if (i == 1) return LocallyClosedPiece{oracle_some_zero(), oracle_empty_set()};
      return std::nullopt;
    };
    return solver_prop({{"some zero", some_zero}, {"no zeros", no_zeros_presentation()}});
  }
  if (name == "always-whole")
    return PropMethod{"always-whole", [](const Cylinder&) {
                        return PropConclusion{PropConclusion::Kind::Whole, 0, "W"};
                      }};
  fail("unknown propositional method: \"" + name + "\"");
}

}  // namespace svlab
