#include "svlab/hypotheses.hpp"

#include <sstream>

#include "svlab/error.hpp"

namespace svlab {

struct Hypothesis::Impl {
  HypKind kind;
  SampleSpace space = SampleSpace::real_line();

  // SubBasic / Band
  std::optional<Event> event;
  Rational threshold = 0;  // SubBasic b
  Rational low = 0, high = 0;

  // And / Or
  std::vector<Hypothesis> parts;

  // ClosedComplement
  std::optional<Hypothesis> inner;

  // FSigma
  PieceFn pieces;
  std::optional<int> piece_count;
  std::string name;
};

Hypothesis Hypothesis::sub_basic(const Event& A, const Rational& b) {
  if (sgn(b) < 0 || b >= 1) fail("sub-basic threshold must lie in [0,1)");
  auto impl = std::make_shared<Impl>();
  impl->kind = HypKind::SubBasic;
  impl->space = A.space();
  impl->event = A;
  impl->threshold = b;
  return Hypothesis(std::move(impl));
}

Hypothesis Hypothesis::band(const Event& A, const Rational& lo, const Rational& hi) {
  if (sgn(lo) < 0 || hi > 1 || lo >= hi) fail("band needs 0 <= lo < hi <= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = HypKind::Band;
  impl->space = A.space();
  impl->event = A;
  impl->low = lo;
  impl->high = hi;
  return Hypothesis(std::move(impl));
}

Hypothesis Hypothesis::conj(const Hypothesis& a, const Hypothesis& b) {
  if (a.space() != b.space()) fail("space mismatch in conjunction");
  auto impl = std::make_shared<Impl>();
  impl->kind = HypKind::And;
  impl->space = a.space();
  impl->parts = {a, b};
  return Hypothesis(std::move(impl));
}

Hypothesis Hypothesis::disj(std::vector<Hypothesis> parts) {
  if (parts.empty()) fail("disjunction needs at least one part");
  for (std::size_t i = 1; i < parts.size(); ++i)
    if (parts[i].space() != parts[0].space()) fail("space mismatch in disjunction");
  auto impl = std::make_shared<Impl>();
  impl->kind = HypKind::Or;
  impl->space = parts[0].space();
  impl->parts = std::move(parts);
  return Hypothesis(std::move(impl));
}

Hypothesis Hypothesis::closed_complement(const Hypothesis& open) {
  if (!open.is_open()) fail("closed_complement needs an open hypothesis");
  auto impl = std::make_shared<Impl>();
  impl->kind = HypKind::ClosedComplement;
  impl->space = open.space();
  impl->inner = open;
  return Hypothesis(std::move(impl));
}

Hypothesis Hypothesis::f_sigma(PieceFn pieces, std::string name) {
  if (!pieces) fail("f_sigma needs a piece enumerator");
  auto first = pieces(1);
  if (!first) fail("f_sigma needs at least one piece");
  auto impl = std::make_shared<Impl>();
  impl->kind = HypKind::FSigma;
  impl->space = first->space();
  impl->pieces = std::move(pieces);
  impl->name = std::move(name);
  return Hypothesis(std::move(impl));
}

Hypothesis Hypothesis::f_sigma(std::vector<Hypothesis> pieces, std::string name) {
  if (pieces.empty()) fail("f_sigma needs at least one piece");
  auto list = std::make_shared<std::vector<Hypothesis>>(std::move(pieces));
  auto impl = std::make_shared<Impl>();
  impl->kind = HypKind::FSigma;
  impl->space = (*list)[0].space();
  impl->pieces = [list](int i) -> std::optional<Hypothesis> {
    if (i < 1 || static_cast<std::size_t>(i) > list->size()) return std::nullopt;
    return (*list)[i - 1];
  };
  impl->piece_count = static_cast<int>(list->size());
  impl->name = std::move(name);
  return Hypothesis(std::move(impl));
}

HypKind Hypothesis::kind() const { return impl_->kind; }
const SampleSpace& Hypothesis::space() const { return impl_->space; }

const Event& Hypothesis::event() const {
  if (!impl_->event) fail("hypothesis has no event");
  return *impl_->event;
}

const Rational& Hypothesis::threshold() const {
  if (impl_->kind != HypKind::SubBasic) fail("threshold on a non-sub-basic hypothesis");
  return impl_->threshold;
}

const Rational& Hypothesis::low() const {
  if (impl_->kind != HypKind::Band) fail("low on a non-band hypothesis");
  return impl_->low;
}

const Rational& Hypothesis::high() const {
  if (impl_->kind != HypKind::Band) fail("high on a non-band hypothesis");
  return impl_->high;
}

const std::vector<Hypothesis>& Hypothesis::parts() const { return impl_->parts; }

const Hypothesis& Hypothesis::inner() const {
  if (impl_->kind != HypKind::ClosedComplement) fail("inner on a non-complement hypothesis");
  return *impl_->inner;
}

std::optional<Hypothesis> Hypothesis::piece(int i) const {
  if (impl_->kind != HypKind::FSigma) fail("piece on a non-FSigma hypothesis");
  if (i < 1) fail("piece index is 1-based");
  return impl_->pieces(i);
}

std::optional<int> Hypothesis::piece_count() const {
  if (impl_->kind != HypKind::FSigma) fail("piece_count on a non-FSigma hypothesis");
  return impl_->piece_count;
}

bool Hypothesis::is_open() const {
  switch (impl_->kind) {
    case HypKind::SubBasic:
    case HypKind::Band:
      return true;
    case HypKind::And:
    case HypKind::Or:
      for (const auto& p : impl_->parts)
        if (!p.is_open()) return false;
      return true;
    default:
      return false;
  }
}

std::string Hypothesis::describe() const {
  std::ostringstream os;
  switch (impl_->kind) {
    case HypKind::SubBasic:
      os << "mu(" << impl_->event->describe() << ")>" << rational_str(impl_->threshold);
      break;
    case HypKind::Band:
      os << rational_str(impl_->low) << "<mu(" << impl_->event->describe() << ")<"
         << rational_str(impl_->high);
      break;
    case HypKind::And:
      os << "(" << impl_->parts[0].describe() << " & " << impl_->parts[1].describe() << ")";
      break;
    case HypKind::Or: {
      os << "(";
      for (std::size_t i = 0; i < impl_->parts.size(); ++i) {
        if (i) os << " | ";
        os << impl_->parts[i].describe();
      }
      os << ")";
      break;
    }
    case HypKind::ClosedComplement:
      os << "not[" << impl_->inner->describe() << "]";
      break;
    case HypKind::FSigma:
      if (!impl_->name.empty()) {
        os << impl_->name;
      } else if (impl_->piece_count) {
        os << "union-of-" << *impl_->piece_count << "-pieces";
      } else {
        os << "countable-union";
      }
      break;
  }
  return os.str();
}

Membership contains(const Hypothesis& h, const World& world, int depth) {
  if (h.space() != world.space()) fail("space mismatch between hypothesis and world");
  switch (h.kind()) {
    case HypKind::SubBasic:
      return world.prob(h.event()) > h.threshold() ? Membership::In : Membership::Out;
    case HypKind::Band: {
      Rational p = world.prob(h.event());
      return (h.low() < p && p < h.high()) ? Membership::In : Membership::Out;
    }
    case HypKind::And: {
      Membership a = contains(h.parts()[0], world, depth);
      Membership b = contains(h.parts()[1], world, depth);
      if (a == Membership::Out || b == Membership::Out) return Membership::Out;
      if (a == Membership::In && b == Membership::In) return Membership::In;
      return Membership::Unknown;
    }
    case HypKind::Or: {
      bool unknown = false;
      for (const auto& p : h.parts()) {
        Membership m = contains(p, world, depth);
        if (m == Membership::In) return Membership::In;
        if (m == Membership::Unknown) unknown = true;
      }
      return unknown ? Membership::Unknown : Membership::Out;
    }
    case HypKind::ClosedComplement: {
      Membership m = contains(h.inner(), world, depth);
      if (m == Membership::In) return Membership::Out;
      if (m == Membership::Out) return Membership::In;
      return Membership::Unknown;
    }
    case HypKind::FSigma: {
      bool unknown = false;
      bool exhausted = false;
      for (int i = 1; i <= depth; ++i) {
        auto p = h.piece(i);
        if (!p) {
          exhausted = true;
          break;
        }
        Membership m = contains(*p, world, depth);
        if (m == Membership::In) return Membership::In;
        if (m == Membership::Unknown) unknown = true;
      }
      if (exhausted && !unknown) return Membership::Out;
      return Membership::Unknown;
    }
  }
  fail("unreachable hypothesis kind");
}

Hypothesis band_as_intersection(const Event& A, const Rational& lo, const Rational& hi) {
  if (sgn(lo) < 0 || hi > 1 || lo >= hi) fail("band needs 0 <= lo < hi <= 1");
  return Hypothesis::conj(Hypothesis::sub_basic(A, lo),
                          Hypothesis::sub_basic(A.complement(), Rational(1) - hi));
}

Partition::Partition(std::vector<Answer> answers) : answers_(std::move(answers)) {
  if (answers_.empty()) fail("partition needs at least one answer");
  for (std::size_t i = 1; i < answers_.size(); ++i)
    if (answers_[i].hypothesis.space() != answers_[0].hypothesis.space())
      fail("space mismatch among partition answers");
}

std::optional<int> Partition::classify(const World& world, int depth) const {
  std::optional<int> found;
  for (std::size_t i = 0; i < answers_.size(); ++i) {
    if (contains(answers_[i].hypothesis, world, depth) == Membership::In) {
      if (found)
        fail("overlapping partition answers: \"" + answers_[*found].label + "\" and \"" +
             answers_[i].label + "\" both contain world " + world.label());
      found = static_cast<int>(i);
    }
  }
  return found;
}

std::vector<std::optional<int>> Partition::validate(const std::vector<World>& worlds,
                                                    int depth) const {
  std::vector<std::optional<int>> out;
  out.reserve(worlds.size());
  for (const auto& w : worlds) out.push_back(classify(w, depth));
  return out;
}

}  // namespace svlab
