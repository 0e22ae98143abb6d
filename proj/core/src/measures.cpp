#include "svlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "svlab/error.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// SampleSpace
// ---------------------------------------------------------------------------

struct SampleSpace::Impl {
  SpaceKind kind;
  std::vector<std::string> symbols;
  std::map<std::string, std::uint32_t> index;
};

SampleSpace SampleSpace::finite_alphabet(std::vector<std::string> symbols) {
  if (symbols.empty()) fail("finite alphabet needs at least one symbol");
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::FiniteAlphabet;
  impl->symbols = std::move(symbols);
  for (std::uint32_t i = 0; i < impl->symbols.size(); ++i) {
    if (!impl->index.emplace(impl->symbols[i], i).second)
      fail("duplicate symbol in alphabet: " + impl->symbols[i]);
  }
  return SampleSpace(std::move(impl));
}

SampleSpace SampleSpace::real_line() {
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::RealLine;
  return SampleSpace(std::move(impl));
}

SpaceKind SampleSpace::kind() const { return impl_->kind; }

const std::vector<std::string>& SampleSpace::symbols() const {
  if (impl_->kind != SpaceKind::FiniteAlphabet) fail("real-line space has no symbols");
  return impl_->symbols;
}

std::uint32_t SampleSpace::symbol_index(const std::string& name) const {
  auto& idx = impl_->index;
  auto it = idx.find(name);
  if (it == idx.end()) fail("unknown symbol: " + name);
  return it->second;
}

bool SampleSpace::operator==(const SampleSpace& other) const {
  if (impl_ == other.impl_) return true;
  if (impl_->kind != other.impl_->kind) return false;
  return impl_->symbols == other.impl_->symbols;
}

std::string SampleSpace::describe() const {
  if (impl_->kind == SpaceKind::RealLine) return "real-line";
  std::string s = "alphabet{";
  for (std::size_t i = 0; i < impl_->symbols.size(); ++i) {
    if (i) s += ",";
    s += impl_->symbols[i];
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// Intervals and canonicalization
// ---------------------------------------------------------------------------

namespace {

bool interval_is_empty(const Interval& iv) {
  if (iv.lo && iv.hi) {
    int c = cmp(*iv.lo, *iv.hi);
    if (c > 0) return true;
    if (c == 0) return !(iv.lo_closed && iv.hi_closed);
  }
  return false;
}

// Start-order: -inf first; at equal finite values a closed start comes first.
bool starts_before(const Interval& a, const Interval& b) {
  if (!a.lo) return b.lo.has_value();
  if (!b.lo) return false;
  int c = cmp(*a.lo, *b.lo);
  if (c != 0) return c < 0;
  return a.lo_closed && !b.lo_closed;
}

// True if `next` overlaps or touches `cur` (so the union is one interval),
// assuming cur starts no later than next.
bool can_merge(const Interval& cur, const Interval& next) {
  if (!cur.hi) return true;
  if (!next.lo) return true;
  int c = cmp(*next.lo, *cur.hi);
  if (c < 0) return true;
  if (c > 0) return false;
  return next.lo_closed || cur.hi_closed;
}

// Later of two upper endpoints (+inf greatest; at equal values closed wins).
void extend_hi(Interval& cur, const Interval& next) {
  if (!cur.hi) return;
  if (!next.hi) {
    cur.hi.reset();
    cur.hi_closed = false;
    return;
  }
  int c = cmp(*next.hi, *cur.hi);
  if (c > 0) {
    cur.hi = next.hi;
    cur.hi_closed = next.hi_closed;
  } else if (c == 0) {
    cur.hi_closed = cur.hi_closed || next.hi_closed;
  }
}

std::vector<Interval> canonicalize(std::vector<Interval> pieces) {
  std::vector<Interval> kept;
  for (auto& iv : pieces) {
    if (!iv.lo) iv.lo_closed = false;
    if (!iv.hi) iv.hi_closed = false;
    if (!interval_is_empty(iv)) kept.push_back(std::move(iv));
  }
  std::sort(kept.begin(), kept.end(), starts_before);
  std::vector<Interval> out;
  for (auto& iv : kept) {
    if (!out.empty() && can_merge(out.back(), iv)) {
      extend_hi(out.back(), iv);
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

// Membership of an exact rational position.
bool interval_member(const Interval& iv, const Rational& x) {
  if (iv.lo) {
    int c = cmp(x, *iv.lo);
    if (c < 0 || (c == 0 && !iv.lo_closed)) return false;
  }
  if (iv.hi) {
    int c = cmp(x, *iv.hi);
    if (c > 0 || (c == 0 && !iv.hi_closed)) return false;
  }
  return true;
}

// Membership of a double, compared exactly against rational endpoints.
bool interval_member(const Interval& iv, double x) {
  if (iv.lo) {
    int c = -cmp(*iv.lo, x);  // cmp(mpq, double) is exact
    if (c < 0 || (c == 0 && !iv.lo_closed)) return false;
  }
  if (iv.hi) {
    int c = -cmp(*iv.hi, x);
    if (c > 0 || (c == 0 && !iv.hi_closed)) return false;
  }
  return true;
}

std::string bound_str(const std::optional<Rational>& v, bool closed, bool is_lo) {
  if (!v) return is_lo ? "(-inf" : "+inf)";
  std::string s = rational_str(*v);
  if (is_lo) return (closed ? "[" : "(") + s;
  return s + (closed ? "]" : ")");
}

}  // namespace

// ---------------------------------------------------------------------------
// Event
// ---------------------------------------------------------------------------

Event::Event(SampleSpace space, std::vector<std::uint32_t> ids)
    : space_(std::move(space)), ids_(std::move(ids)) {}

Event::Event(SampleSpace space, std::vector<Interval> pieces)
    : space_(std::move(space)), pieces_(std::move(pieces)) {}

Event Event::of_symbols(const SampleSpace& space, const std::vector<std::string>& names) {
  if (space.kind() != SpaceKind::FiniteAlphabet)
    fail("symbol event on a non-alphabet space");
  std::vector<std::uint32_t> ids;
  for (const auto& n : names) ids.push_back(space.symbol_index(n));
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return Event(space, std::move(ids));
}

Event Event::of_intervals(const SampleSpace& space, std::vector<Interval> pieces) {
  if (space.kind() != SpaceKind::RealLine)
    fail("interval event on a non-real-line space");
  return Event(space, canonicalize(std::move(pieces)));
}

Event Event::empty(const SampleSpace& space) {
  if (space.kind() == SpaceKind::FiniteAlphabet)
    return Event(space, std::vector<std::uint32_t>{});
  return Event(space, std::vector<Interval>{});
}

Event Event::whole(const SampleSpace& space) {
  if (space.kind() == SpaceKind::FiniteAlphabet) {
    std::vector<std::uint32_t> ids(space.symbols().size());
    for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
    return Event(space, std::move(ids));
  }
  return Event(space, std::vector<Interval>{Interval{}});
}

Event Event::complement() const {
  if (space_.kind() == SpaceKind::FiniteAlphabet) {
    std::vector<std::uint32_t> ids;
    std::size_t total = space_.symbols().size();
    std::size_t j = 0;
    for (std::uint32_t i = 0; i < total; ++i) {
      if (j < ids_.size() && ids_[j] == i) {
        ++j;
      } else {
        ids.push_back(i);
      }
    }
    return Event(space_, std::move(ids));
  }
  // Sweep the gaps between canonical pieces.
  std::vector<Interval> out;
  std::optional<Rational> cursor;  // nullopt = -inf
  bool cursor_closed = false;      // whether the cursor point itself is in the gap
  bool at_start = true;
  for (const auto& iv : pieces_) {
    if (iv.lo) {
      Interval gap;
      gap.lo = cursor;
      gap.lo_closed = !at_start && cursor_closed;
      gap.hi = iv.lo;
      gap.hi_closed = !iv.lo_closed;
      if (!interval_is_empty(gap) && (gap.lo || gap.hi)) out.push_back(std::move(gap));
    }
    if (!iv.hi) {
      return Event(space_, canonicalize(std::move(out)));
    }
    cursor = iv.hi;
    cursor_closed = !iv.hi_closed;
    at_start = false;
  }
  Interval tail;
  tail.lo = cursor;
  tail.lo_closed = !at_start && cursor_closed;
  out.push_back(std::move(tail));
  return Event(space_, canonicalize(std::move(out)));
}

Event Event::intersect(const Event& other) const {
  if (space_ != other.space_) fail("space mismatch in event intersection");
  if (space_.kind() == SpaceKind::FiniteAlphabet) {
    std::vector<std::uint32_t> ids;
    std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                          std::back_inserter(ids));
    return Event(space_, std::move(ids));
  }
  std::vector<Interval> out;
  for (const auto& a : pieces_) {
    for (const auto& b : other.pieces_) {
      Interval iv;
      // max of the lower bounds
      if (!a.lo) {
        iv.lo = b.lo;
        iv.lo_closed = b.lo_closed;
      } else if (!b.lo) {
        iv.lo = a.lo;
        iv.lo_closed = a.lo_closed;
      } else {
        int c = cmp(*a.lo, *b.lo);
        iv.lo = (c >= 0) ? a.lo : b.lo;
        iv.lo_closed = (c > 0)   ? a.lo_closed
                       : (c < 0) ? b.lo_closed
                                 : (a.lo_closed && b.lo_closed);
      }
      // min of the upper bounds
      if (!a.hi) {
        iv.hi = b.hi;
        iv.hi_closed = b.hi_closed;
      } else if (!b.hi) {
        iv.hi = a.hi;
        iv.hi_closed = a.hi_closed;
      } else {
        int c = cmp(*a.hi, *b.hi);
        iv.hi = (c <= 0) ? a.hi : b.hi;
        iv.hi_closed = (c < 0)   ? a.hi_closed
                       : (c > 0) ? b.hi_closed
                                 : (a.hi_closed && b.hi_closed);
      }
      if (!interval_is_empty(iv)) out.push_back(std::move(iv));
    }
  }
  return Event(space_, canonicalize(std::move(out)));
}

Event Event::unite(const Event& other) const {
  if (space_ != other.space_) fail("space mismatch in event union");
  if (space_.kind() == SpaceKind::FiniteAlphabet) {
    std::vector<std::uint32_t> ids;
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                   std::back_inserter(ids));
    return Event(space_, std::move(ids));
  }
  std::vector<Interval> all = pieces_;
  all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
  return Event(space_, canonicalize(std::move(all)));
}

bool Event::contains_point(const Point& p) const {
  if (space_.kind() == SpaceKind::FiniteAlphabet) {
    auto sym = std::get<std::uint32_t>(p);
    return std::binary_search(ids_.begin(), ids_.end(), sym);
  }
  double x = std::get<double>(p);
  for (const auto& iv : pieces_)
    if (interval_member(iv, x)) return true;
  return false;
}

bool Event::is_empty() const {
  return space_.kind() == SpaceKind::FiniteAlphabet ? ids_.empty() : pieces_.empty();
}

const std::vector<std::uint32_t>& Event::symbol_ids() const {
  if (space_.kind() != SpaceKind::FiniteAlphabet) fail("not a finite-alphabet event");
  return ids_;
}

const std::vector<Interval>& Event::pieces() const {
  if (space_.kind() != SpaceKind::RealLine) fail("not a real-line event");
  return pieces_;
}

std::vector<Rational> Event::boundary_points() const {
  std::vector<Rational> pts;
  if (space_.kind() != SpaceKind::RealLine) return pts;
  for (const auto& iv : pieces_) {
    if (iv.lo) pts.push_back(*iv.lo);
    if (iv.hi) pts.push_back(*iv.hi);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool Event::operator==(const Event& other) const {
  if (space_ != other.space_) return false;
  if (space_.kind() == SpaceKind::FiniteAlphabet) return ids_ == other.ids_;
  if (pieces_.size() != other.pieces_.size()) return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto &a = pieces_[i], &b = other.pieces_[i];
    if (a.lo.has_value() != b.lo.has_value() || a.hi.has_value() != b.hi.has_value())
      return false;
    if (a.lo && *a.lo != *b.lo) return false;
    if (a.hi && *a.hi != *b.hi) return false;
    if (a.lo_closed != b.lo_closed || a.hi_closed != b.hi_closed) return false;
  }
  return true;
}

std::string Event::describe() const {
  std::ostringstream os;
  if (space_.kind() == SpaceKind::FiniteAlphabet) {
    os << "{";
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (i) os << ",";
      os << space_.symbols()[ids_[i]];
    }
    os << "}";
    return os.str();
  }
  if (pieces_.empty()) return "{}";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i) os << "+";
    os << bound_str(pieces_[i].lo, pieces_[i].lo_closed, true) << ","
       << bound_str(pieces_[i].hi, pieces_[i].hi_closed, false);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// World
// ---------------------------------------------------------------------------

namespace {

// Exact integral of the polynomial over [a, b].
Rational poly_integral(const std::vector<Rational>& coeffs, const Rational& a,
                       const Rational& b) {
  Rational total = 0;
  Rational pa = a, pb = b;  // running powers a^(k+1), b^(k+1)
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    total += coeffs[k] * (pb - pa) / Rational(static_cast<long>(k + 1));
    pa *= a;
    pb *= b;
  }
  return total;
}

double poly_eval(const std::vector<double>& coeffs, double x) {
  double v = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
  return v;
}

// Precomputed continuous segment for sampling.
struct DrawSegment {
  double x_lo, x_hi;
  double mass_lo, mass_hi;        // cumulative continuous mass at x_lo / x_hi
  std::vector<double> coeffs;     // density coefficients as doubles
};

}  // namespace

struct World::Impl {
  SampleSpace space = SampleSpace::real_line();
  std::string label;

  // finite alphabet
  std::vector<Rational> probs;
  std::vector<double> cumulative;

  // real line
  std::vector<DensityPiece> density;
  std::vector<Atom> atoms;
  Rational continuous_mass = 0;
  std::vector<DrawSegment> segments;      // continuous inverse-CDF table
  std::vector<double> atom_u_edges;       // cumulative u-space edges past the continuous block
  std::vector<double> atom_positions;
  double continuous_mass_d = 0;
};

World World::finite(const SampleSpace& space, std::vector<Rational> probs,
                    std::string label) {
  if (space.kind() != SpaceKind::FiniteAlphabet)
    fail("finite law on a non-alphabet space");
  if (probs.size() != space.symbols().size())
    fail("law size does not match alphabet size");
  Rational total = 0;
  for (const auto& p : probs) {
    if (sgn(p) < 0 || p > 1) fail("law entries must lie in [0,1]");
    total += p;
  }
  if (total != 1) fail("law must sum to 1, got " + rational_str(total));
  auto impl = std::make_shared<Impl>();
  impl->space = space;
  impl->label = std::move(label);
  impl->probs = std::move(probs);
  double acc = 0;
  for (const auto& p : impl->probs) {
    acc += rational_to_double(p);
    impl->cumulative.push_back(acc);
  }
  impl->cumulative.back() = 1.0;
  return World(std::move(impl));
}

World World::coin(const Rational& p) {
  if (sgn(p) < 0 || p > 1) fail("coin bias must lie in [0,1]");
  static const SampleSpace coin_space = SampleSpace::finite_alphabet({"H", "T"});
  return finite(coin_space, {p, Rational(1) - p}, "coin(" + rational_str(p) + ")");
}

World World::real_line(std::vector<DensityPiece> density, std::vector<Atom> atoms,
                       std::string label) {
  auto impl = std::make_shared<Impl>();
  impl->space = SampleSpace::real_line();
  impl->label = std::move(label);

  std::sort(density.begin(), density.end(),
            [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
  Rational mass = 0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const auto& d = density[i];
    if (d.lo >= d.hi) fail("density piece needs lo < hi");
    if (i && density[i - 1].hi > d.lo) fail("density pieces overlap");
    if (d.coeffs.empty()) fail("density piece needs coefficients");
    // Nonnegativity spot check at the ends and midpoint.
    Rational midpoint = (d.lo + d.hi) / 2;
    for (const Rational& x : {d.lo, midpoint, d.hi}) {
      Rational v = 0, px = 1;
      for (const auto& c : d.coeffs) {
        v += c * px;
        px *= x;
      }
      if (sgn(v) < 0) fail("density negative at x=" + rational_str(x));
    }
    mass += poly_integral(d.coeffs, d.lo, d.hi);
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.at < b.at; });
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (sgn(atoms[i].mass) <= 0) fail("atom mass must be positive");
    if (i && atoms[i - 1].at == atoms[i].at) fail("duplicate atom position");
  }
  Rational atom_mass = 0;
  for (const auto& a : atoms) atom_mass += a.mass;
  Rational total = mass + atom_mass;
  Rational slack = abs(total - 1);
  Rational tolerance(mpz_class(1), mpz_class("1000000000000"));
  if (slack > tolerance)
    fail("world mass must be 1 (within 1e-12), got " + rational_str(total));

  impl->density = std::move(density);
  impl->atoms = std::move(atoms);
  impl->continuous_mass = mass;
  impl->continuous_mass_d = rational_to_double(mass);

  // Continuous inverse-CDF table in doubles (sampling is the one place
  // doubles are allowed to appear).
  double acc = 0;
  for (const auto& d : impl->density) {
    DrawSegment seg;
    seg.x_lo = rational_to_double(d.lo);
    seg.x_hi = rational_to_double(d.hi);
    seg.mass_lo = acc;
    acc += rational_to_double(poly_integral(d.coeffs, d.lo, d.hi));
    seg.mass_hi = acc;
    for (const auto& c : d.coeffs) seg.coeffs.push_back(rational_to_double(c));
    impl->segments.push_back(std::move(seg));
  }
  double u_edge = impl->continuous_mass_d;
  for (const auto& a : impl->atoms) {
    u_edge += rational_to_double(a.mass);
    impl->atom_u_edges.push_back(u_edge);
    impl->atom_positions.push_back(rational_to_double(a.at));
  }
  return World(std::move(impl));
}

const SampleSpace& World::space() const { return impl_->space; }
const std::string& World::label() const { return impl_->label; }

const std::vector<Rational>& World::finite_probs() const {
  if (impl_->space.kind() != SpaceKind::FiniteAlphabet) fail("not a finite-alphabet world");
  return impl_->probs;
}

const std::vector<Atom>& World::atoms() const { return impl_->atoms; }

Rational World::prob(const Event& event) const {
  if (event.space() != impl_->space) fail("space mismatch between world and event");
  if (impl_->space.kind() == SpaceKind::FiniteAlphabet) {
    Rational total = 0;
    for (auto id : event.symbol_ids()) total += impl_->probs[id];
    return total;
  }
  Rational total = 0;
  for (const auto& piece : event.pieces()) {
    // Continuous mass: clip the piece against each density span. Endpoint
    // tags do not matter here (single points carry no continuous mass).
    for (const auto& d : impl_->density) {
      Rational lo = d.lo, hi = d.hi;
      if (piece.lo && *piece.lo > lo) lo = *piece.lo;
      if (piece.hi && *piece.hi < hi) hi = *piece.hi;
      if (lo < hi) total += poly_integral(d.coeffs, lo, hi);
    }
  }
  for (const auto& a : impl_->atoms) {
    for (const auto& piece : event.pieces()) {
      if (interval_member(piece, a.at)) {
        total += a.mass;
        break;
      }
    }
  }
  return total;
}

Point World::draw(const TrialRng& rng, std::uint64_t draw_index) const {
  double u = rng.uniform(draw_index);
  if (impl_->space.kind() == SpaceKind::FiniteAlphabet) {
    const auto& cum = impl_->cumulative;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    std::uint32_t idx = static_cast<std::uint32_t>(it - cum.begin());
    if (idx >= cum.size()) idx = static_cast<std::uint32_t>(cum.size() - 1);
    return Point(std::in_place_index<0>, idx);
  }
  // u below the continuous mass: invert the continuous CDF by bisection.
  // Otherwise map the remaining u-range onto the atoms in position order.
  if (u < impl_->continuous_mass_d && !impl_->segments.empty()) {
    const auto& segs = impl_->segments;
    std::size_t i = 0;
    while (i + 1 < segs.size() && u >= segs[i].mass_hi) ++i;
    const auto& seg = segs[i];
    double target = u - seg.mass_lo;
    double lo = seg.x_lo, hi = seg.x_hi;
    for (int it = 0; it < 64; ++it) {
      double mid = 0.5 * (lo + hi);
      // mass on [x_lo, mid] via the antiderivative
      double m = 0, plo = seg.x_lo, pmid = mid;
      for (std::size_t k = 0; k < seg.coeffs.size(); ++k) {
        m += seg.coeffs[k] * (pmid - plo) / static_cast<double>(k + 1);
        plo *= seg.x_lo;
        pmid *= mid;
      }
      if (m < target)
        lo = mid;
      else
        hi = mid;
    }
    return Point(std::in_place_index<1>, 0.5 * (lo + hi));
  }
  const auto& edges = impl_->atom_u_edges;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (u < edges[i]) return Point(std::in_place_index<1>, impl_->atom_positions[i]);
  }
  if (!impl_->atom_positions.empty())
    return Point(std::in_place_index<1>, impl_->atom_positions.back());
  // Pure continuous law with u at the very top of the range.
  return Point(std::in_place_index<1>, impl_->segments.back().x_hi);
}

bool World::operator==(const World& other) const { return impl_ == other.impl_; }

// ---------------------------------------------------------------------------
// Module operations
// ---------------------------------------------------------------------------

SampleVector sample(const World& world, std::int64_t n, std::uint64_t master_seed,
                    std::uint64_t trial_index) {
  if (n < 0) fail("sample length must be nonnegative");
  TrialRng rng = TrialRng::keyed(master_seed, trial_index);
  SampleVector sv{world.space(), {}};
  sv.points.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) sv.points.push_back(world.draw(rng, i));
  return sv;
}

std::int64_t empirical_count(const SampleVector& sample, const Event& event,
                             std::int64_t n) {
  if (sample.space != event.space()) fail("space mismatch between sample and event");
  if (n < 0 || static_cast<std::size_t>(n) > sample.points.size())
    fail("count length exceeds sample length");
  std::int64_t c = 0;
  for (std::int64_t i = 0; i < n; ++i)
    if (event.contains_point(sample.points[i])) ++c;
  return c;
}

bool is_feasible(const World& world, const Event& event) {
  if (event.space() != world.space()) fail("space mismatch between world and event");
  if (world.space().kind() == SpaceKind::FiniteAlphabet) return true;
  for (const auto& bp : event.boundary_points()) {
    for (const auto& a : world.atoms()) {
      if (a.at == bp) return false;
    }
  }
  return true;
}

WeakConvergenceReport weak_convergence_check(const std::vector<World>& sequence,
                                             const World& limit,
                                             const std::vector<Event>& events,
                                             const Rational& tol) {
  if (sequence.empty()) fail("empty world sequence");
  for (const auto& w : sequence) {
    if (w.space() != limit.space()) fail("space mismatch within world sequence");
  }
  WeakConvergenceReport report;
  report.converged = true;
  // Tail = last quarter of the entries.
  std::size_t start = sequence.size() * 3 / 4;
  for (const auto& ev : events) {
    if (!is_feasible(limit, ev))
      fail("not a continuity set for the limit world: " + ev.describe());
    Rational lim_p = limit.prob(ev);
    Rational worst = 0;
    for (std::size_t k = start; k < sequence.size(); ++k) {
      Rational dev = abs(sequence[k].prob(ev) - lim_p);
      if (dev > worst) worst = dev;
    }
    WeakConvergenceEventReport er;
    er.event = ev.describe();
    er.max_tail_deviation = rational_to_double(worst);
    er.within_tolerance = worst < tol;
    report.converged = report.converged && er.within_tolerance;
    report.events.push_back(std::move(er));
  }
  return report;
}

}  // namespace svlab
