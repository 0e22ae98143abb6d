#include "svlab/verifiers.hpp"

#include <algorithm>
#include <cfloat>
#include <climits>
#include <cmath>
#include <mutex>
#include <numbers>

#include "svlab/error.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// Threshold computation
// ---------------------------------------------------------------------------

namespace {

void check_level(const Rational& alpha) {
  if (!(alpha > 0 && alpha < 1)) fail("alpha must lie in (0,1)");
}

void check_bound(const Rational& b) {
  if (sgn(b) < 0 || b >= 1) fail("threshold bound must lie in [0,1)");
}

// log of a positive rational, robust against values far outside double range
// (levels like alpha/2^i underflow doubles once i passes ~1000).
double log_rational(const Rational& q) {
  if (sgn(q) <= 0) fail("log of a non-positive rational");
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num().get_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den().get_mpz_t());
  return std::log(mn) - std::log(md) +
         (static_cast<double>(en) - static_cast<double>(ed)) * std::numbers::ln2;
}

// t_n = sqrt(ln(pi^2 n^2 / (6 alpha)) / (2n)), nudged up 4 ulps so double
// rounding can only overshoot (which tightens, never loosens, the bound).
double t_upper(std::int64_t n, const Rational& alpha) {
  const double pi = std::numbers::pi;
  double nn = static_cast<double>(n);
  double arg = std::log(pi * pi * nn * nn / 6.0) - log_rational(alpha);
  double t = std::sqrt(arg / (2.0 * nn));
  return t * (1.0 + 4.0 * DBL_EPSILON);
}

// k(n) = ceil(n*b + n*t) with n*t taken at its exact double-product value.
// Double arithmetic decides the ceiling when the value is comfortably far
// from an integer; near-integer cases fall back to exact rationals.
std::int64_t count_threshold(std::int64_t n, const Rational& b, double t) {
  double nd = static_cast<double>(n);
  double nt = nd * t;
  double y = nd * rational_to_double(b) + nt;
  if (std::fabs(y - std::nearbyint(y)) > 1e-6)
    return static_cast<std::int64_t>(std::ceil(y));
  Rational exact = Rational(static_cast<long>(n)) * b + rational_exact(nt);
  return rational_ceil(exact);
}

Rational halved_level(const Rational& alpha, std::int64_t i) {
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(i));
  return alpha * Rational(mpz_class(1), den);
}

}  // namespace

ThresholdPoint hoeffding_threshold(std::int64_t n, const Rational& b,
                                   const Rational& alpha) {
  if (n < 1) fail("sample size must be positive");
  check_bound(b);
  check_level(alpha);
  double t = t_upper(n, alpha);
  return {t, count_threshold(n, b, t)};
}

double ThresholdSchedule::t(std::int64_t n) const {
  if (n < 1) fail("sample size must be positive");
  check_bound(b);
  check_level(alpha);
  return t_upper(n, alpha);
}

std::int64_t ThresholdSchedule::count(std::int64_t n) const {
  return count_threshold(n, b, t(n));
}

std::pair<std::int64_t, std::int64_t> diagonal_unpair(std::int64_t k) {
  if (k < 1) fail("pairing index is 1-based");
  std::int64_t z = k - 1;
  auto w = static_cast<std::int64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  while (w * (w + 1) / 2 > z) --w;
  std::int64_t j0 = z - w * (w + 1) / 2;
  std::int64_t i0 = w - j0;
  return {i0 + 1, j0 + 1};
}

// ---------------------------------------------------------------------------
// Family nodes
// ---------------------------------------------------------------------------

enum class FamKind { Subbasic, Conjunction, Disjunction, Limiting, Solver };

struct FamilyNode {
  FamKind kind;
  std::string tag;
  Rational alpha;
  SampleSpace space = SampleSpace::real_line();

  // Subbasic
  std::optional<Event> event;
  Rational b;

  // Conjunction
  std::vector<VerifierFamily> children;

  // Disjunction
  std::function<std::optional<Disjunct>(int)> disjunct_fn;

  // Limiting
  std::optional<Hypothesis> union_target;

  // Solver
  std::optional<Partition> part;

  // Materialization caches (pure functions of the index; the mutex only
  // guards the lazy fill, not any observable state).
  mutable std::mutex mu;
  mutable std::vector<std::optional<Disjunct>> disjunct_cache;
  mutable std::vector<std::optional<VerifierFamily>> built_cache;
  mutable std::optional<int> disjunct_end;
  mutable std::vector<std::optional<VerifierFamily>> psi_cache;
  mutable std::optional<int> piece_end;
  struct Slot {
    std::int32_t payload;
    VerifierFamily psi;
  };
  mutable std::vector<std::optional<Slot>> slot_cache;
  mutable std::vector<bool> slot_filled;

  std::optional<Disjunct> disjunct_at(int i) const;
  std::optional<VerifierFamily> disjunct_family(int i) const;
  std::optional<VerifierFamily> psi_at(int i) const;
  std::optional<Slot> slot_at(std::int64_t k) const;
};

namespace {

bool is_simple(FamKind k) {
  return k == FamKind::Subbasic || k == FamKind::Conjunction ||
         k == FamKind::Disjunction;
}

// Complement-verifier for a closed union piece: the piece must be
// ClosedComplement(open); verify the open part at the family's own level.
VerifierFamily complement_verifier(const Hypothesis& piece, const Rational& alpha,
                                   const char* what) {
  if (piece.kind() != HypKind::ClosedComplement)
    fail(std::string(what) + " must be closed complements of open hypotheses, got: " +
         piece.describe());
  return verifier_for(piece.inner(), alpha);
}

}  // namespace

std::optional<Disjunct> FamilyNode::disjunct_at(int i) const {
  std::lock_guard<std::mutex> lock(mu);
  if (disjunct_end && i >= *disjunct_end) return std::nullopt;
  while (static_cast<int>(disjunct_cache.size()) < i) {
    int next = static_cast<int>(disjunct_cache.size()) + 1;
    auto d = disjunct_fn(next);
    if (!d) {
      disjunct_end = next;
      return std::nullopt;
    }
    if (d->hypothesis.space() != space) fail("space mismatch among disjuncts");
    disjunct_cache.push_back(std::move(d));
  }
  return disjunct_cache[i - 1];
}

std::optional<VerifierFamily> FamilyNode::disjunct_family(int i) const {
  auto d = disjunct_at(i);
  if (!d) return std::nullopt;
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(built_cache.size()) < i) built_cache.resize(i);
  if (!built_cache[i - 1]) {
    Rational level = halved_level(alpha, i);
    VerifierFamily child = d->build(level);
    if (child.alpha() != level) fail("disjunct builder ignored the requested level");
    if (child.space() != space) fail("space mismatch among disjuncts");
    if (!is_simple(child.node()->kind))
      fail("disjuncts must be plain accept/continue verifiers");
    built_cache[i - 1] = std::move(child);
  }
  return built_cache[i - 1];
}

std::optional<VerifierFamily> FamilyNode::psi_at(int i) const {
  std::lock_guard<std::mutex> lock(mu);
  if (piece_end && i >= *piece_end) return std::nullopt;
  // Fill densely so a cache hit always means "piece exists".
  while (static_cast<int>(psi_cache.size()) < i) {
    int next = static_cast<int>(psi_cache.size()) + 1;
    auto piece = union_target->piece(next);
    if (!piece) {
      piece_end = next;
      return std::nullopt;
    }
    psi_cache.push_back(complement_verifier(*piece, alpha, "limiting pieces"));
  }
  return psi_cache[i - 1];
}

std::optional<FamilyNode::Slot> FamilyNode::slot_at(std::int64_t k) const {
  {
    std::lock_guard<std::mutex> lock(mu);
    if (static_cast<std::int64_t>(slot_filled.size()) >= k && slot_filled[k - 1])
      return slot_cache[k - 1];
  }
  auto [a, j] = diagonal_unpair(k);
  std::optional<Slot> made;
  const auto& answers = part->answers();
  if (a <= static_cast<std::int64_t>(answers.size())) {
    const Hypothesis& h = answers[a - 1].hypothesis;
    auto piece = h.piece(static_cast<int>(j));
    if (piece) {
      made = Slot{static_cast<std::int32_t>(a - 1),
                  complement_verifier(*piece, alpha, "solver pieces")};
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<std::int64_t>(slot_filled.size()) < k) {
    slot_filled.resize(k, false);
    slot_cache.resize(k);
  }
  if (!slot_filled[k - 1]) {
    slot_cache[k - 1] = std::move(made);
    slot_filled[k - 1] = true;
  }
  return slot_cache[k - 1];
}

// ---------------------------------------------------------------------------
// VerifierFamily surface
// ---------------------------------------------------------------------------

VerifierFamily::VerifierFamily(std::shared_ptr<const FamilyNode> node)
    : node_(std::move(node)) {}

const std::string& VerifierFamily::tag() const { return node_->tag; }
const Rational& VerifierFamily::alpha() const { return node_->alpha; }
const SampleSpace& VerifierFamily::space() const { return node_->space; }

Hypothesis VerifierFamily::target() const {
  const FamilyNode& n = *node_;
  switch (n.kind) {
    case FamKind::Subbasic:
      return Hypothesis::sub_basic(*n.event, n.b);
    case FamKind::Conjunction:
      return Hypothesis::conj(n.children[0].target(), n.children[1].target());
    case FamKind::Disjunction: {
      auto node = node_;
      return Hypothesis::f_sigma(
          [node](int i) -> std::optional<Hypothesis> {
            auto d = node->disjunct_at(i);
            if (!d) return std::nullopt;
            return d->hypothesis;
          },
          "union-of-disjuncts");
    }
    case FamKind::Limiting:
      return *n.union_target;
    case FamKind::Solver:
      fail("solver families have no single target; use partition()");
  }
  fail("unreachable family kind");
}

const Partition& VerifierFamily::partition() const {
  if (node_->kind != FamKind::Solver) fail("partition() on a non-solver family");
  return *node_->part;
}

std::string VerifierFamily::payload_label(std::int32_t payload) const {
  switch (node_->kind) {
    case FamKind::Limiting: {
      auto piece = node_->union_target->piece(payload);
      return "piece-" + std::to_string(payload) +
             (piece ? ":" + piece->describe() : "");
    }
    case FamKind::Solver: {
      const auto& answers = node_->part->answers();
      if (payload < 0 || payload >= static_cast<std::int32_t>(answers.size()))
        fail("payload out of range");
      return answers[payload].label;
    }
    default:
      return target().describe();
  }
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

VerifierFamily subbasic_verifier(const Event& A, const Rational& b,
                                 const Rational& alpha) {
  check_bound(b);
  check_level(alpha);
  auto node = std::make_shared<FamilyNode>();
  node->kind = FamKind::Subbasic;
  node->tag = "hoeffding";
  node->alpha = alpha;
  node->space = A.space();
  node->event = A;
  node->b = b;
  return VerifierFamily(std::move(node));
}

VerifierFamily conjoin(const VerifierFamily& a, const VerifierFamily& b) {
  if (a.space() != b.space()) fail("space mismatch in conjoin");
  if (a.alpha() != b.alpha()) fail("conjoin requires equal levels");
  if (!is_simple(a.node()->kind) || !is_simple(b.node()->kind))
    fail("conjoin needs plain accept/continue verifiers");
  auto node = std::make_shared<FamilyNode>();
  node->kind = FamKind::Conjunction;
  node->tag = "conjunction";
  node->alpha = a.alpha();
  node->space = a.space();
  node->children = {a, b};
  return VerifierFamily(std::move(node));
}

VerifierFamily disjoin(std::function<std::optional<Disjunct>(int)> disjuncts,
                       const Rational& alpha) {
  check_level(alpha);
  if (!disjuncts) fail("disjoin needs a disjunct enumerator");
  auto probe = disjuncts(1);
  if (!probe) fail("disjoin needs at least one disjunct");
  auto node = std::make_shared<FamilyNode>();
  node->kind = FamKind::Disjunction;
  node->tag = "disjunction";
  node->alpha = alpha;
  node->space = probe->hypothesis.space();
  node->disjunct_fn = std::move(disjuncts);
  return VerifierFamily(std::move(node));
}

VerifierFamily disjoin_open(std::function<std::optional<Hypothesis>(int)> parts,
                            const Rational& alpha) {
  if (!parts) fail("disjoin needs a disjunct enumerator");
  return disjoin(
      [parts](int i) -> std::optional<Disjunct> {
        auto h = parts(i);
        if (!h) return std::nullopt;
        Hypothesis hyp = *h;
        return Disjunct{hyp, [hyp](const Rational& level) {
                          return verifier_for(hyp, level);
                        }};
      },
      alpha);
}

VerifierFamily verifier_for(const Hypothesis& h, const Rational& alpha) {
  switch (h.kind()) {
    case HypKind::SubBasic:
      return subbasic_verifier(h.event(), h.threshold(), alpha);
    case HypKind::Band: {
      // Band identity: (lo,hi) membership = mu(A) > lo and mu(A^c) > 1-hi.
      return conjoin(subbasic_verifier(h.event(), h.low(), alpha),
                     subbasic_verifier(h.event().complement(), Rational(1) - h.high(),
                                       alpha));
    }
    case HypKind::And:
      return conjoin(verifier_for(h.parts()[0], alpha),
                     verifier_for(h.parts()[1], alpha));
    case HypKind::Or: {
      auto parts = h.parts();
      return disjoin_open(
          [parts](int i) -> std::optional<Hypothesis> {
            if (i < 1 || static_cast<std::size_t>(i) > parts.size()) return std::nullopt;
            return parts[i - 1];
          },
          alpha);
    }
    default:
      fail("verifier_for needs an open hypothesis, got: " + h.describe());
  }
}

VerifierFamily limiting_verifier(const Hypothesis& f_sigma, const Rational& alpha) {
  check_level(alpha);
  if (f_sigma.kind() != HypKind::FSigma)
    fail("limiting verifier needs an FSigma hypothesis");
  auto node = std::make_shared<FamilyNode>();
  node->kind = FamKind::Limiting;
  node->tag = "limiting";
  node->alpha = alpha;
  node->space = f_sigma.space();
  node->union_target = f_sigma;
  VerifierFamily fam(std::move(node));
  if (!fam.node()->psi_at(1)) fail("limiting verifier needs at least one piece");
  return fam;
}

VerifierFamily solver(const Partition& partition, const Rational& alpha) {
  check_level(alpha);
  for (const auto& ans : partition.answers()) {
    if (ans.hypothesis.kind() != HypKind::FSigma)
      fail("solver answers must be FSigma hypotheses, got: " + ans.hypothesis.describe());
  }
  auto node = std::make_shared<FamilyNode>();
  node->kind = FamKind::Solver;
  node->tag = "solver";
  node->alpha = alpha;
  node->space = partition.answers()[0].hypothesis.space();
  node->part = partition;
  return VerifierFamily(std::move(node));
}

// ---------------------------------------------------------------------------
// Direct evaluation
// ---------------------------------------------------------------------------

namespace {

bool accepts_direct(const FamilyNode& node, const SampleVector& sample, std::int64_t n);

bool accepts_direct(const VerifierFamily& fam, const SampleVector& sample, std::int64_t n) {
  return accepts_direct(*fam.node(), sample, n);
}

bool accepts_direct(const FamilyNode& node, const SampleVector& sample, std::int64_t n) {
  switch (node.kind) {
    case FamKind::Subbasic: {
      std::int64_t k = count_threshold(n, node.b, t_upper(n, node.alpha));
      return empirical_count(sample, *node.event, n) >= k;
    }
    case FamKind::Conjunction:
      return accepts_direct(node.children[0], sample, n) &&
             accepts_direct(node.children[1], sample, n);
    case FamKind::Disjunction: {
      for (std::int64_t i = 1; i <= n; ++i) {
        auto child = node.disjunct_family(static_cast<int>(i));
        if (!child) break;
        if (accepts_direct(*child, sample, n)) return true;
      }
      return false;
    }
    default:
      fail("not an accept/continue family");
  }
}

}  // namespace

Verdict VerifierFamily::test_at(const SampleVector& sample) const {
  if (sample.space != space()) fail("space mismatch between sample and verifier");
  auto n = static_cast<std::int64_t>(sample.points.size());
  if (n < 1) return Verdict::carry_on();
  const FamilyNode& nd = *node_;
  switch (nd.kind) {
    case FamKind::Subbasic:
    case FamKind::Conjunction:
    case FamKind::Disjunction:
      return accepts_direct(nd, sample, n) ? Verdict::accept(0) : Verdict::carry_on();
    case FamKind::Limiting: {
      for (std::int64_t j = 1; j <= n; ++j) {
        auto psi = nd.psi_at(static_cast<int>(j));
        if (!psi) break;
        if (!accepts_direct(*psi, sample, n))
          return Verdict::accept(static_cast<std::int32_t>(j));
      }
      return Verdict::carry_on();
    }
    case FamKind::Solver: {
      for (std::int64_t k = 1; k <= n; ++k) {
        auto slot = nd.slot_at(k);
        if (slot && !accepts_direct(slot->psi, sample, n))
          return Verdict::accept(slot->payload);
      }
      return Verdict::carry_on();
    }
  }
  fail("unreachable family kind");
}

std::vector<Event> VerifierFamily::events_used(std::int64_t n_max) const {
  std::vector<Event> out;
  auto add = [&out](const Event& e) {
    for (const auto& seen : out)
      if (seen == e) return;
    out.push_back(e);
  };
  std::function<void(const FamilyNode&)> walk = [&](const FamilyNode& node) {
    switch (node.kind) {
      case FamKind::Subbasic:
        add(*node.event);
        break;
      case FamKind::Conjunction:
        for (const auto& c : node.children) walk(*c.node());
        break;
      case FamKind::Disjunction:
        for (std::int64_t i = 1; i <= n_max; ++i) {
          auto child = node.disjunct_family(static_cast<int>(i));
          if (!child) break;
          walk(*child->node());
        }
        break;
      case FamKind::Limiting:
        for (std::int64_t j = 1; j <= n_max; ++j) {
          auto psi = node.psi_at(static_cast<int>(j));
          if (!psi) break;
          walk(*psi->node());
        }
        break;
      case FamKind::Solver:
        for (std::int64_t k = 1; k <= n_max; ++k) {
          auto slot = node.slot_at(k);
          if (slot) walk(*slot->psi.node());
        }
        break;
    }
  };
  walk(*node_);
  return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluation
// ---------------------------------------------------------------------------

namespace {

struct Registry {
  std::vector<Event> events;
  int intern(const Event& e) {
    for (std::size_t i = 0; i < events.size(); ++i)
      if (events[i] == e) return static_cast<int>(i);
    events.push_back(e);
    return static_cast<int>(events.size() - 1);
  }
};

struct BoolPlan {
  virtual ~BoolPlan() = default;
  virtual bool accepts(const std::int64_t* counts, std::int64_t n) const = 0;
};

// Count-vs-threshold leaf; thresholds stored for n in [start_n, n_max],
// clamped to n+1 where the threshold is unreachable.
struct LeafPlan final : BoolPlan {
  int ev = 0;
  std::int64_t start_n = 1;
  std::vector<std::int32_t> k;
  bool accepts(const std::int64_t* counts, std::int64_t n) const override {
    return counts[ev] >= k[n - start_n];
  }
};

struct AndPlan final : BoolPlan {
  std::unique_ptr<BoolPlan> a, b;
  bool accepts(const std::int64_t* counts, std::int64_t n) const override {
    return a->accepts(counts, n) && b->accepts(counts, n);
  }
};

// General disjunction: kid i (0-based) joins the scan once n >= i+1.
struct OrPlan final : BoolPlan {
  std::vector<std::unique_ptr<BoolPlan>> kids;
  bool accepts(const std::int64_t* counts, std::int64_t n) const override {
    auto m = std::min<std::int64_t>(static_cast<std::int64_t>(kids.size()), n);
    for (std::int64_t i = 0; i < m; ++i)
      if (kids[i]->accepts(counts, n)) return true;
    return false;
  }
};

// Disjunction whose disjuncts are all plain thresholds on one event: the
// scan over i <= n collapses to one compare against min_i k_i(n).
struct MinOrPlan final : BoolPlan {
  int ev = 0;
  std::int64_t start_n = 1;
  std::vector<std::int32_t> min_k;
  bool accepts(const std::int64_t* counts, std::int64_t n) const override {
    return counts[ev] >= min_k[n - start_n];
  }
};

std::int32_t clamp_threshold(std::int64_t k, std::int64_t n) {
  std::int64_t v = std::min<std::int64_t>(k, n + 1);
  if (v < 0) v = 0;
  return static_cast<std::int32_t>(v);
}

std::unique_ptr<BoolPlan> compile_bool(const FamilyNode& node, std::int64_t n_max,
                                       std::int64_t start_n, Registry& reg);

std::unique_ptr<BoolPlan> compile_bool(const VerifierFamily& fam, std::int64_t n_max,
                                       std::int64_t start_n, Registry& reg) {
  return compile_bool(*fam.node(), n_max, start_n, reg);
}

std::unique_ptr<BoolPlan> compile_bool(const FamilyNode& node, std::int64_t n_max,
                                       std::int64_t start_n, Registry& reg) {
  switch (node.kind) {
    case FamKind::Subbasic: {
      auto leaf = std::make_unique<LeafPlan>();
      leaf->ev = reg.intern(*node.event);
      leaf->start_n = start_n;
      leaf->k.reserve(static_cast<std::size_t>(n_max - start_n + 1));
      for (std::int64_t n = start_n; n <= n_max; ++n) {
        std::int64_t kk = count_threshold(n, node.b, t_upper(n, node.alpha));
        leaf->k.push_back(clamp_threshold(kk, n));
      }
      return leaf;
    }
    case FamKind::Conjunction: {
      auto plan = std::make_unique<AndPlan>();
      plan->a = compile_bool(node.children[0], n_max, start_n, reg);
      plan->b = compile_bool(node.children[1], n_max, start_n, reg);
      return plan;
    }
    case FamKind::Disjunction: {
      // Materialize the disjuncts in range and check for the single-event
      // threshold special case.
      std::vector<VerifierFamily> kids;
      for (std::int64_t i = 1; i <= n_max; ++i) {
        auto child = node.disjunct_family(static_cast<int>(i));
        if (!child) break;
        kids.push_back(std::move(*child));
      }
      bool all_leaf_same_event = !kids.empty();
      for (const auto& kid : kids) {
        if (kid.node()->kind != FamKind::Subbasic ||
            !(*kid.node()->event == *kids[0].node()->event)) {
          all_leaf_same_event = false;
          break;
        }
      }
      if (all_leaf_same_event) {
        auto plan = std::make_unique<MinOrPlan>();
        plan->ev = reg.intern(*kids[0].node()->event);
        plan->start_n = start_n;
        plan->min_k.reserve(static_cast<std::size_t>(n_max - start_n + 1));
        for (std::int64_t n = start_n; n <= n_max; ++n) {
          std::int64_t best = n + 1;
          auto m = std::min<std::int64_t>(static_cast<std::int64_t>(kids.size()), n);
          for (std::int64_t i = 0; i < m; ++i) {
            const FamilyNode& kn = *kids[i].node();
            best = std::min(best, count_threshold(n, kn.b, t_upper(n, kn.alpha)));
          }
          plan->min_k.push_back(clamp_threshold(best, n));
        }
        return plan;
      }
      auto plan = std::make_unique<OrPlan>();
      for (std::size_t i = 0; i < kids.size(); ++i) {
        std::int64_t active = std::max<std::int64_t>(start_n,
                                                     static_cast<std::int64_t>(i + 1));
        plan->kids.push_back(compile_bool(kids[i], n_max, active, reg));
      }
      return plan;
    }
    default:
      fail("not an accept/continue family");
  }
}

}  // namespace

struct CompiledFamily::Impl {
  SampleSpace space = SampleSpace::real_line();
  std::int64_t n_max = 0;
  FamKind top = FamKind::Subbasic;
  std::vector<Event> events;
  std::vector<std::vector<std::uint8_t>> sym_member;  // [symbol][event]
  std::unique_ptr<BoolPlan> root;                         // simple families
  std::vector<std::unique_ptr<BoolPlan>> pieces;          // limiting
  std::vector<std::pair<std::int32_t, std::unique_ptr<BoolPlan>>> slots;  // solver
};

CompiledFamily CompiledFamily::compile(const VerifierFamily& family, std::int64_t n_max) {
  if (n_max < 1) fail("horizon must be positive");
  if (n_max > INT32_MAX - 2) fail("horizon too large to compile");
  auto impl = std::make_shared<Impl>();
  impl->space = family.space();
  impl->n_max = n_max;
  const FamilyNode& node = *family.node();
  impl->top = node.kind;
  Registry reg;
  switch (node.kind) {
    case FamKind::Subbasic:
    case FamKind::Conjunction:
    case FamKind::Disjunction:
      impl->root = compile_bool(node, n_max, 1, reg);
      break;
    case FamKind::Limiting:
      for (std::int64_t j = 1; j <= n_max; ++j) {
        auto psi = node.psi_at(static_cast<int>(j));
        if (!psi) break;
        impl->pieces.push_back(compile_bool(*psi, n_max, j, reg));
      }
      break;
    case FamKind::Solver:
      for (std::int64_t k = 1; k <= n_max; ++k) {
        auto slot = node.slot_at(k);
        if (slot) {
          impl->slots.emplace_back(slot->payload, compile_bool(slot->psi, n_max, k, reg));
        } else {
          impl->slots.emplace_back(-1, nullptr);
        }
      }
      break;
  }
  impl->events = reg.events;
  if (impl->space.kind() == SpaceKind::FiniteAlphabet) {
    std::size_t syms = impl->space.symbols().size();
    impl->sym_member.resize(syms);
    for (std::uint32_t s = 0; s < syms; ++s) {
      impl->sym_member[s].resize(impl->events.size());
      Point p(std::in_place_index<0>, s);
      for (std::size_t e = 0; e < impl->events.size(); ++e)
        impl->sym_member[s][e] = impl->events[e].contains_point(p) ? 1 : 0;
    }
  }
  return CompiledFamily(std::move(impl));
}

const std::vector<Event>& CompiledFamily::events() const { return impl_->events; }
std::int64_t CompiledFamily::n_max() const { return impl_->n_max; }

namespace {

struct EvaluatorImpl final : PrefixEvaluator {
  std::shared_ptr<const CompiledFamily::Impl> plan;
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;

  explicit EvaluatorImpl(std::shared_ptr<const CompiledFamily::Impl> p)
      : plan(std::move(p)), counts(plan->events.size(), 0) {}

  void reset() override {
    std::fill(counts.begin(), counts.end(), 0);
    n = 0;
  }

  Verdict step(const Point& p) override {
    if (n >= plan->n_max) fail("evaluator stepped past its horizon");
    ++n;
    if (plan->space.kind() == SpaceKind::FiniteAlphabet) {
      const auto& row = plan->sym_member[std::get<std::uint32_t>(p)];
      for (std::size_t e = 0; e < counts.size(); ++e) counts[e] += row[e];
    } else {
      for (std::size_t e = 0; e < counts.size(); ++e)
        counts[e] += plan->events[e].contains_point(p) ? 1 : 0;
    }
    const std::int64_t* c = counts.data();
    switch (plan->top) {
      case FamKind::Subbasic:
      case FamKind::Conjunction:
      case FamKind::Disjunction:
        return plan->root->accepts(c, n) ? Verdict::accept(0) : Verdict::carry_on();
      case FamKind::Limiting: {
        auto m = std::min<std::int64_t>(static_cast<std::int64_t>(plan->pieces.size()), n);
        for (std::int64_t j = 1; j <= m; ++j) {
          if (!plan->pieces[j - 1]->accepts(c, n))
            return Verdict::accept(static_cast<std::int32_t>(j));
        }
        return Verdict::carry_on();
      }
      case FamKind::Solver: {
        auto m = std::min<std::int64_t>(static_cast<std::int64_t>(plan->slots.size()), n);
        for (std::int64_t k = 1; k <= m; ++k) {
          const auto& slot = plan->slots[k - 1];
          if (slot.second && !slot.second->accepts(c, n))
            return Verdict::accept(slot.first);
        }
        return Verdict::carry_on();
      }
    }
    fail("unreachable family kind");
  }
};

}  // namespace

std::unique_ptr<PrefixEvaluator> CompiledFamily::evaluator() const {
  return std::make_unique<EvaluatorImpl>(impl_);
}

std::vector<Verdict> run(const VerifierFamily& family, const World& world,
                         std::int64_t n_max, std::uint64_t seed) {
  if (family.space() != world.space()) fail("space mismatch between verifier and world");
  CompiledFamily compiled = CompiledFamily::compile(family, n_max);
  auto eval = compiled.evaluator();
  TrialRng rng = TrialRng::keyed(seed, 0);
  std::vector<Verdict> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t i = 0; i < n_max; ++i)
    out.push_back(eval->step(world.draw(rng, static_cast<std::uint64_t>(i))));
  return out;
}

}  // namespace svlab
