#include <doctest.h>

#include <optional>
#include <vector>

#include "svlab/config.hpp"
#include "svlab/error.hpp"
#include "svlab/hypotheses.hpp"

using namespace svlab;

namespace {

Event heads() {
  World c = World::coin(Rational(1, 2));
  return Event::of_symbols(c.space(), {"H"});
}

}  // namespace

TEST_SUITE("hypotheses") {

TEST_CASE("constructors validate their inputs") {
  Event H = heads();
  CHECK_THROWS_WITH_AS(Hypothesis::sub_basic(H, Rational(1)),
                       doctest::Contains("must lie in [0,1)"), Error);
  CHECK_THROWS_WITH_AS(Hypothesis::sub_basic(H, Rational(-1, 2)),
                       doctest::Contains("must lie in [0,1)"), Error);
  CHECK_THROWS_WITH_AS(Hypothesis::band(H, Rational(3, 4), Rational(1, 4)),
                       doctest::Contains("0 <= lo < hi <= 1"), Error);
  CHECK_THROWS_WITH_AS(Hypothesis::disj({}), doctest::Contains("at least one part"), Error);
  CHECK_THROWS_WITH_AS(Hypothesis::f_sigma(std::vector<Hypothesis>{}),
                       doctest::Contains("at least one piece"), Error);

  Hypothesis open = Hypothesis::sub_basic(H, Rational(1, 2));
  Hypothesis closed = Hypothesis::closed_complement(open);
  CHECK_THROWS_WITH_AS(Hypothesis::closed_complement(closed),
                       doctest::Contains("needs an open hypothesis"), Error);

  Event real = Event::whole(SampleSpace::real_line());
  CHECK_THROWS_WITH_AS(
      Hypothesis::conj(open, Hypothesis::sub_basic(real, Rational(1, 2))),
      doctest::Contains("space mismatch"), Error);
}

TEST_CASE("open fragment membership is decided exactly") {
  Event H = heads();
  Hypothesis over_half = Hypothesis::sub_basic(H, Rational(1, 2));
  // Strict inequality: the boundary world is out.
  CHECK(contains(over_half, World::coin(Rational(1, 2))) == Membership::Out);
  CHECK(contains(over_half, World::coin(Rational(1, 2) + Rational(1, 1000000))) ==
        Membership::In);
  CHECK(contains(over_half, World::coin(Rational(499999, 1000000))) == Membership::Out);

  Hypothesis mid = Hypothesis::band(H, Rational(1, 4), Rational(3, 4));
  CHECK(contains(mid, World::coin(Rational(1, 4))) == Membership::Out);
  CHECK(contains(mid, World::coin(Rational(3, 4))) == Membership::Out);
  CHECK(contains(mid, World::coin(Rational(1, 2))) == Membership::In);

  Hypothesis both = Hypothesis::conj(over_half, mid);
  CHECK(contains(both, World::coin(Rational(3, 5))) == Membership::In);
  CHECK(contains(both, World::coin(Rational(4, 5))) == Membership::Out);

  Hypothesis either = Hypothesis::disj({over_half, Hypothesis::band(H, 0, Rational(1, 4))});
  CHECK(contains(either, World::coin(Rational(1, 10))) == Membership::In);
  CHECK(contains(either, World::coin(Rational(9, 10))) == Membership::In);
  CHECK(contains(either, World::coin(Rational(1, 3))) == Membership::Out);

  // Closed complement flips In and Out.
  Hypothesis at_most_half = Hypothesis::closed_complement(over_half);
  CHECK(contains(at_most_half, World::coin(Rational(1, 2))) == Membership::In);
  CHECK(contains(at_most_half, World::coin(Rational(2, 3))) == Membership::Out);
}

TEST_CASE("is_open tracks the construction") {
  Event H = heads();
  Hypothesis s = Hypothesis::sub_basic(H, Rational(1, 3));
  Hypothesis b = Hypothesis::band(H, Rational(1, 4), Rational(3, 4));
  CHECK(s.is_open());
  CHECK(b.is_open());
  CHECK(Hypothesis::conj(s, b).is_open());
  CHECK(Hypothesis::disj({s, b}).is_open());
  Hypothesis c = Hypothesis::closed_complement(s);
  CHECK_FALSE(c.is_open());
  CHECK_FALSE(Hypothesis::f_sigma({c}).is_open());
}

TEST_CASE("band equals the intersection of two sub-basic sets") {
  Event H = heads();
  Rational lo(1, 4), hi(3, 4);
  Hypothesis direct = Hypothesis::band(H, lo, hi);
  Hypothesis split = band_as_intersection(H, lo, hi);
  REQUIRE(split.kind() == HypKind::And);
  CHECK(split.parts()[0].kind() == HypKind::SubBasic);
  CHECK(split.parts()[1].kind() == HypKind::SubBasic);
  CHECK(split.parts()[1].threshold() == Rational(1, 4));
  for (int num = 0; num <= 20; ++num) {
    World w = World::coin(Rational(num, 20));
    CHECK(contains(direct, w) == contains(split, w));
  }
}

TEST_CASE("countable unions answer In definitively and Unknown honestly") {
  Event H = heads();
  // Union over i of the closed sets {mu(H) <= 1/2 - 1/(i+2)}: equals the
  // open set {mu(H) < 1/2} but no finite depth can certify an Out.
  Hypothesis creeping = Hypothesis::f_sigma(
      [H](int i) -> std::optional<Hypothesis> {
        return Hypothesis::closed_complement(
            Hypothesis::sub_basic(H, Rational(1, 2) - Rational(1, i + 2)));
      },
      "creeping-union");
  CHECK(creeping.piece_count() == std::nullopt);

  // mu(H) = 0.3 enters at 1/2 - 1/(i+2) >= 3/10, i.e. i >= 3.
  World w3 = World::coin(Rational(3, 10));
  CHECK(contains(creeping, w3, 2) == Membership::Unknown);
  CHECK(contains(creeping, w3, 3) == Membership::In);
  // In never downgrades as depth grows.
  for (int depth = 3; depth < 40; ++depth) CHECK(contains(creeping, w3, depth) == Membership::In);
  // The boundary world is outside every piece, but the union cannot prove it.
  CHECK(contains(creeping, World::coin(Rational(1, 2)), 200) == Membership::Unknown);

  // A finite list exhausts, so Out is reachable.
  Hypothesis finite_union = Hypothesis::f_sigma(
      {Hypothesis::closed_complement(Hypothesis::sub_basic(H, Rational(1, 3)))});
  CHECK(finite_union.piece_count() == 1);
  CHECK(contains(finite_union, World::coin(Rational(2, 3)), 8) == Membership::Out);
  CHECK(contains(finite_union, World::coin(Rational(1, 4)), 8) == Membership::In);
}

TEST_CASE("three-cell bias partition classifies interior worlds") {
  Partition cells = builtin_partition("bias-3cell");
  REQUIRE(cells.answers().size() == 3);
  CHECK(cells.answers()[0].label == "low");
  CHECK(cells.answers()[1].label == "middle");
  CHECK(cells.answers()[2].label == "high");

  CHECK(cells.classify(World::coin(Rational(1, 5))) == 0);
  CHECK(cells.classify(World::coin(Rational(1, 2))) == 1);
  CHECK(cells.classify(World::coin(Rational(4, 5))) == 2);
  // Cell boundaries belong to the closed sides.
  CHECK(cells.classify(World::coin(Rational(1, 3))) == 0);
  CHECK(cells.classify(World::coin(Rational(2, 3))) == 2);
  CHECK(cells.classify(World::coin(Rational(0))) == 0);
  CHECK(cells.classify(World::coin(Rational(1))) == 2);

  // Near the boundary the middle cell needs deep pieces: bias 1/3 + 1/100
  // only enters at piece 94, so the default depth cannot confirm it.
  World near_edge = World::coin(Rational(1, 3) + Rational(1, 100));
  CHECK(cells.classify(near_edge) == std::nullopt);
  CHECK(cells.classify(near_edge, 100) == 1);

  auto labels = cells.validate(
      {World::coin(Rational(1, 10)), World::coin(Rational(1, 2)), World::coin(Rational(9, 10))});
  REQUIRE(labels.size() == 3);
  CHECK(labels[0] == 0);
  CHECK(labels[1] == 1);
  CHECK(labels[2] == 2);
}

TEST_CASE("overlapping answers are reported, not resolved") {
  Event H = heads();
  Hypothesis low = Hypothesis::f_sigma(
      {Hypothesis::closed_complement(Hypothesis::sub_basic(H, Rational(1, 2)))}, "low");
  Hypothesis wide = Hypothesis::f_sigma(
      {Hypothesis::closed_complement(Hypothesis::sub_basic(H, Rational(3, 4)))}, "wide");
  Partition overlapping({Answer{"low", low}, Answer{"wide", wide}});
  CHECK_THROWS_WITH_AS(overlapping.classify(World::coin(Rational(1, 4))),
                       doctest::Contains("overlapping partition answers"), Error);
  // A world claimed by only one side still classifies.
  CHECK(overlapping.classify(World::coin(Rational(3, 5))) == 1);
}

}  // TEST_SUITE
