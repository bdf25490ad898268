#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lt3/solver.hpp"

using namespace lt3;

namespace {

Rat val_of(const Hahn& h) { return h.known_zero() ? h.prec() : h.val_exact(); }

}  // namespace

TEST_CASE("polygon of X^2 + X + w over F_2") {
  FieldTower tw(2, 8);
  SeriesPoly f;
  f.tw = &tw;
  f.set(0, Hahn::pi_pow(&tw, Rat(1)));
  f.set(1, Hahn::constant(&tw, tw.one()));
  f.set(2, Hahn::constant(&tw, tw.one()));
  auto segs = newton_polygon(f);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].slope == Rat(1));
  CHECK(segs[0].length == 1);
  CHECK(segs[1].slope == Rat(0));
  CHECK(segs[1].length == 1);

  // small root: w + w^2 + w^4 + ... (fixed point of x = w + x^2)
  auto small = roots_with_valuation(f, Rat(1), Rat(8));
  REQUIRE(small.size() == 1);
  CHECK(small[0].mult == 1);
  const Hahn& x = small[0].x;
  CHECK(x.coeff_at(Rat(1)) == tw.one());
  CHECK(x.coeff_at(Rat(2)) == tw.one());
  CHECK(x.coeff_at(Rat(3)).is_zero());
  CHECK(x.coeff_at(Rat(4)) == tw.one());
  CHECK(x.coeff_at(Rat(8)) == tw.one());

  // unit root: 1 + (small root); the two roots sum to 1
  auto unit = roots_with_valuation(f, Rat(0), Rat(9));
  REQUIRE(unit.size() == 1);
  Hahn sum = unit[0].x + x;
  Hahn diff = sum - Hahn::constant(&tw, tw.one());
  CHECK(val_of(diff) >= Rat(8));
  // and multiply to w
  Hahn prod = unit[0].x * x;
  CHECK(val_of(prod - Hahn::pi_pow(&tw, Rat(1))) >= Rat(8));
}

TEST_CASE("exact double root in characteristic 2") {
  FieldTower tw(2, 8);
  SeriesPoly f;  // X^2 + w = (X + w^{1/2})^2
  f.tw = &tw;
  f.set(0, Hahn::pi_pow(&tw, Rat(1)));
  f.set(2, Hahn::constant(&tw, tw.one()));
  auto roots = roots_with_valuation(f, Rat(1, 2), Rat(5));
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].mult == 2);
  Hahn diff = roots[0].x - Hahn::pi_pow(&tw, Rat(1, 2));
  CHECK(diff.known_zero());
}

TEST_CASE("wild quartet reported as clusters at requested precision") {
  // X^4 + wX + w over F_2: four roots of valuation 1/4 whose expansions
  // refine in steps 1/4, 1/16, 1/64, ... with support accumulating at 1/3
  // (pairwise differences sit exactly at 1/3, past the accumulation point).
  // Below the accumulation point the solver reports one 4-fold cluster;
  // past it no finite expansion exists and the returned precision markers
  // must expose the shortfall.
  FieldTower tw(2, 8);
  SeriesPoly f;
  f.tw = &tw;
  f.set(0, Hahn::pi_pow(&tw, Rat(1)));
  f.set(1, Hahn::pi_pow(&tw, Rat(1)));
  f.set(4, Hahn::constant(&tw, tw.one()));
  auto roots = roots_with_valuation(f, Rat(1, 4), Rat(1, 24));
  int total = 0;
  for (auto& r : roots) total += r.mult;
  CHECK(total == 4);
  for (auto& r : roots) {
    CHECK(r.x.val_exact() == Rat(1, 4));
    Hahn fx = f.eval(r.x);
    CHECK(val_of(fx) >= Rat(25, 24));  // true value w^{5/4}, seen to O(w^{25/24})
  }
  auto deep = roots_with_valuation(f, Rat(1, 4), Rat(1, 2));
  int deep_total = 0;
  for (auto& r : deep) {
    deep_total += r.mult;
    CHECK(r.x.prec() < Rat(1, 4) + Rat(1, 2));  // shortfall is reported
    CHECK(r.x.prec() <= Rat(1, 3));             // nothing past the accumulation
  }
  CHECK(deep_total == 4);
}

TEST_CASE("two-slope polygon of a torsion-style polynomial") {
  // w + u X + X^3 with v(u) = 1/3: slopes 2/3 (length 1) and 1/6 (length 2)
  FieldTower tw(2, 8);
  SeriesPoly f;
  f.tw = &tw;
  f.set(0, Hahn::pi_pow(&tw, Rat(1)));
  f.set(1, Hahn::pi_pow(&tw, Rat(1, 3)));
  f.set(3, Hahn::constant(&tw, tw.one()));
  auto segs = newton_polygon(f);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].slope == Rat(2, 3));
  CHECK(segs[0].length == 1);
  CHECK(segs[1].slope == Rat(1, 6));
  CHECK(segs[1].length == 2);
}

TEST_CASE("imprecise coefficient below the hull voids certification") {
  FieldTower tw(2, 8);
  SeriesPoly f;
  f.tw = &tw;
  f.set(0, Hahn::pi_pow(&tw, Rat(1)));
  f.set(2, Hahn::constant(&tw, tw.one()));
  Hahn fuzzy = Hahn::zero(&tw);
  fuzzy.lower_prec(Rat(1, 4));  // could carry a term below the hull
  f.set(1, fuzzy);
  auto segs = newton_polygon(f);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].slope == Rat(1, 2));
  CHECK(!segs[0].certified);
  CHECK_THROWS_AS(roots_with_valuation(f, Rat(1, 2), Rat(1)), PrecisionError);
  // known to order beyond the hull: fine
  Hahn ok = Hahn::zero(&tw);
  ok.lower_prec(Rat(2));
  f.set(1, ok);
  auto segs2 = newton_polygon(f);
  REQUIRE(segs2.size() == 1);
  CHECK(segs2[0].certified);
}

TEST_CASE("hensel refinement") {
  FieldTower tw(2, 8);
  SeriesPoly f;
  f.tw = &tw;
  f.set(0, Hahn::pi_pow(&tw, Rat(1)));
  f.set(1, Hahn::constant(&tw, tw.one()));
  f.set(2, Hahn::constant(&tw, tw.one()));
  Hahn x = hensel_refine(f, Hahn::pi_pow(&tw, Rat(1)), Rat(6));
  CHECK(x.coeff_at(Rat(1)) == tw.one());
  CHECK(x.coeff_at(Rat(2)) == tw.one());
  CHECK(x.coeff_at(Rat(4)) == tw.one());
  CHECK(x.coeff_at(Rat(3)).is_zero());
  // precondition violated: x0 = 1 + w has v(f(x0)) = 1, not > 0
  Hahn bad = Hahn::constant(&tw, tw.one()) + Hahn::pi_pow(&tw, Rat(1));
  // here f(bad) = w + w^2, f'(bad) = 1, so this actually refines fine;
  // use x0 = w^{1/4} instead: f(x0) has valuation 1/4 <= 0 = 2 v(f')
  // is false... v(f(x0)) = 1/4 > 0 holds, so take a unit x0 off both roots
  (void)bad;
  Hahn off = Hahn::monomial(&tw, tw.gen(2), Rat(0));  // generator of F_4
  CHECK_THROWS_AS(hensel_refine(f, off, Rat(6)), std::domain_error);
}

TEST_CASE("root transport picks the unique nearby root") {
  FieldTower tw(2, 8);
  SeriesPoly f;
  f.tw = &tw;
  f.set(0, Hahn::pi_pow(&tw, Rat(1)));
  f.set(1, Hahn::constant(&tw, tw.one()));
  f.set(2, Hahn::constant(&tw, tw.one()));
  Hahn pred = Hahn::pi_pow(&tw, Rat(1)) + Hahn::pi_pow(&tw, Rat(2));
  Hahn r = root_transport(f, pred, Rat(3, 2), Rat(8));
  CHECK(r.coeff_at(Rat(4)) == tw.one());

  // demanding agreement beyond what the prediction satisfies: no candidate
  Hahn coarse = Hahn::pi_pow(&tw, Rat(1));
  CHECK_THROWS_AS(root_transport(f, coarse, Rat(3), Rat(8)),
                  std::runtime_error);

  // prediction itself coarser than the separation: refuse
  Hahn fuzzy = pred;
  fuzzy.lower_prec(Rat(1));
  CHECK_THROWS_AS(root_transport(f, fuzzy, Rat(3, 2), Rat(8)),
                  PrecisionError);
}
