#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lt3/reduction.hpp"

using namespace lt3;

namespace {

bool feq(const FieldTower& tw, FieldElem a, FieldElem b) {
  tw.unify(a, b);
  return a == b;
}

}  // namespace

TEST_CASE("chart frames reproduce the torsion-regime valuations") {
  for (int q : {2, 3}) {
    CAPTURE(q);
    long long Q = q;
    ChartFrame y12 = chart_frame(q, Chart::Y12);
    CHECK(y12.vu == Rat(1, Q + 1));
    CHECK(y12.s1 == Rat(Q, Q * Q - 1));
    CHECK(y12.s3 == Rat(1, Q * Q * Q * (Q * Q - 1)));
    ChartFrame y21 = chart_frame(q, Chart::Y21);
    CHECK(y21.vu == Rat(1, Q * (Q + 1)));
    CHECK(y21.s2 == Rat(1, Q * Q - 1));
    ChartFrame z11 = chart_frame(q, Chart::Z11);
    CHECK(z11.vu == Rat(1, 2 * Q));
    CHECK(z11.s1 == Rat(2 * Q - 1, 2 * Q * (Q - 1)));
  }
}

TEST_CASE("wild constant c0: defining equation, residue, root") {
  for (int q : {2, 3}) {
    CAPTURE(q);
    FieldTower tw(q, 12);
    ChartConstants cc = chart_constants(&tw, q);
    CHECK(cc.c0_prec > Rat(1, q) - Rat(1, 100 * q));
    CHECK(feq(tw, residue(cc.c0), tw.from_int(-1)));
    // c0^q - pi^{(q-1)/q} c0 + 1 = 0 to the honest precision
    Hahn g1sq = Hahn::pi_pow(&tw, Rat(q - 1, q));
    Hahn lhs = cc.c0.frob_pow(1) - g1sq * cc.c0 +
               Hahn::constant(&tw, tw.one());
    CHECK(congruent(lhs, Hahn::zero(&tw), cc.c0_prec, false));
    // c0_root is the unique q-th root
    CHECK(congruent(cc.c0_root.frob_pow(1), cc.c0, cc.c0_prec, false));
  }
}

TEST_CASE("middle charts: chains, residues, curve membership") {
  for (int q : {2, 3}) {
    FieldTower tw(q, 12);
    for (Chart chart : {Chart::Y12, Chart::Y21, Chart::Z11}) {
      CAPTURE(q);
      CAPTURE(chart_name(chart));
      ChartReport r = verify_chart(&tw, q, chart, 3, 20260826u);
      CHECK(r.samples == 3);
      for (auto& p : r.points) {
        for (auto& c : p.congruences) {
          CAPTURE(c.name);
          CHECK(c.pass);
        }
        CHECK(p.residue_ok);
        CHECK(p.outside_singular);
      }
      CHECK(r.all_pass());
    }
  }
}

TEST_CASE("negative control: a Y12 point read through the Y21 chain fails") {
  int q = 3;
  FieldTower tw(q, 12);
  ChartConstants cc = chart_constants(&tw, q);
  auto samples = chart_samples(&tw, q, Chart::Y12, 1, 7u);
  REQUIRE(samples.size() == 1);
  ChartPoint good = chart_point(cc, Chart::Y12, samples[0]);
  CHECK(good.all_pass());
  // rescaling with the wrong frame breaks the unit normalizations
  ChartPoint bad = chart_point(cc, Chart::Y21, samples[0]);
  CHECK_FALSE(bad.all_pass());
}

TEST_CASE("negative control: perturbing a coordinate breaks the chain") {
  int q = 2;
  FieldTower tw(q, 12);
  ChartConstants cc = chart_constants(&tw, q);
  auto samples = chart_samples(&tw, q, Chart::Y12, 1, 11u);
  REQUIRE(samples.size() == 1);
  TorsionSample s = samples[0];
  ChartFrame f = chart_frame(q, Chart::Y12);
  s.x2 = s.x2 + Hahn::monomial(&tw, tw.one(), f.s2);  // shift the unit part
  ChartPoint p = chart_point(cc, Chart::Y12, s);
  CHECK_FALSE(p.all_pass());
}

TEST_CASE("rewrite ring: normal forms, inverses, certified vanishing") {
  FieldTower tw(2, 12);
  // toy ring: g with v(g) = 1/8 and g^2 -> pi^{1/4} (so g ~ pi^{1/8})
  RewriteRing R(&tw, {Rat(1, 8)}, Rat(1, 2));
  R.set_rule(0, 2, R.from_hahn(Hahn::pi_pow(&tw, Rat(1, 4))));
  RingElem g = R.gen(0);
  RingElem g2 = R.mul(g, g);
  CHECK(R.val_bound(g2) == Rat(1, 4));
  // g^4 - pi^{1/2} normalizes to zero (here: to past the cap)
  RingElem d = R.add(R.pow(g, 4),
                     R.from_hahn(Hahn::pi_pow(&tw, Rat(1, 2)).scale(
                         tw.from_int(-1))));
  CHECK(R.zero_past(d, Rat(2, 5)));
  // inverse of a 1-unit
  RingElem u = R.add(R.from_hahn(Hahn::constant(&tw, tw.one())), g);
  RingElem uinv = R.inverse(u, 16);
  RingElem prod = R.mul(u, uinv);
  prod = R.add(prod, R.from_hahn(Hahn::constant(&tw, tw.from_int(-1))));
  CHECK(R.zero_past(prod, Rat(2, 5)));
}

TEST_CASE("deep charts, odd q: branch-point identity over the constant ring") {
  FieldTower tw(3, 12);
  DeepOddReport r = verify_deep_odd(&tw);
  CHECK(r.zeta_count >= 3);
  CHECK(r.constants_ok);
  CHECK(r.scale_vals_ok);
  CHECK(r.identity_ok);
  CHECK(r.all_pass());
}

TEST_CASE("deep charts, q = 2: formal chain and elliptic identity") {
  FieldTower tw(2, 12);
  DeepEvenReport r = verify_deep_even(&tw);
  CHECK(r.chain_ok);
  CHECK(r.boundary_ok);
  CHECK(r.central_ok);
  CHECK(r.constants_ok);
  CHECK(r.elliptic_ok);
  CHECK(r.all_pass());
}

TEST_CASE("quaternion units: multiplication and the kappa invariants") {
  for (int q : {2, 3}) {
    CAPTURE(q);
    FieldTower tw(q, 12);
    auto el = tw.all_elements(2);
    std::mt19937 rng(5);
    for (int i = 0; i < 40; ++i) {
      ODUnit a{el[rng() % el.size()], el[rng() % el.size()]};
      ODUnit b{el[rng() % el.size()], el[rng() % el.size()]};
      if (a.d1.is_zero() || b.d1.is_zero()) continue;
      ODUnit ab = od_mul(&tw, q, a, b);
      // kappa1 is multiplicative
      CHECK(feq(tw, od_kappa1(&tw, q, ab),
                tw.mul(od_kappa1(&tw, q, a), od_kappa1(&tw, q, b))));
      // kappa2(ab) = kappa2(b) + kappa2(a) kappa1(b)^{1-q}
      FieldElem want = tw.add(
          od_kappa2(&tw, q, b),
          tw.mul(od_kappa2(&tw, q, a),
                 tw.pow(tw.inv(od_kappa1(&tw, q, b)), q - 1)));
      CHECK(feq(tw, od_kappa2(&tw, q, ab), want));
    }
  }
}

TEST_CASE("unit action: formulas on curves, identity, composition") {
  struct Case {
    int q;
    ActionCurve curve;
  };
  for (Case c : {Case{2, ActionCurve::DLY12}, Case{3, ActionCurve::DLY12},
                 Case{2, ActionCurve::DLY21}, Case{3, ActionCurve::DLY21},
                 Case{2, ActionCurve::ZBar}, Case{3, ActionCurve::ZBar},
                 Case{3, ActionCurve::XOdd}, Case{2, ActionCurve::XEven}}) {
    CAPTURE(c.q);
    CAPTURE((int)c.curve);
    FieldTower tw(c.q, 12);
    ActionAxiomsReport r = verify_action_axioms(&tw, c.q, c.curve, 50, 99u);
    CHECK(r.pairs >= 30);
    CHECK(r.maps_on_curve);
    CHECK(r.identity_ok);
    CHECK(r.composition_ok);
    CHECK(r.all_pass());
  }
}

TEST_CASE("inertia: grid characters are coherent") {
  FieldTower tw(3, 12);
  Hahn a = Hahn::monomial(&tw, tw.one(), Rat(1, 216)) +
           Hahn::monomial(&tw, tw.gen(2), Rat(5, 8));
  GridChar sig = make_inertia_char(&tw, {&a}, 1, 0);
  // multiplicative on the grid
  FieldElem v1 = sig.chi(Rat(1, 8)), v2 = sig.chi(Rat(3, 8));
  CHECK(feq(tw, tw.mul(v1, tw.mul(v1, v1)), v2));
  // trivial on integers and on pure p-power denominators
  CHECK(feq(tw, sig.chi(Rat(1)), tw.one()));
  CHECK(feq(tw, sig.chi(Rat(1, 27)), tw.one()));
}

TEST_CASE("inertia equivariance on the middle charts") {
  for (int q : {2, 3}) {
    FieldTower tw(q, 12);
    for (Chart chart : {Chart::Y12, Chart::Y21, Chart::Z11}) {
      CAPTURE(q);
      CAPTURE(chart_name(chart));
      InertiaReport r = verify_inertia(&tw, q, chart, 5, 5, 31u);
      CHECK(r.sigmas >= 5);
      CHECK(r.samples >= 5);
      CHECK(r.passed == r.sigmas * r.samples);
      CHECK(r.all_pass());
    }
  }
}

TEST_CASE("negative control: a wrong inertia twist is detected") {
  int q = 3;
  FieldTower tw(q, 12);
  ChartConstants cc = chart_constants(&tw, q);
  auto samples = chart_samples(&tw, q, Chart::Y12, 1, 31u);
  REQUIRE(samples.size() == 1);
  GridChar sig = make_inertia_char(
      &tw, {&samples[0].u, &samples[0].x1, &samples[0].x2, &samples[0].x3}, 1,
      0);
  InertiaCheck ok = inertia_equivariance(cc, Chart::Y12, samples[0], sig);
  CHECK(ok.pass());
  // swapping the predicted twists of x and y must fail for a generic sigma
  InertiaCheck bad = ok;
  std::swap(bad.want_x, bad.want_y);
  bad.match = feq(tw, bad.got_x, bad.want_x) && feq(tw, bad.got_y, bad.want_y);
  CHECK_FALSE(bad.pass());
}
