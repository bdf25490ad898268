#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lt3/hahn.hpp"

using namespace lt3;

namespace {
FieldTower t3(3, 8);
FieldTower t2(2, 8);

Hahn mono(const FieldTower& t, int c, Rat e, Rat prec = Rat(1000000)) {
  return Hahn::monomial(&t, t.from_int(c), e, prec);
}
}  // namespace

TEST_CASE("valuation and arithmetic with rational exponents") {
  auto a = mono(t3, 1, Rat(1, 2)) + mono(t3, 2, Rat(5, 6));
  auto b = mono(t3, 2, Rat(1, 3));
  CHECK(a.val().value() == Rat(1, 2));
  auto prod = a * b;
  CHECK(prod.val().value() == Rat(5, 6));
  CHECK(prod.coeff_at(Rat(5, 6)) == t3.from_int(2));
  CHECK(prod.coeff_at(Rat(7, 6)) == t3.from_int(4));  // 2*2 = 4 = 1 mod 3
  // cancellation
  auto z = a - a;
  CHECK(z.known_zero());
}

TEST_CASE("precision propagation") {
  auto a = mono(t3, 1, Rat(0), Rat(2));          // 1 + O(w^2)
  auto b = mono(t3, 1, Rat(1, 2), Rat(3, 2));    // w^(1/2) + O(w^(3/2))
  auto p = a * b;
  CHECK(p.prec() == Rat(3, 2));  // min(2 + 1/2, 3/2 + 0)
  auto s = a + b;
  CHECK(s.prec() == Rat(3, 2));
  // terms at/above precision are dropped
  Hahn c(&t3, Rat(1));
  c.set_term(Rat(2), t3.from_int(1));
  CHECK(c.known_zero());
}

TEST_CASE("inverse") {
  // (w^(-1/3)*(1 + w))^{-1}
  auto a = mono(t3, 1, Rat(-1, 3), Rat(4)) + mono(t3, 1, Rat(2, 3), Rat(4));
  auto inv = a.inverse();
  auto one = a * inv;
  CHECK(residue(one) == t3.from_int(1));
  CHECK(congruent(one, Hahn::constant(&t3, t3.from_int(1)), Rat(3)));
  // geometric series appears: coefficients alternate
  CHECK(inv.coeff_at(Rat(1, 3)) == t3.from_int(1));
  CHECK(inv.coeff_at(Rat(4, 3)) == t3.from_int(-1));
}

TEST_CASE("congruence contract is hard") {
  auto a = mono(t3, 1, Rat(0), Rat(1, 2));
  auto b = mono(t3, 1, Rat(0), Rat(1, 2));
  // equal to precision 1/2, but asking beyond 1/2 must error, never lie
  CHECK(congruent(a, b, Rat(1, 4)));
  CHECK_THROWS_AS((void)congruent(a, b, Rat(1, 2)), PrecisionError);
  CHECK_THROWS_AS((void)congruent(a, b, Rat(3, 4)), PrecisionError);
  // non-strict at exactly the precision edge is allowed
  CHECK(congruent(a, b, Rat(1, 2), /*strict=*/false));
  // a genuine difference is detected regardless
  auto c = a + mono(t3, 1, Rat(1, 4), Rat(1, 2));
  CHECK(!congruent(a, c, Rat(1, 4)));
}

TEST_CASE("nth_root: coprime part via Newton") {
  // square root of 1 + w over F_3: check square comes back
  auto a = mono(t3, 1, Rat(0), Rat(3)) + mono(t3, 1, Rat(1), Rat(3));
  auto r = nth_root(a, 2);
  CHECK(congruent(r * r, a, Rat(5, 2)));
  // deterministic branch: least leading root (1, not 2) over F_3
  CHECK(residue(r) == t3.from_int(1));
}

TEST_CASE("nth_root: p-part divides exponents exactly") {
  // cube root in char 3 is inverse Frobenius: (w^(3/2))^(1/3) = w^(1/2)
  auto a = mono(t3, 2, Rat(3, 2), Rat(6));
  auto r = nth_root(a, 3);
  CHECK(r.val().value() == Rat(1, 2));
  CHECK(congruent(r.pow_int(3), a, Rat(5, 2)));
  // 6th root: mixed p-part and coprime part, char 2
  auto b = mono(t2, 1, Rat(1, 2), Rat(4)) + mono(t2, 1, Rat(3, 2), Rat(4));
  auto r6 = nth_root(b, 6);
  CHECK(congruent(r6.pow_int(6), b, Rat(5, 4)));
  CHECK(r6.val().value() == Rat(1, 12));
}

TEST_CASE("residue") {
  auto a = mono(t3, 2, Rat(0), Rat(1)) + mono(t3, 1, Rat(1, 2), Rat(1));
  CHECK(residue(a) == t3.from_int(2));
  auto b = mono(t3, 1, Rat(1, 3), Rat(1));
  CHECK(residue(b).is_zero());  // v > 0
  auto c = mono(t3, 1, Rat(-1, 3), Rat(1));
  CHECK_THROWS(residue(c));  // negative valuation
  Hahn d(&t3, Rat(0));
  CHECK_THROWS_AS((void)residue(d), PrecisionError);  // no knowledge at 0
}

TEST_CASE("grid character coherence and action") {
  GridChar sig;
  sig.tw = &t3;
  auto mu16 = t3.roots_of_unity(16);
  // sigma(w^(1/16)) = zeta_16 w^(1/16); induced on coarser grids by powers
  sig.gen_val[16] = mu16[1];
  sig.gen_val[8] = t3.pow(mu16[1], 2);
  sig.validate();
  CHECK(sig.chi(Rat(1, 2)) == t3.pow(mu16[1], 8));
  CHECK(sig.chi(Rat(3, 4)) == t3.pow(mu16[1], 12));
  CHECK(sig.chi(Rat(-1, 16)) == t3.inv(mu16[1]));

  auto a = mono(t3, 1, Rat(1, 2), Rat(2)) + mono(t3, 2, Rat(9, 8), Rat(2));
  auto sa = grid_galois(a, sig);
  CHECK(sa.coeff_at(Rat(1, 2)) == sig.chi(Rat(1, 2)));
  CHECK(sa.coeff_at(Rat(9, 8)) ==
        t3.mul(t3.from_int(2), sig.chi(Rat(9, 8))));
  // identity character with frobenius twist acts on coefficients only
  GridChar fr;
  fr.tw = &t3;
  fr.gen_val[1] = t3.one(1);
  fr.frob = 1;
  auto w = t3.gen(2);
  auto b = Hahn::monomial(&t3, w, Rat(0));
  CHECK(grid_galois(b, fr).coeff_at(Rat(0)) == t3.pow(w, 3));
  // off-grid exponent refuses
  CHECK_THROWS((void)grid_galois(mono(t3, 1, Rat(1, 5)), sig));
}

TEST_CASE("incoherent character rejected") {
  GridChar bad;
  bad.tw = &t3;
  auto mu16 = t3.roots_of_unity(16);
  bad.gen_val[16] = mu16[1];
  bad.gen_val[8] = mu16[1];  // not chi(1/16)^2, and not an 8th root
  CHECK_THROWS(bad.validate());
}

TEST_CASE("frobenius powers on series") {
  auto w = t3.gen(2);
  auto a = Hahn::monomial(&t3, w, Rat(1, 2), Rat(5));
  auto f = a.frob_pow(1);
  CHECK(f.val().value() == Rat(3, 2));
  CHECK(f.coeff_at(Rat(3, 2)) == t3.pow(w, 3));
  auto back = f.frob_pow(-1);
  CHECK(back.val().value() == Rat(1, 2));
  CHECK(back.coeff_at(Rat(1, 2)) == w);
}
