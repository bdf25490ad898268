#pragma once

#include <string>
#include <vector>

#include "lt3/solver.hpp"

namespace lt3 {

// Laurent polynomial in the deformation parameter u with Hahn coefficients.
struct UPoly {
  const FieldTower* tw = nullptr;
  std::map<int, Hahn> c;  // u-degree -> coefficient

  static UPoly zero(const FieldTower* t) { return {t, {}}; }
  static UPoly one(const FieldTower* t);
  void set(int a, const Hahn& h);
  Hahn get(int a) const;
  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly scale(const Hahn& h) const;
  UPoly shift_pi(Rat e) const;   // multiply every coefficient by w^e
  UPoly frob(int k) const;       // F(x) = x^{p^k}: coeff^{p^k}, u-deg * p^k
  UPoly capped(int u_max) const; // drop u-degrees > u_max
  Hahn eval(const Hahn& u) const;
  bool known_zero() const;
};

// Coefficients f_i of the universal additive series F(X) = sum f_i X^{q^i},
// built from f_0 = 1 by the two-term recursion w f_i = f_{i-1} u^{q^{i-1}}
// + f_{i-2} (only the first two deformation slots are nonzero: u and 1).
struct UnivLog {
  const FieldTower* tw = nullptr;
  int q = 0, i_max = 0, u_deg = 0;
  std::vector<UPoly> f;
};

UnivLog build_univ_log(const FieldTower* tw, int q, int i_max, int u_deg);

// Multiplication-by-a series [a](X) = F^{-1}(a F(X)) as a polynomial in X
// (degrees 1..deg_cap) with UPoly coefficients. All coefficients are
// integral (no negative w-exponents); violation throws std::logic_error.
struct MultSeries {
  const FieldTower* tw = nullptr;
  int q = 0;
  int deg_cap = 0;
  std::map<int, UPoly> g;  // X-degree -> g_n(u)

  // specialize at a parameter value; tail bound records that omitted
  // degrees > deg_cap all have integral coefficients
  SeriesPoly specialize(const Hahn& u_value) const;
};

MultSeries mult_series(const UnivLog& log, const Hahn& a, int deg_cap,
                       int u_deg_cap, Rat pi_prec);

// cached multiplication-by-w series for tower solving
const MultSeries& mult_by_pi(const FieldTower* tw, int q, int deg_cap,
                             Rat pi_prec);

// Displayed congruence for [w](X): the difference from
// wX + uX^q + X^{q^2} lies in the monomial ideal
// (w^3, w^2 X^q, u w X^q, w X^{q^2}, X^{q^3+1}).  (The bracketed
// correction term of the display is identically zero here: q-th power is
// additive in characteristic p, so the congruence has this short form.)
struct LemmaAllResult {
  bool pass = false;
  std::vector<std::string> offending;  // monomials outside the ideal
  // negative controls: name -> whether the mutated congruence failed (want true)
  std::vector<std::pair<std::string, bool>> controls;
  bool all_controls_fail = false;
};

LemmaAllResult check_lemma_all(int q);

// One point of the level-3 torsion tower: [w](X1) = 0 (X1 != 0),
// [w](X_{i+1}) = X_i.
struct TorsionSample {
  const FieldTower* tw = nullptr;
  int q = 0;
  Hahn u, x1, x2, x3;
  std::vector<std::pair<int, int>> picks;  // (segment rank, root index)/level
};

// picks[i] = (polygon segment rank by descending slope, residual root index)
// at level i+1; field_deg: residue-field degree for residual root search.
TorsionSample torsion_tower(const FieldTower* tw, int q, const Hahn& u_value,
                            int level,
                            const std::vector<std::pair<int, int>>& picks,
                            int field_deg, Rat rel_prec);

// Forward sampler: choose the level-3 coordinate X3 as a finite series on a
// fixed grid, compute X2 = [w](X3) and X1 = [w](X2) exactly as truncated
// series, and solve the remaining scalar condition [w](X1) = 0 for the
// deformation parameter u near valuation vu. Solving downward instead
// (through X3) is impossible past chart depth: level-3 roots are wild in
// equal characteristic and their supports accumulate. u, by contrast, is a
// tame root on the same exponent grid as X3, so every coordinate of the
// returned sample is known to absolute depth `depth`.
// root_index selects among the u-branches of valuation vu (deterministic
// order); field_deg is the residue-field search degree for u.
TorsionSample sample_by_x3(const FieldTower* tw, int q, const Hahn& x3,
                           Rat vu, int root_index, int field_deg, Rat depth);

// number of residual branches at level 1 (roots of [w](X)=0 with X != 0)
int level1_branch_count(const FieldTower* tw, int q, const Hahn& u_value,
                        int field_deg);

// The (case, primed-case) classification of the valuation data
// (v(u), v(X1), v(X2)) x (v(X2), v(X3)); throws if no or multiple cases
// match. Cases 2..6 never pair with 2'..4'.
std::pair<int, int> classify_region(const TorsionSample& s);

}  // namespace lt3
