#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lt3/finite_field.hpp"

namespace lt3 {

// Bivariate polynomial over F_{p^deg} inside a FieldTower.
struct BivPoly {
  const FieldTower* tw = nullptr;
  int deg = 1;  // coefficient field degree
  std::map<std::pair<int, int>, FieldElem> terms;  // (i,j) -> coeff of x^i y^j

  void set(int i, int j, const FieldElem& c);
  void set_int(int i, int j, std::int64_t n);
  bool zero() const { return terms.empty(); }
  int x_deg() const;
  int y_deg() const;
  // value at a point of F_{p^d}, d a multiple of deg
  FieldElem eval(const FieldElem& x, const FieldElem& y) const;
  // coefficients of the univariate polynomial in y obtained by fixing x
  std::vector<FieldElem> fix_x(const FieldElem& x) const;
};

// Affine plane curve f(x,y) = 0 with named smooth-compactification data.
struct PlaneCurve {
  std::string name;
  BivPoly f;
  int infinity_points = 1;  // on the smooth compactification
  int genus_bound = 1;      // upper bound used when fitting the zeta function
};

// the named curves of the reduction
PlaneCurve curve_dl(const FieldTower* tw, int q);      // x^q y - x y^q = 1
PlaneCurve curve_as(const FieldTower* tw, int q);      // z^q - z = w^2
PlaneCurve curve_e(const FieldTower* tw);              // z^2 + z = w^3
PlaneCurve curve_zbar(const FieldTower* tw, int q);    // Z^q + t^(q^2-1) + t^-(q^2-1) = 0, cleared
PlaneCurve curve_pbar0(const FieldTower* tw, int q);   // z^2 = w (w^(q-1) - 1)^2, q even

// affine solutions over F_{p^(deg f * m)}
long long count_affine(const PlaneCurve& c, int m);
// affine solutions plus the smooth-model infinity count
long long count_points(const PlaneCurve& c, int m);

struct ZetaData {
  int genus = 0;
  std::vector<long long> numerator;  // 1 + c_1 T + ... + c_2g T^2g
  bool functional_equation = false;  // c_{2g-i} = Q^{g-i} c_i
  double root_abs_defect = 0;        // max | |1/root| - sqrt(Q) | (numeric)
};

// Fit the zeta numerator from point counts N_1..N_{2 g_max} by Newton's
// identities on a_m = 1 + Q^m - N_m, trim trailing zeros to the true genus,
// and check the functional equation plus the root absolute values.
ZetaData zeta_genus(const PlaneCurve& c, int g_max);

// trace of Frobenius over the curve's base field is divisible by p
bool supersingular_check(const PlaneCurve& e);

// Coordinate map (x,y) -> (nx/dx, ny/dy) applied after the inverse
// Frobenius power x -> x^(p^-frob) on both inputs (semilinear part).
struct RationalMapFormula {
  int frob = 0;
  BivPoly nx, dx, ny, dy;
};

struct MapCheck {
  bool ok = false;
  int tested = 0;
  std::vector<std::string> denominator_failures;  // points where dx or dy = 0
  std::vector<std::string> off_target;            // image misses dst
};

// every affine point of src over F_{p^(deg*m)} with nonvanishing
// denominators lands on dst
MapCheck verify_map(const PlaneCurve& src, const PlaneCurve& dst,
                    const RationalMapFormula& map, int m);

// A finite group as a multiplication table (0 = identity).
struct GroupTable {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> mul;

  int size() const { return (int)mul.size(); }
  int order_of(int i) const;
  std::map<int, int> order_profile() const;  // element order -> count
  bool associative() const;                  // exhaustive
  std::optional<int> inverse_of(int i) const;
  int center_size() const;
};

// The 24 upper-triangular matrices g(a,b,c) in GL_3(F_4) with
// a c^2 + a^2 c = b^3; multiplication is matrix multiplication.
struct QGroup {
  const FieldTower* tw = nullptr;
  std::vector<std::array<FieldElem, 3>> elems;  // (alpha, beta, gamma)
  GroupTable table;

  int index_of(const FieldElem& a, const FieldElem& b,
               const FieldElem& g) const;
  // componentwise q^r-power (the integer part of the semidirect product)
  int twist(int i, int r) const;
};

QGroup build_q_group(const FieldTower* tw);

// SL_2(F_3) as a multiplication table (24 matrices)
GroupTable sl2_f3_table();

// explicit isomorphism (index map) between two group tables, found by
// extending generator images; nullopt if none exists
std::optional<std::vector<int>> find_isomorphism(const GroupTable& g,
                                                 const GroupTable& h);

struct QEActionCheck {
  bool all_preserve = false;      // all 24 g map E(F_16) into E(F_16)
  bool composition_ok = false;    // (g,r)(g',r') acts as the composite
  bool faithful = false;          // only the identity acts trivially
  int points = 0;                 // |E(F_16)| affine
};

// the affine action (z,w) -> (z^(q^-r) + a^-1 b w^(q^-r) + a^-1 c,
// a (w^(q^-r) + (a^-1 b)^2)) of Q x| Z on z^2 + z = w^3 over F_16
QEActionCheck verify_qe_action(const FieldTower* tw);

struct DlCharacterDims {
  int dim_sum = 0;        // (q-1) q, the character-pair count
  int coset_count = 0;    // (q^2-1) - (q-1)
  int two_genus = 0;      // 2 g(X_DL) from the zeta fit
  bool equal = false;
  bool lefschetz_ok = false;  // |Q^2 + 1 - N(F_{q^2})| <= 2 g q
};

DlCharacterDims dl_character_dims(const FieldTower* tw, int q);

}  // namespace lt3
