#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lt3/curves.hpp"
#include "lt3/formal.hpp"

namespace lt3 {

// ---------------------------------------------------------------------------
// Charts of the level-three tower at middle radius.  Each chart is a region
// of the (u, X1, X2, X3) space, rescaled by fixed fractional powers of pi so
// that the rescaled coordinates are units; pushing the defining congruences
// to the residue field yields a smooth plane curve per chart.
// ---------------------------------------------------------------------------

enum class Chart { Y12, Y21, Z11 };

std::string chart_name(Chart c);

// valuations of u, X1, X2, X3 on a chart (the regime of the torsion tower)
struct ChartFrame {
  int q = 0;
  Chart chart = Chart::Y12;
  Rat vu, s1, s2, s3;  // v(u) and the three coordinate scales
};
ChartFrame chart_frame(int q, Chart chart);

// Constants shared by all points of a chart for a fixed q.  c0 is the unit
// solving c0^q - pi^{(q-1)/q} c0 + 1 = 0 with residue -1 (used by the Y21
// chain); it is wildly ramified, so it is computed by a contraction whose
// honest precision is recorded in c0_prec.
struct ChartConstants {
  const FieldTower* tw = nullptr;
  int q = 0;
  Hahn c0, c0_root;  // c0 and its (unique) q-th root
  Rat c0_prec;
};
ChartConstants chart_constants(const FieldTower* tw, int q);

// one intermediate congruence of a chart chain
struct CongCheck {
  std::string name;
  Rat level;        // the congruence is checked strictly past this level
  bool at_stated;   // checked at the full stated level (vs a capped one)
  bool pass = false;
};

// A sampled point pushed through a chart chain: the rescaled coordinates,
// the auxiliary units of the chain, the intermediate congruences, and the
// residue-field coordinates with their plane-curve membership test.
struct ChartPoint {
  Chart chart;
  int q = 0;
  Hahn ut, x1, x2, x3;           // rescaled unit coordinates
  std::vector<CongCheck> congruences;
  // residue coordinates: (x,y) on x^q y - x y^q = 1 for Y12/Y21,
  // (z,x3) on z^q + x3^{q^2-1} + x3^{-(q^2-1)} = 0 for Z11
  FieldElem rx, ry;
  bool residue_ok = false;
  bool outside_singular = true;  // Z11: residue of x3 avoids the bad locus
  bool all_pass() const;
};

// deterministic pseudo-random points of a chart (grid perturbations of x3)
std::vector<TorsionSample> chart_samples(const FieldTower* tw, int q,
                                         Chart chart, int n, unsigned seed);

ChartPoint chart_point(const ChartConstants& cc, Chart chart,
                       const TorsionSample& s);

struct ChartReport {
  Chart chart;
  int q = 0;
  int samples = 0;
  int passed = 0;
  std::vector<ChartPoint> points;
  bool all_pass() const { return samples > 0 && passed == samples; }
};
ChartReport verify_chart(const FieldTower* tw, int q, Chart chart, int n,
                         unsigned seed);

// ---------------------------------------------------------------------------
// Symbolic quotient ring for the wild constants of the deep charts.  The
// ring is Hahn[g_1,...,g_k] modulo one rewrite rule g_i^{n_i} -> (element)
// per generator; each generator has valuation v_i >= 0 and each rule either
// lowers total degree or strictly gains valuation, so normal forms exist.
// An element is certified zero past level alpha when every normal-form term
// has valuation bound > alpha.
// ---------------------------------------------------------------------------

using RingMono = std::vector<int>;  // exponent per generator

struct RingElem {
  std::map<RingMono, Hahn> t;
};

class RewriteRing {
 public:
  RewriteRing(const FieldTower* tw, std::vector<Rat> gen_vals, Rat cap);

  void set_rule(int gen, int power, RingElem rhs);  // g^power -> rhs

  int gens() const { return (int)vals_.size(); }
  const FieldTower* tower() const { return tw_; }
  Rat cap() const { return cap_; }

  RingElem zero() const { return {}; }
  RingElem from_hahn(const Hahn& h) const;
  RingElem gen(int i, int e = 1) const;
  RingElem add(const RingElem& a, const RingElem& b) const;
  RingElem mul(const RingElem& a, const RingElem& b) const;
  RingElem scale(const RingElem& a, const Hahn& h) const;
  RingElem pow(const RingElem& a, long long e) const;
  // inverse of a unit: leading Hahn coefficient of the constant monomial
  // must be a unit and every other term must have positive valuation bound
  RingElem inverse(const RingElem& a, int series_terms) const;
  RingElem normalize(RingElem a) const;

  // least valuation bound among normal-form terms (cap if none survive)
  Rat val_bound(const RingElem& a) const;
  // certified v(a) > alpha
  bool zero_past(const RingElem& a, const Rat& alpha) const;
  // constant term as a Hahn series (fails if non-constant monomials remain
  // at or below the requested level)
  Hahn constant_part(const RingElem& a, const Rat& level) const;

  Rat mono_val(const RingMono& m) const;

 private:
  const FieldTower* tw_ = nullptr;
  std::vector<Rat> vals_;
  Rat cap_;
  std::map<int, std::pair<int, RingElem>> rules_;
};

// bivariate polynomials over a RewriteRing (exponents of the two reduced
// curve coordinates z, w)
struct RingBivTerm {
  int ez = 0, ew = 0;
};
inline bool operator<(const RingBivTerm& a, const RingBivTerm& b) {
  return a.ez != b.ez ? a.ez < b.ez : a.ew < b.ew;
}
struct RingBiv {
  std::map<RingBivTerm, RingElem> t;
};
RingBiv biv_add(const RewriteRing& R, const RingBiv& a, const RingBiv& b);
RingBiv biv_mul(const RewriteRing& R, const RingBiv& a, const RingBiv& b);
RingBiv biv_pow(const RewriteRing& R, const RingBiv& a, long long e);
RingBiv biv_scale(const RewriteRing& R, const RingBiv& a, const RingElem& c);

// ---------------------------------------------------------------------------
// Deep charts.  For odd q the chart around each x3-branch point carries the
// curve z^q - z = w^2; for q = 2 the central component carries
// z^2 = w (w+1)^2 and the chart at each unit branch point carries the
// elliptic curve z^2 + z = w^3.  Both reductions are established by exact
// polynomial identities in the wild-constant ring, not by sampling.
// ---------------------------------------------------------------------------

struct DeepOddReport {
  int q = 3;
  int zeta_count = 0;             // branch points checked
  bool constants_ok = false;      // defining relations of the constant ring
  bool scale_vals_ok = false;     // v(a) = 1/(2q^4 (q-1) q), v(b) = half of it
  bool identity_ok = false;       // chain congruence == a^q (z^q - z - w^2)
  std::vector<std::string> notes;
  bool all_pass() const {
    return zeta_count >= 3 && constants_ok && scale_vals_ok && identity_ok;
  }
};
DeepOddReport verify_deep_odd(const FieldTower* tw);  // q = 3

struct DeepEvenReport {
  bool chain_ok = false;      // rescaled chain congruence derived exactly
  bool boundary_ok = false;   // boundary-level defect lies in the curve ideal
  bool central_ok = false;    // residue identity z2^2 = w1 (w1+1)^2
  bool constants_ok = false;  // defining relations of the elliptic constants
  bool elliptic_ok = false;   // chain congruence == a1^2 (z^2 + z + w^3)
  std::vector<std::string> branch_classes;  // one entry per unit branch point
  std::vector<std::string> notes;
  bool all_pass() const {
    return chain_ok && boundary_ok && central_ok && constants_ok &&
           elliptic_ok && !branch_classes.empty();
  }
};
DeepEvenReport verify_deep_even(const FieldTower* tw);  // q = 2

// ---------------------------------------------------------------------------
// Residue-level action of the units of the quaternion order.  A unit is
// recorded by the residues (d1, d2) of its two components; the reduced
// action on each chart depends only on kappa1 = d1 and kappa2 = -d2 / d1^q.
// ---------------------------------------------------------------------------

struct ODUnit {
  FieldElem d1, d2;  // d1 in F_{q^2}^x, d2 in F_{q^2}
};
ODUnit od_mul(const FieldTower* tw, int q, const ODUnit& a, const ODUnit& b);
FieldElem od_kappa1(const FieldTower* tw, int q, const ODUnit& d);
FieldElem od_kappa2(const FieldTower* tw, int q, const ODUnit& d);

enum class ActionCurve { DLY12, DLY21, ZBar, XOdd, XEven };

// the reduced action of d on the named curve; for the branch-point charts
// (XOdd / XEven) zeta identifies the source chart and the action lands on
// the chart at kappa1 * zeta (same plane curve)
RationalMapFormula dd_action_formula(const FieldTower* tw, int q,
                                     ActionCurve curve, const ODUnit& d,
                                     const FieldElem& zeta);

struct ActionAxiomsReport {
  ActionCurve curve;
  int q = 0;
  int pairs = 0;
  bool maps_on_curve = false;   // every sampled formula passes verify_map
  bool composition_ok = false;  // act(dd') = act(d) after act(d') pointwise
  bool identity_ok = false;
  bool all_pass() const {
    return pairs > 0 && maps_on_curve && composition_ok && identity_ok;
  }
};
ActionAxiomsReport verify_action_axioms(const FieldTower* tw, int q,
                                        ActionCurve curve, int n_pairs,
                                        unsigned seed);

// ---------------------------------------------------------------------------
// Inertia equivariance.  An inertia element acts on a tower point through a
// coherent character on the exponent grid (plus a Frobenius power on the
// coefficients); pushing the transformed point through the chart chain must
// match the residue-level twist predicted for the chart.
// ---------------------------------------------------------------------------

// character on the grid spanned by the exponents of the sample: the value at
// 1/D (D = lcm of denominators) is the k-th power of the deterministic
// primitive root of unity of order = prime-to-p part of D
GridChar make_inertia_char(const FieldTower* tw,
                           const std::vector<const Hahn*>& coords,
                           long long root_power, long long frob);

struct InertiaCheck {
  bool chain_ok = false;  // transformed point passes the chart chain
  bool match = false;     // residue coordinates match the predicted twist
  FieldElem got_x, got_y, want_x, want_y;
  bool pass() const { return chain_ok && match; }
};
InertiaCheck inertia_equivariance(const ChartConstants& cc, Chart chart,
                                  const TorsionSample& s, const GridChar& sig);

struct InertiaReport {
  Chart chart;
  int q = 0;
  int sigmas = 0, samples = 0, passed = 0;
  bool all_pass() const {
    return sigmas >= 5 && samples >= 5 && passed == sigmas * samples;
  }
};
InertiaReport verify_inertia(const FieldTower* tw, int q, Chart chart,
                             int n_sigma, int n_samples, unsigned seed);

}  // namespace lt3
