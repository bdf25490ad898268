#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lt3/hahn.hpp"

namespace lt3 {

// Polynomial in one variable X with Hahn coefficients. An optional tail bound
// (D, tau) asserts that every omitted term of degree >= D has coefficient
// valuation >= tau; root searches check it before trusting a slope.
struct SeriesPoly {
  const FieldTower* tw = nullptr;
  std::map<int, Hahn> coeffs;  // degree -> coefficient (known-zero omitted ok)
  std::optional<std::pair<int, Rat>> tail;
  // residual roots are searched in the lcm of the coefficient field and this
  // degree (0: coefficient field only); inseparable residuals factor through
  // separable polynomials whose roots need a genuine extension
  int root_search_deg = 0;

  void set(int d, const Hahn& c) { coeffs[d] = c; }
  Hahn get(int d) const {
    auto it = coeffs.find(d);
    return it == coeffs.end() ? Hahn::zero(tw) : it->second;
  }
  int max_deg() const { return coeffs.empty() ? -1 : coeffs.rbegin()->first; }
  Hahn eval(const Hahn& x) const;
  SeriesPoly derivative() const;
  // g(Y) = f(c*w^s + w^s*Y)  (substitution used by the polygon recursion)
  SeriesPoly shift_scale(const FieldElem& c, Rat s) const;
};

struct PolygonSegment {
  Rat slope;    // candidate root valuation
  int length;   // number of roots on this segment
  int deg_lo;   // hull x-range [deg_lo, deg_lo+length]
  std::vector<FieldElem> residual;  // residual polynomial, little-endian
  bool certified = true;  // false if an imprecise coefficient or the tail
                          // bound could reshape the hull across this segment
};

// Lower convex hull of (degree, v(coeff)). Segments come in hull order
// (ascending degree), so root valuations are strictly decreasing. Imprecise
// coefficients and the tail bound are folded in pessimally; segments they
// could reshape are reported with certified = false.
std::vector<PolygonSegment> newton_polygon(const SeriesPoly& f);

struct SeriesRoot {
  Hahn x;
  int mult = 1;
};

// All roots of f with valuation exactly `slope`, refined so that the root is
// pinned modulo slope + rel_prec. Deterministic branch order (by residual
// root). Multiple roots that cannot be separated at the working precision are
// reported once with their multiplicity.
std::vector<SeriesRoot> roots_with_valuation(const SeriesPoly& f, Rat slope,
                                             Rat rel_prec);

// Newton refinement from an approximate root; requires the usual
// v(f(x0)) > 2 v(f'(x0)) and refines until the root is pinned modulo
// abs_prec (or the coefficient precision saturates).
Hahn hensel_refine(const SeriesPoly& f, const Hahn& x0, Rat abs_prec);

// The unique root of f strictly closer to `predicted` than `separation`
// (v(root - predicted) > separation); errors if none or ambiguous.
Hahn root_transport(const SeriesPoly& f, const Hahn& predicted,
                    Rat separation, Rat rel_prec);

}  // namespace lt3
