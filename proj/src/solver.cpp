#include "lt3/solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace lt3 {

namespace {

Rat val_or_prec(const Hahn& h) {
  auto v = h.val();
  return v ? *v : h.prec();
}

// binomial coefficients mod p via Lucas
int binom_mod_p(long long n, long long k, int p) {
  long long r = 1;
  while (n || k) {
    long long ni = n % p, ki = k % p;
    if (ki > ni) return 0;
    // C(ni, ki) mod p, ni < p small
    long long c = 1;
    for (long long j = 1; j <= ki; ++j) c = c * (ni - j + 1) / j;
    r = (r * (c % p)) % p;
    n /= p;
    k /= p;
  }
  return (int)r;
}

}  // namespace

Hahn SeriesPoly::eval(const Hahn& x) const {
  if (coeffs.empty()) return Hahn::zero(tw);
  int top = coeffs.rbegin()->first;
  Hahn acc = Hahn::zero(tw);
  for (int d = top; d >= 0; --d) {
    acc = acc * x;
    auto it = coeffs.find(d);
    if (it != coeffs.end()) acc = acc + it->second;
  }
  if (tail) {
    Rat vx = val_or_prec(x);
    acc.lower_prec(tail->second + Rat(tail->first) * vx);
  }
  return acc;
}

SeriesPoly SeriesPoly::derivative() const {
  SeriesPoly g;
  g.tw = tw;
  g.root_search_deg = root_search_deg;
  for (auto& [d, c] : coeffs) {
    if (d == 0) continue;
    auto cc = c.scale(tw->from_int(d, 1));
    g.set(d - 1, cc);
  }
  if (tail && tail->first > 0)
    g.tail = std::make_pair(tail->first - 1, tail->second);
  return g;
}

SeriesPoly SeriesPoly::shift_scale(const FieldElem& c, Rat s) const {
  // g_j = sum_{i>=j} C(i,j) c^{i-j} w^{s i} f_i
  SeriesPoly g;
  g.tw = tw;
  g.root_search_deg = root_search_deg;
  int p = tw->p();
  int top = max_deg();
  // precompute powers of c
  std::vector<FieldElem> cp(top + 1, tw->one(c.deg ? c.deg : 1));
  for (int i = 1; i <= top; ++i) cp[i] = tw->mul(cp[i - 1], c);
  for (int j = 0; j <= top; ++j) {
    Hahn acc = Hahn::zero(tw);
    bool any = false;
    for (auto& [i, fi] : coeffs) {
      if (i < j) continue;
      int b = binom_mod_p(i, j, p);
      if (b == 0) continue;
      FieldElem k = tw->mul(tw->from_int(b, 1), cp[i - j]);
      acc = acc + fi.shift(Rat(i) * s).scale(k);
      any = true;
    }
    // tail terms of degree >= D contribute >= tau + D s to every g_j
    if (tail) acc.lower_prec(tail->second + Rat(tail->first) * s);
    if (any || tail) g.set(j, acc);
  }
  return g;
}

std::vector<PolygonSegment> newton_polygon(const SeriesPoly& f) {
  // collect certified points
  std::vector<std::pair<int, Rat>> pts;  // (deg, val) for coeffs with terms
  std::vector<std::pair<int, Rat>> unknown;  // (deg, prec) for empty coeffs
  for (auto& [d, c] : f.coeffs) {
    auto v = c.val();
    if (v)
      pts.emplace_back(d, *v);
    else
      unknown.emplace_back(d, c.prec());
  }
  if (pts.size() < 2)
    throw std::domain_error(
        "newton_polygon: need at least two nonzero coefficients");
  // lower hull, ascending degree
  auto lower_hull = [](const std::vector<std::pair<int, Rat>>& src) {
    std::vector<std::pair<int, Rat>> hull;
    for (auto& pt : src) {
      while (hull.size() >= 2) {
        auto& a = hull[hull.size() - 2];
        auto& b = hull[hull.size() - 1];
        // drop b if slope(a,b) >= slope(b,pt)
        Rat s1 = (b.second - a.second) / Rat(b.first - a.first);
        Rat s2 = (pt.second - b.second) / Rat(pt.first - b.first);
        if (s2 <= s1)
          hull.pop_back();
        else
          break;
      }
      hull.push_back(pt);
    }
    return hull;
  };
  std::vector<std::pair<int, Rat>> hull = lower_hull(pts);
  // certification hull: imprecise coefficients and the tail bound, taken
  // pessimally as points at their precision floors, are the lowest the
  // unseen mass can sit; segments the pessimal hull reshapes are uncertain
  std::vector<std::pair<int, Rat>> pts_all = pts;
  for (auto& u : unknown) pts_all.push_back(u);
  if (f.tail && f.tail->first > pts.back().first)
    pts_all.emplace_back(f.tail->first, f.tail->second);
  std::sort(pts_all.begin(), pts_all.end());
  std::vector<std::pair<int, Rat>> hull_cert = lower_hull(pts_all);
  auto consecutive_in_cert = [&](const std::pair<int, Rat>& a,
                                 const std::pair<int, Rat>& b) {
    for (size_t i = 0; i + 1 < hull_cert.size(); ++i)
      if (hull_cert[i] == a && hull_cert[i + 1] == b) return true;
    return false;
  };
  std::vector<PolygonSegment> segs;
  for (size_t i = 0; i + 1 < hull.size(); ++i) {
    auto& a = hull[i];
    auto& b = hull[i + 1];
    PolygonSegment seg;
    Rat hull_slope = (b.second - a.second) / Rat(b.first - a.first);
    seg.slope = -hull_slope;  // root valuation
    seg.deg_lo = a.first;
    seg.length = b.first - a.first;
    seg.certified = consecutive_in_cert(a, b);
    if (seg.certified)
      for (int j = 0; j <= seg.length; ++j) {
        Rat want = a.second + hull_slope * Rat(j);
        Hahn cj = f.get(a.first + j);
        seg.residual.push_back(cj.coeff_at(want));
      }
    segs.push_back(seg);
  }
  return segs;
}

namespace {

// Newton iteration on g from y0 (with v(y)>0 domain), in the current
// variable; pins the root modulo abs_prec when the precision allows.
Hahn newton_iterate(const SeriesPoly& g, Hahn y, Rat abs_prec) {
  SeriesPoly dg = g.derivative();
  std::optional<Rat> prev;
  for (int it = 0; it < 80; ++it) {
    Hahn fy = g.eval(y);
    if (fy.known_zero()) break;
    Rat vf = fy.val_exact();
    Hahn dfy = dg.eval(y);
    if (dfy.known_zero())
      throw PrecisionError("newton: derivative vanishes to precision");
    if (vf - dfy.val_exact() >= abs_prec) break;
    if (prev && !(vf > *prev)) break;
    prev = vf;
    y = y - fy / dfy;
  }
  y.lower_prec(abs_prec);
  return y;
}

void roots_rec(const SeriesPoly& f, Rat s, Rat abs_prec, int depth,
               std::vector<SeriesRoot>& out);

void roots_on_segment(const SeriesPoly& f, const PolygonSegment& seg,
                      Rat abs_prec, int depth, std::vector<SeriesRoot>& out) {
  if (depth > 200)
    throw std::runtime_error(
        "solver: branch separation did not terminate (wild root?)");
  Rat s = seg.slope;
  auto rroots = poly_roots_ff(*f.tw, seg.residual, f.root_search_deg);
  for (auto& [c, m] : rroots) {
    if (c.is_zero()) continue;
    SeriesPoly h = f.shift_scale(c, s);
    Hahn x0 = Hahn::monomial(f.tw, c, s);
    Hahn h0 = h.get(0);
    if (h0.known_zero()) {
      // the substitution point is a root to available precision; all m
      // residual branches sit within the smallest positive hull slope of
      // (0, prec(h0)) joined with the known coefficients
      std::vector<std::pair<int, Rat>> pts{{0, h0.prec()}};
      for (auto& [d, cc] : h.coeffs)
        if (d > 0 && !cc.known_zero()) pts.emplace_back(d, cc.val_exact());
      std::vector<std::pair<int, Rat>> hull;
      for (auto& pt : pts) {
        while (hull.size() >= 2) {
          auto& a = hull[hull.size() - 2];
          auto& b = hull[hull.size() - 1];
          Rat s1 = (b.second - a.second) / Rat(b.first - a.first);
          Rat s2 = (pt.second - b.second) / Rat(pt.first - b.first);
          if (s2 <= s1) hull.pop_back(); else break;
        }
        hull.push_back(pt);
      }
      Rat bound(0);
      for (size_t i = 0; i + 1 < hull.size(); ++i) {
        Rat rv = (hull[i].second - hull[i + 1].second) /
                 Rat(hull[i + 1].first - hull[i].first);
        if (rv > Rat(0)) bound = rv;  // hull slopes decrease; keep smallest
      }
      Rat root_prec = s + bound;
      Hahn r = x0;
      r.lower_prec(rat_min(abs_prec, root_prec));
      out.push_back({r, m});
      continue;
    }
    Hahn h1 = h.get(1);
    bool hensel_ok = false;
    if (!h1.known_zero()) {
      Rat v0 = h0.val_exact(), v1 = h1.val_exact();
      hensel_ok = v0 > v1 * Rat(2);
    }
    if (m == 1 && hensel_ok) {
      Hahn y = newton_iterate(h, Hahn::zero(f.tw), abs_prec - s);
      Hahn r = x0 + y.shift(s);
      r.lower_prec(abs_prec);
      out.push_back({r, 1});
    } else {
      // recurse on positive-valuation residual directions
      std::vector<SeriesRoot> sub;
      auto segs = newton_polygon(h);
      for (auto& sg : segs) {
        if (!(sg.slope > Rat(0))) continue;
        if (!sg.certified) {
          // unseen coefficient mass could reshape this part of the hull;
          // report the cluster at the precision actually certified
          Hahn y = Hahn::zero(f.tw);
          y.lower_prec(sg.slope);
          sub.push_back({y, sg.length});
          continue;
        }
        if (sg.slope >= abs_prec - s) {
          // corrections on this segment fall below the requested precision;
          // report one root cluster (wild branches never separate)
          Hahn y = Hahn::zero(f.tw);
          y.lower_prec(abs_prec - s);
          sub.push_back({y, sg.length});
          continue;
        }
        if (depth >= 40 || sg.slope.den > 100000) {
          // wild branch: corrections shrink geometrically and the exponent
          // denominators double each level (supports accumulate), so the
          // requested precision is unreachable. Report the cluster at the
          // precision actually attained; callers see the shortfall through
          // the root's precision marker.
          Hahn y = Hahn::zero(f.tw);
          y.lower_prec(sg.slope);
          sub.push_back({y, sg.length});
          continue;
        }
        roots_on_segment(h, sg, abs_prec - s, depth + 1, sub);
      }
      for (auto& sr : sub) {
        Hahn r = x0 + sr.x.shift(s);
        r.lower_prec(abs_prec);
        out.push_back({r, sr.mult});
      }
    }
  }
}

}  // namespace

std::vector<SeriesRoot> roots_with_valuation(const SeriesPoly& f, Rat slope,
                                             Rat rel_prec) {
  auto segs = newton_polygon(f);
  for (auto& seg : segs) {
    if (seg.slope == slope) {
      if (!seg.certified)
        throw PrecisionError(
            "roots_with_valuation: segment of slope " + slope.str() +
            " is not certified (imprecise coefficients below the hull)");
      std::vector<SeriesRoot> out;
      roots_on_segment(f, seg, slope + rel_prec, 0, out);
      return out;
    }
  }
  std::string have;
  for (auto& seg : segs) have += " " + seg.slope.str();
  throw std::domain_error("roots_with_valuation: no segment of slope " +
                          slope.str() + "; polygon has" + have);
}

Hahn hensel_refine(const SeriesPoly& f, const Hahn& x0, Rat abs_prec) {
  SeriesPoly df = f.derivative();
  Hahn f0 = f.eval(x0);
  Hahn d0 = df.eval(x0);
  if (d0.known_zero())
    throw PrecisionError("hensel_refine: derivative vanishes to precision");
  if (!f0.known_zero() && !(f0.val_exact() > d0.val_exact() * Rat(2)))
    throw std::domain_error("hensel_refine: v(f(x0)) <= 2 v(f'(x0))");
  return newton_iterate(f, x0, abs_prec);
}

Hahn root_transport(const SeriesPoly& f, const Hahn& predicted, Rat separation,
                    Rat rel_prec) {
  if (predicted.prec() <= separation)
    throw PrecisionError("root_transport: prediction coarser than separation");
  Rat s = predicted.val_exact();
  Rat rel = rat_max(rel_prec, separation - s + Rat(1, 4));
  auto roots = roots_with_valuation(f, s, rel);
  std::vector<size_t> close;
  for (size_t i = 0; i < roots.size(); ++i) {
    Hahn d = roots[i].x - predicted;
    Rat vd = d.known_zero() ? d.prec() : d.val_exact();
    if (vd > separation) close.push_back(i);
  }
  if (close.size() != 1)
    throw std::runtime_error("root_transport: " +
                             std::to_string(close.size()) +
                             " candidates within separation " +
                             separation.str());
  Hahn r = roots[close[0]].x;
  r.lower_prec(s + rel_prec);
  return r;
}

}  // namespace lt3
