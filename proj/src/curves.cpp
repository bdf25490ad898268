#include "lt3/curves.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace lt3 {

void BivPoly::set(int i, int j, const FieldElem& c) {
  if (c.is_zero())
    terms.erase({i, j});
  else
    terms[{i, j}] = c;
}

void BivPoly::set_int(int i, int j, std::int64_t n) {
  set(i, j, tw->from_int(n, deg));
}

int BivPoly::x_deg() const {
  int d = 0;
  for (auto& [ij, c] : terms) d = std::max(d, ij.first);
  return d;
}

int BivPoly::y_deg() const {
  int d = 0;
  for (auto& [ij, c] : terms) d = std::max(d, ij.second);
  return d;
}

FieldElem BivPoly::eval(const FieldElem& x, const FieldElem& y) const {
  int d = std::lcm(deg, std::lcm(x.deg, y.deg));
  FieldElem xx = tw->embed(x, d), yy = tw->embed(y, d);
  // powers of x and y up to the needed degrees
  std::vector<FieldElem> xp{tw->one(d)}, yp{tw->one(d)};
  for (int i = 1; i <= x_deg(); ++i) xp.push_back(tw->mul(xp.back(), xx));
  for (int j = 1; j <= y_deg(); ++j) yp.push_back(tw->mul(yp.back(), yy));
  FieldElem acc = tw->zero(d);
  for (auto& [ij, c] : terms)
    acc = tw->add(acc, tw->mul(tw->embed(c, d),
                               tw->mul(xp[ij.first], yp[ij.second])));
  return acc;
}

std::vector<FieldElem> BivPoly::fix_x(const FieldElem& x) const {
  int d = std::lcm(deg, x.deg);
  FieldElem xx = tw->embed(x, d);
  std::vector<FieldElem> xp{tw->one(d)};
  for (int i = 1; i <= x_deg(); ++i) xp.push_back(tw->mul(xp.back(), xx));
  std::vector<FieldElem> out(y_deg() + 1, tw->zero(d));
  for (auto& [ij, c] : terms)
    out[ij.second] =
        tw->add(out[ij.second], tw->mul(tw->embed(c, d), xp[ij.first]));
  return out;
}

PlaneCurve curve_dl(const FieldTower* tw, int q) {
  // x^q y - x y^q = 1, smooth model has q+1 infinity points, genus q(q-1)/2
  int f = 1, pw = tw->p();
  while (pw < q) pw *= tw->p(), ++f;
  PlaneCurve c;
  c.name = "dl";
  c.f.tw = tw;
  c.f.deg = f;
  c.f.set_int(q, 1, 1);
  c.f.set_int(1, q, -1);
  c.f.set_int(0, 0, -1);
  c.infinity_points = q + 1;
  c.genus_bound = q * (q - 1) / 2;
  return c;
}

PlaneCurve curve_as(const FieldTower* tw, int q) {
  // x^q - x = y^2 (x the Artin-Schreier coordinate), one infinity point
  int f = 1, pw = tw->p();
  while (pw < q) pw *= tw->p(), ++f;
  PlaneCurve c;
  c.name = "as";
  c.f.tw = tw;
  c.f.deg = f;
  c.f.set_int(q, 0, 1);
  c.f.set_int(1, 0, -1);
  c.f.set_int(0, 2, -1);
  c.infinity_points = 1;
  c.genus_bound = (q - 1) / 2;
  return c;
}

PlaneCurve curve_e(const FieldTower* tw) {
  // x^2 + x = y^3 over F_2, one infinity point
  PlaneCurve c;
  c.name = "e";
  c.f.tw = tw;
  c.f.deg = 1;
  c.f.set_int(2, 0, 1);
  c.f.set_int(1, 0, 1);
  c.f.set_int(0, 3, -1);
  c.infinity_points = 1;
  c.genus_bound = 1;
  return c;
}

PlaneCurve curve_zbar(const FieldTower* tw, int q) {
  // x^q + y^(q^2-1) + y^-(q^2-1) = 0, cleared: x^q y^(q^2-1) + y^(2(q^2-1)) + 1
  int f = 1, pw = tw->p();
  while (pw < q) pw *= tw->p(), ++f;
  PlaneCurve c;
  c.name = "zbar";
  c.f.tw = tw;
  c.f.deg = f;
  int e = q * q - 1;
  c.f.set_int(q, e, 1);
  c.f.set_int(0, 2 * e, 1);
  c.f.set_int(0, 0, 1);
  c.infinity_points = 2;
  c.genus_bound = 1;  // expected genus 0; bound 1 exercises the trim
  return c;
}

PlaneCurve curve_pbar0(const FieldTower* tw, int q) {
  // x^2 = y (y^(q-1) - 1)^2, q even: x^2 + y^(2q-1) + y
  if (tw->p() != 2) throw std::domain_error("curve_pbar0: q must be even");
  int f = 1, pw = 2;
  while (pw < q) pw *= 2, ++f;
  PlaneCurve c;
  c.name = "pbar0";
  c.f.tw = tw;
  c.f.deg = f;
  c.f.set_int(2, 0, 1);
  c.f.set_int(0, 2 * q - 1, 1);
  c.f.set_int(0, 1, 1);
  c.infinity_points = 1;
  c.genus_bound = 1;
  return c;
}

long long count_affine(const PlaneCurve& c, int m) {
  const FieldTower* tw = c.f.tw;
  int d = c.f.deg * m;
  if (d > tw->max_degree())
    throw std::domain_error("count_affine: tower too small for degree " +
                            std::to_string(d));
  auto xs = tw->all_elements(d);
  long long n = 0;
  for (auto& x : xs) {
    auto coeffs = c.f.fix_x(tw->embed(x, d));
    for (auto& y : xs) {
      // Horner in y
      FieldElem acc = coeffs.back();
      for (int j = (int)coeffs.size() - 2; j >= 0; --j)
        acc = tw->add(tw->mul(acc, y), coeffs[j]);
      if (acc.is_zero()) ++n;
    }
  }
  return n;
}

long long count_points(const PlaneCurve& c, int m) {
  return count_affine(c, m) + c.infinity_points;
}

namespace {

// max | |root| - target | over the complex roots of 1 + c_1 T + ... (by
// Durand-Kerner); roots of the numerator are the reciprocal eigenvalues
double root_modulus_defect(const std::vector<long long>& num, double target) {
  int n = (int)num.size() - 1;
  if (n <= 0) return 0;
  std::vector<std::complex<double>> a(num.begin(), num.end());
  std::vector<std::complex<double>> r(n);
  for (int i = 0; i < n; ++i)
    r[i] = std::polar(0.4 + 0.9 / target, 2 * M_PI * i / n + 0.7);
  auto eval = [&](std::complex<double> z) {
    std::complex<double> acc = a[n];
    for (int i = n - 1; i >= 0; --i) acc = acc * z + a[i];
    return acc;
  };
  for (int it = 0; it < 500; ++it) {
    double moved = 0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> den = a[n];
      for (int j = 0; j < n; ++j)
        if (j != i) den *= r[i] - r[j];
      if (std::abs(den) < 1e-300) continue;
      std::complex<double> step = eval(r[i]) / den;
      r[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-13) break;
  }
  double defect = 0;
  for (auto& z : r)  // numerator roots are 1/alpha_i, |alpha_i| = target
    defect = std::max(defect, std::abs(1.0 / std::abs(z) - target));
  return defect;
}

}  // namespace

ZetaData zeta_genus(const PlaneCurve& c, int g_max) {
  const FieldTower* tw = c.f.tw;
  long long q0 = 1;
  for (int i = 0; i < c.f.deg; ++i) q0 *= tw->p();
  // power sums of the inverse roots from the counts
  std::vector<long long> ps(2 * g_max + 1, 0);
  long long qm = 1;
  for (int m = 1; m <= 2 * g_max; ++m) {
    qm *= q0;
    ps[m] = 1 + qm - count_points(c, m);
  }
  // Newton's identities: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
  std::vector<long long> e(2 * g_max + 1, 0);
  e[0] = 1;
  for (int k = 1; k <= 2 * g_max; ++k) {
    long long s = 0;
    for (int i = 1; i <= k; ++i) s += (i % 2 ? 1 : -1) * e[k - i] * ps[i];
    if (s % k)
      throw std::domain_error(
          "zeta_genus: counts inconsistent with any g <= g_max");
    e[k] = s / k;
  }
  int top = 2 * g_max;
  while (top > 0 && e[top] == 0) --top;
  if (top % 2)
    throw std::domain_error(
        "zeta_genus: counts inconsistent with any g <= g_max (odd degree)");
  ZetaData z;
  z.genus = top / 2;
  z.numerator.resize(top + 1);
  for (int k = 0; k <= top; ++k) z.numerator[k] = (k % 2 ? -e[k] : e[k]);
  z.functional_equation = true;
  long long qg = 1;
  for (int i = 0; i < z.genus; ++i) qg *= q0;
  for (int k = 0; k <= z.genus; ++k) {
    long long scale = qg;
    for (int i = 0; i < k; ++i) scale /= q0;
    if (z.numerator[top - k] != scale * z.numerator[k])
      z.functional_equation = false;
  }
  z.root_abs_defect = root_modulus_defect(z.numerator, std::sqrt((double)q0));
  return z;
}

bool supersingular_check(const PlaneCurve& e) {
  long long q0 = 1;
  for (int i = 0; i < e.f.deg; ++i) q0 *= e.f.tw->p();
  long long tr = q0 + 1 - count_points(e, 1);
  return tr % e.f.tw->p() == 0;
}

MapCheck verify_map(const PlaneCurve& src, const PlaneCurve& dst,
                    const RationalMapFormula& map, int m) {
  const FieldTower* tw = src.f.tw;
  int d = src.f.deg * m;
  auto xs = tw->all_elements(d);
  MapCheck r;
  r.ok = true;
  for (auto& x : xs)
    for (auto& y : xs) {
      if (!src.f.eval(x, y).is_zero()) continue;
      ++r.tested;
      FieldElem xf = tw->frobenius(x, -map.frob);
      FieldElem yf = tw->frobenius(y, -map.frob);
      FieldElem dx = map.dx.eval(xf, yf), dy = map.dy.eval(xf, yf);
      if (dx.is_zero() || dy.is_zero()) {
        r.denominator_failures.push_back("(" + x.str() + "," + y.str() + ")");
        continue;
      }
      FieldElem u = tw->div(map.nx.eval(xf, yf), dx);
      FieldElem v = tw->div(map.ny.eval(xf, yf), dy);
      if (!dst.f.eval(u, v).is_zero()) {
        r.off_target.push_back("(" + x.str() + "," + y.str() + ")");
        r.ok = false;
      }
    }
  return r;
}

int GroupTable::order_of(int i) const {
  int x = i, n = 1;
  while (x != 0) {
    x = mul[x][i];
    ++n;
  }
  return n;
}

std::map<int, int> GroupTable::order_profile() const {
  std::map<int, int> prof;
  for (int i = 0; i < size(); ++i) ++prof[order_of(i)];
  return prof;
}

bool GroupTable::associative() const {
  int n = size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]]) return false;
  return true;
}

std::optional<int> GroupTable::inverse_of(int i) const {
  for (int j = 0; j < size(); ++j)
    if (mul[i][j] == 0 && mul[j][i] == 0) return j;
  return std::nullopt;
}

int GroupTable::center_size() const {
  int n = size(), c = 0;
  for (int a = 0; a < n; ++a) {
    bool central = true;
    for (int b = 0; b < n && central; ++b) central = mul[a][b] == mul[b][a];
    if (central) ++c;
  }
  return c;
}

int QGroup::index_of(const FieldElem& a, const FieldElem& b,
                     const FieldElem& g) const {
  for (size_t i = 0; i < elems.size(); ++i)
    if (elems[i][0] == a && elems[i][1] == b && elems[i][2] == g)
      return (int)i;
  return -1;
}

int QGroup::twist(int i, int r) const {
  auto& e = elems[i];
  return index_of(tw->frobenius(e[0], r), tw->frobenius(e[1], r),
                  tw->frobenius(e[2], r));
}

QGroup build_q_group(const FieldTower* tw) {
  QGroup q;
  q.tw = tw;
  auto f4 = tw->all_elements(2);
  // identity first, then the rest in encode order
  auto accept = [&](const FieldElem& a, const FieldElem& b,
                    const FieldElem& g) {
    FieldElem lhs = tw->add(tw->mul(a, tw->mul(g, g)),
                            tw->mul(tw->mul(a, a), g));
    return lhs == tw->mul(b, tw->mul(b, b));
  };
  FieldElem one = tw->one(2), zero = tw->zero(2);
  q.elems.push_back({one, zero, zero});
  for (auto& a : f4) {
    if (a.is_zero()) continue;
    for (auto& b : f4)
      for (auto& g : f4) {
        if (a == one && b.is_zero() && g.is_zero()) continue;
        if (accept(a, b, g)) q.elems.push_back({a, b, g});
      }
  }
  int n = (int)q.elems.size();
  q.table.mul.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    auto& [a, b, g] = q.elems[i];
    q.table.labels.push_back("g(" + a.str() + "," + b.str() + "," + g.str() +
                             ")");
    for (int j = 0; j < n; ++j) {
      auto& [a2, b2, g2] = q.elems[j];
      // matrix product of the upper-triangular shapes
      FieldElem pa = tw->mul(a, a2);
      FieldElem pb = tw->add(tw->mul(a, b2), tw->mul(b, tw->mul(a2, a2)));
      FieldElem pg = tw->add(tw->add(tw->mul(a, g2), tw->mul(b, tw->mul(b2, b2))),
                             tw->mul(g, a2));
      int k = q.index_of(pa, pb, pg);
      if (k < 0) throw std::logic_error("build_q_group: not closed");
      q.table.mul[i][j] = k;
    }
  }
  return q;
}

GroupTable sl2_f3_table() {
  std::vector<std::array<int, 4>> ms;
  ms.push_back({1, 0, 0, 1});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          if ((a * d - b * c) % 3 != 1 && (a * d - b * c) % 3 != -2) continue;
          std::array<int, 4> m{a, b, c, d};
          if (m == std::array<int, 4>{1, 0, 0, 1}) continue;
          ms.push_back(m);
        }
  auto idx = [&](const std::array<int, 4>& m) {
    for (size_t i = 0; i < ms.size(); ++i)
      if (ms[i] == m) return (int)i;
    return -1;
  };
  GroupTable t;
  int n = (int)ms.size();
  t.mul.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    auto& m = ms[i];
    t.labels.push_back("[" + std::to_string(m[0]) + std::to_string(m[1]) +
                       ";" + std::to_string(m[2]) + std::to_string(m[3]) +
                       "]");
    for (int j = 0; j < n; ++j) {
      auto& u = ms[j];
      std::array<int, 4> p{((m[0] * u[0] + m[1] * u[2]) % 3 + 3) % 3,
                           ((m[0] * u[1] + m[1] * u[3]) % 3 + 3) % 3,
                           ((m[2] * u[0] + m[3] * u[2]) % 3 + 3) % 3,
                           ((m[2] * u[1] + m[3] * u[3]) % 3 + 3) % 3};
      t.mul[i][j] = idx(p);
    }
  }
  return t;
}

namespace {

// closure of generator images into a full map, or nullopt on conflict
std::optional<std::vector<int>> extend_hom(const GroupTable& g,
                                           const GroupTable& h,
                                           const std::vector<std::pair<int, int>>& gens) {
  int n = g.size();
  std::vector<int> phi(n, -1);
  phi[0] = 0;
  for (auto& [a, b] : gens) {
    if (phi[a] >= 0 && phi[a] != b) return std::nullopt;
    phi[a] = b;
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (int a = 0; a < n; ++a) {
      if (phi[a] < 0) continue;
      for (int b = 0; b < n; ++b) {
        if (phi[b] < 0) continue;
        int ab = g.mul[a][b], im = h.mul[phi[a]][phi[b]];
        if (phi[ab] < 0) {
          phi[ab] = im;
          grew = true;
        } else if (phi[ab] != im) {
          return std::nullopt;
        }
      }
    }
  }
  for (int a = 0; a < n; ++a)
    if (phi[a] < 0) return std::nullopt;  // generators did not generate
  std::vector<bool> hit(n, false);
  for (int a = 0; a < n; ++a) {
    if (hit[phi[a]]) return std::nullopt;
    hit[phi[a]] = true;
  }
  return phi;
}

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const GroupTable& g,
                                                 const GroupTable& h) {
  if (g.size() != h.size()) return std::nullopt;
  int n = g.size();
  // find a generating pair of g
  for (int x = 1; x < n; ++x)
    for (int y = x; y < n; ++y) {
      auto probe = extend_hom(g, g, {{x, x}, {y, y}});
      if (!probe) continue;  // (x,y) does not generate
      for (int u = 1; u < n; ++u) {
        if (h.order_of(u) != g.order_of(x)) continue;
        for (int v = 1; v < n; ++v) {
          if (h.order_of(v) != g.order_of(y)) continue;
          auto phi = extend_hom(g, h, {{x, u}, {y, v}});
          if (phi) return phi;
        }
      }
      return std::nullopt;  // generating pair found but no images work
    }
  return std::nullopt;
}

QEActionCheck verify_qe_action(const FieldTower* tw) {
  QGroup q = build_q_group(tw);
  PlaneCurve e = curve_e(tw);
  // affine E(F_16)
  std::vector<std::pair<FieldElem, FieldElem>> pts;
  for (auto& z : tw->all_elements(4))
    for (auto& w : tw->all_elements(4))
      if (e.f.eval(z, w).is_zero()) pts.emplace_back(z, w);
  auto act = [&](int gi, int r, std::pair<FieldElem, FieldElem> p) {
    auto& [a, b, g] = q.elems[gi];
    FieldElem ai = tw->inv(a);
    FieldElem zr = tw->frobenius(tw->embed(p.first, 4), -r);
    FieldElem wr = tw->frobenius(tw->embed(p.second, 4), -r);
    FieldElem ab = tw->embed(tw->mul(ai, b), 4);
    FieldElem z2 = tw->add(tw->add(zr, tw->mul(ab, wr)),
                           tw->embed(tw->mul(ai, g), 4));
    FieldElem w2 =
        tw->mul(tw->embed(a, 4), tw->add(wr, tw->mul(ab, ab)));
    return std::make_pair(z2, w2);
  };
  QEActionCheck r;
  r.points = (int)pts.size();
  r.all_preserve = true;
  for (int gi = 0; gi < 24; ++gi)
    for (auto& p : pts) {
      auto [z2, w2] = act(gi, 0, p);
      if (!e.f.eval(z2, w2).is_zero()) r.all_preserve = false;
    }
  // composition: (g,r)(g',r') = (g * twist(g', r), r + r')
  r.composition_ok = true;
  for (int gi = 0; gi < 24; ++gi)
    for (int gj = 0; gj < 24; ++gj)
      for (int ri = 0; ri < 2; ++ri)
        for (int rj = 0; rj < 2; ++rj) {
          int gp = q.table.mul[gi][q.twist(gj, ri)];
          for (size_t k = 0; k < pts.size(); k += 5) {
            auto lhs = act(gi, ri, act(gj, rj, pts[k]));
            auto rhs = act(gp, ri + rj, pts[k]);
            if (lhs != rhs) r.composition_ok = false;
          }
        }
  r.faithful = true;
  for (int gi = 1; gi < 24; ++gi) {
    bool trivial = true;
    for (auto& p : pts) {
      auto [z2, w2] = act(gi, 0, p);
      if (z2 != tw->embed(p.first, 4) || w2 != tw->embed(p.second, 4))
        trivial = false;
    }
    if (trivial) r.faithful = false;
  }
  return r;
}

DlCharacterDims dl_character_dims(const FieldTower* tw, int q) {
  DlCharacterDims d;
  d.dim_sum = (q - 1) * q;
  d.coset_count = (q * q - 1) - (q - 1);
  PlaneCurve c = curve_dl(tw, q);
  ZetaData z = zeta_genus(c, c.genus_bound);
  d.two_genus = 2 * z.genus;
  d.equal = (d.dim_sum == d.coset_count) && (d.dim_sum == d.two_genus);
  long long q2 = (long long)q * q;
  long long n2 = count_points(c, 2);
  d.lefschetz_ok = std::llabs(q2 + 1 - n2) <= (long long)d.two_genus * q;
  return d;
}

}  // namespace lt3
