#include "lt3/formal.hpp"

#include <sstream>
#include <stdexcept>
#include <tuple>

namespace lt3 {

namespace {

// q = p^f with p prime
std::pair<int, int> split_prime_power(int q) {
  for (int p = 2; p <= q; ++p) {
    if (q % p) continue;
    int f = 0, m = q;
    while (m % p == 0) { m /= p; ++f; }
    if (m != 1) throw std::domain_error("q is not a prime power");
    return {p, f};
  }
  throw std::domain_error("bad q");
}

long long ipow_ll(long long b, int e) {
  long long r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

UPoly UPoly::one(const FieldTower* t) {
  UPoly r{t, {}};
  r.c[0] = Hahn::constant(t, t->one());
  return r;
}

void UPoly::set(int a, const Hahn& h) { c[a] = h; }

Hahn UPoly::get(int a) const {
  auto it = c.find(a);
  return it == c.end() ? Hahn::zero(tw) : it->second;
}

UPoly UPoly::operator+(const UPoly& o) const {
  UPoly r{tw, c};
  for (auto& [a, h] : o.c) {
    auto it = r.c.find(a);
    if (it == r.c.end())
      r.c[a] = h;
    else
      it->second = it->second + h;
  }
  for (auto it = r.c.begin(); it != r.c.end();)
    it = it->second.known_zero() && it->second.prec() >= Rat(1000000)
             ? r.c.erase(it)
             : std::next(it);
  return r;
}

UPoly UPoly::operator-(const UPoly& o) const {
  UPoly neg{o.tw, {}};
  for (auto& [a, h] : o.c) neg.c[a] = -h;
  return *this + neg;
}

UPoly UPoly::operator*(const UPoly& o) const {
  UPoly r{tw, {}};
  for (auto& [a, h] : c)
    for (auto& [b, g] : o.c) {
      Hahn t = h * g;
      auto it = r.c.find(a + b);
      if (it == r.c.end())
        r.c[a + b] = t;
      else
        it->second = it->second + t;
    }
  return r;
}

UPoly UPoly::scale(const Hahn& h) const {
  UPoly r{tw, {}};
  for (auto& [a, g] : c) r.c[a] = g * h;
  return r;
}

UPoly UPoly::shift_pi(Rat e) const {
  UPoly r{tw, {}};
  for (auto& [a, g] : c) r.c[a] = g.shift(e);
  return r;
}

UPoly UPoly::frob(int k) const {
  UPoly r{tw, {}};
  long long m = ipow_ll(tw->p(), k);
  for (auto& [a, g] : c) r.c[(int)(a * m)] = g.frob_pow(k);
  return r;
}

UPoly UPoly::capped(int u_max) const {
  UPoly r{tw, {}};
  for (auto& [a, g] : c)
    if (a <= u_max) r.c[a] = g;
  return r;
}

Hahn UPoly::eval(const Hahn& u) const {
  Hahn acc = Hahn::zero(tw);
  if (c.empty()) return acc;
  int top = c.rbegin()->first;
  for (int a = top; a >= 0; --a) {
    acc = acc * u;
    auto it = c.find(a);
    if (it != c.end()) acc = acc + it->second;
  }
  return acc;
}

bool UPoly::known_zero() const {
  for (auto& [a, g] : c)
    if (!g.known_zero()) return false;
  return true;
}

UnivLog build_univ_log(const FieldTower* tw, int q, int i_max, int u_deg) {
  UnivLog L;
  L.tw = tw;
  L.q = q;
  L.i_max = i_max;
  L.u_deg = u_deg;
  L.f.resize(i_max + 1);
  L.f[0] = UPoly::one(tw);
  for (int i = 1; i <= i_max; ++i) {
    // w f_i = f_{i-1} u^{q^{i-1}} + f_{i-2}
    UPoly rhs{tw, {}};
    UPoly um{tw, {}};
    um.set((int)ipow_ll(q, i - 1), Hahn::constant(tw, tw->one()));
    rhs = L.f[i - 1] * um;
    if (i >= 2) rhs = rhs + L.f[i - 2];
    L.f[i] = rhs.shift_pi(Rat(-1)).capped(u_deg);
  }
  return L;
}

MultSeries mult_series(const UnivLog& log, const Hahn& a, int deg_cap,
                       int u_deg_cap, Rat pi_prec) {
  auto [p, f] = split_prime_power(log.q);
  MultSeries m;
  m.tw = log.tw;
  m.q = log.q;
  m.deg_cap = deg_cap;
  for (int n = 1; n <= deg_cap; ++n) {
    UPoly gn = UPoly::zero(log.tw);
    // a f_j when n = q^j
    for (int j = 0; j <= log.i_max; ++j)
      if (ipow_ll(log.q, j) == n) gn = gn + log.f[j].scale(a);
    for (int i = 1; i <= log.i_max; ++i) {
      long long qi = ipow_ll(log.q, i);
      if (qi > n || n % qi) continue;
      auto it = m.g.find((int)(n / qi));
      if (it == m.g.end()) continue;
      gn = gn - log.f[i] * it->second.frob(f * i);
    }
    gn = gn.capped(u_deg_cap);
    for (auto& [deg, h] : gn.c) {
      h.lower_prec(pi_prec);
      auto v = h.val();
      if (v && *v < Rat(0)) {
        std::ostringstream os;
        os << "integrality violation in [a](X) at X^" << n << " u^" << deg;
        throw std::logic_error(os.str());
      }
    }
    if (!gn.known_zero() || n == 1) m.g[n] = gn;
  }
  return m;
}

SeriesPoly MultSeries::specialize(const Hahn& u_value) const {
  SeriesPoly P;
  P.tw = tw;
  for (auto& [n, gn] : g) {
    Hahn c = gn.eval(u_value);
    P.set(n, c);
  }
  P.tail = std::make_pair(deg_cap + 1, Rat(0));
  return P;
}

const MultSeries& mult_by_pi(const FieldTower* tw, int q, int deg_cap,
                             Rat pi_prec) {
  // keyed by field data, not tower address: test code builds towers with
  // overlapping lifetimes and the allocator recycles addresses
  static std::map<std::tuple<int, int, int, int, Rat>,
                  std::pair<const FieldTower*, MultSeries>>
      cache;
  auto key =
      std::make_tuple(tw->p(), tw->max_degree(), q, deg_cap, pi_prec);
  auto it = cache.find(key);
  if (it != cache.end() && it->second.first == tw) return it->second.second;
  int i_max = 3;
  while (ipow_ll(q, i_max) < deg_cap) ++i_max;
  int u_deg_cap = deg_cap / (q - 1) + 2;
  UnivLog L = build_univ_log(tw, q, i_max, u_deg_cap);
  MultSeries m =
      mult_series(L, Hahn::pi_pow(tw, Rat(1)), deg_cap, u_deg_cap, pi_prec);
  auto& slot = cache[key];
  slot = std::make_pair(tw, std::move(m));
  return slot.second;
}

namespace {

// monomial u^a w^b X^c in (w^3, w^2 X^q, u w X^q, w X^{q^2}, X^{q^3+1})?
bool in_lemma_ideal(int a, Rat b, int c, int q) {
  if (b >= Rat(3)) return true;
  if (b >= Rat(2) && c >= q) return true;
  if (a >= 1 && b >= Rat(1) && c >= q) return true;
  if (b >= Rat(1) && c >= q * q) return true;
  if (c >= q * q * q + 1) return true;
  return false;
}

std::vector<std::string> lemma_defect(const MultSeries& m,
                                      const std::map<int, UPoly>& target,
                                      int q) {
  std::vector<std::string> bad;
  std::map<int, UPoly> diff;
  for (auto& [n, gn] : m.g) diff[n] = gn;
  for (auto& [n, tn] : target) {
    auto it = diff.find(n);
    diff[n] = (it == diff.end() ? UPoly::zero(tn.tw) : it->second) - tn;
  }
  for (auto& [n, dn] : diff)
    for (auto& [a, h] : dn.c)
      for (auto& [e, coef] : h.terms()) {
        if (in_lemma_ideal(a, e, n, q)) continue;
        std::ostringstream os;
        os << "u^" << a << " w^" << e.str() << " X^" << n;
        bad.push_back(os.str());
      }
  return bad;
}

}  // namespace

LemmaAllResult check_lemma_all(int q) {
  auto pf = split_prime_power(q);
  FieldTower tw(pf.first, 2);
  int deg_cap = q * q * q;  // degrees beyond q^3 lie in the ideal outright
  int u_deg_cap = (q * q * q - 1) / (q - 1) + 1;
  UnivLog L = build_univ_log(&tw, q, 3, u_deg_cap);
  MultSeries m = mult_series(L, Hahn::pi_pow(&tw, Rat(1)), deg_cap, u_deg_cap,
                             Rat(3));

  auto upoly_mono = [&](int a, Rat b) {
    UPoly r{&tw, {}};
    r.set(a, Hahn::pi_pow(&tw, b));
    return r;
  };
  // wX + uX^q + X^{q^2}; the bracketed correction of the display vanishes
  // identically (q-th power is additive), so this is the whole target.
  std::map<int, UPoly> target;
  target[1] = upoly_mono(0, Rat(1));
  target[q] = upoly_mono(1, Rat(0));
  target[q * q] = upoly_mono(0, Rat(0));

  LemmaAllResult res;
  res.offending = lemma_defect(m, target, q);
  res.pass = res.offending.empty();

  // negative controls: mutate each displayed coefficient in turn
  auto run_control = [&](const std::string& name, int deg, int a, Rat b) {
    auto t2 = target;
    t2[deg] = upoly_mono(a, b);
    bool failed = !lemma_defect(m, t2, q).empty();
    res.controls.emplace_back(name, failed);
  };
  run_control("wX -> w^2 X", 1, 0, Rat(2));
  run_control("uX^q -> u^2 X^q", q, 2, Rat(0));
  run_control("X^{q^2} -> u X^{q^2}", q * q, 1, Rat(0));
  res.all_controls_fail = true;
  for (auto& [name, failed] : res.controls)
    if (!failed) res.all_controls_fail = false;
  return res;
}

namespace {

// level-k equation [w](X) = rhs as a SeriesPoly (rhs may be 0); when
// divide_x is set the known root X = 0 is removed first.
SeriesPoly level_poly(const MultSeries& m, const Hahn& u_value,
                      const Hahn& rhs, bool divide_x) {
  SeriesPoly P = m.specialize(u_value);
  if (divide_x) {
    SeriesPoly Q;
    Q.tw = P.tw;
    Q.root_search_deg = P.root_search_deg;
    for (auto& [n, c] : P.coeffs) Q.set(n - 1, c);
    if (P.tail) Q.tail = std::make_pair(P.tail->first - 1, P.tail->second);
    return Q;
  }
  P.set(0, P.get(0) - rhs);
  return P;
}

// Drop u-degrees whose terms all lie beyond prec_total when v(u) = vu, and
// truncate the kept coefficients accordingly. Sound because every
// coefficient here is integral: omitted material has value >= prec_total.
UPoly cap_by_val(const UPoly& A, Rat vu, Rat prec_total) {
  UPoly r{A.tw, {}};
  for (auto& [a, h] : A.c) {
    Rat floor_a = prec_total - Rat(a) * vu;
    if (!(floor_a > Rat(0))) continue;
    Hahn hh = h;
    hh.lower_prec(floor_a);
    r.c[a] = hh;
  }
  return r;
}

// min over kept monomials u^a w^e of a*vu + e: the value the polynomial
// takes at any parameter of valuation vu (a lower bound that is exact when
// the minimum is attained once, which it is at regime slopes).
Rat upoly_value_at(const UPoly& A, Rat vu) {
  bool found = false;
  Rat best(0);
  for (auto& [a, h] : A.c) {
    auto v = h.val();
    if (!v) continue;
    Rat cand = Rat(a) * vu + *v;
    if (!found || cand < best) best = cand, found = true;
  }
  if (!found) throw std::domain_error("upoly_value_at: zero polynomial");
  return best;
}

std::vector<PolygonSegment> positive_segments(const SeriesPoly& f) {
  auto segs = newton_polygon(f);
  std::vector<PolygonSegment> out;
  for (auto& s : segs)
    if (s.slope > Rat(0)) out.push_back(s);
  // newton_polygon returns slopes in decreasing order already
  return out;
}

}  // namespace

TorsionSample torsion_tower(const FieldTower* tw, int q, const Hahn& u_value,
                            int level,
                            const std::vector<std::pair<int, int>>& picks,
                            int field_deg, Rat rel_prec) {
  if ((int)picks.size() < level)
    throw std::domain_error("torsion_tower: need one branch pick per level");
  TorsionSample s;
  s.tw = tw;
  s.q = q;
  s.u = u_value;
  s.picks = picks;
  Hahn big = Hahn::constant(tw, tw->one(field_deg));
  Hahn rhs = Hahn::zero(tw);
  std::vector<Hahn*> slots = {&s.x1, &s.x2, &s.x3};
  for (int lv = 1; lv <= level; ++lv) {
    // earlier levels carry extra precision so that sibling branches (which
    // differ by torsion points of valuation up to ~1) separate downstream
    Rat rel_lv = rel_prec + Rat(level - lv);
    // first pass with a small cap to learn the slope, then rebuild with a
    // cap large enough for the requested relative precision
    int cap0 = q * q + q + 1;
    const MultSeries& m0 = mult_by_pi(tw, q, cap0, rel_lv + Rat(2));
    SeriesPoly f0 = level_poly(m0, u_value * big, rhs, lv == 1);
    f0.root_search_deg = field_deg;
    auto segs = positive_segments(f0);
    auto [rank, idx] = picks[lv - 1];
    if (rank < 0 || segs.empty())
      throw std::domain_error("torsion_tower: no such branch (segment rank)");
    rank %= (int)segs.size();  // selectors wrap so any pick lands somewhere
    Rat slope = segs[rank].slope;
    Rat abs_prec = slope + rel_lv;
    int cap = cap0;
    while (Rat(cap) * slope < abs_prec) ++cap;
    ++cap;
    SeriesPoly f = f0;
    if (cap > cap0) {
      const MultSeries& m = mult_by_pi(tw, q, cap, rel_lv + Rat(2));
      f = level_poly(m, u_value * big, rhs, lv == 1);
      f.root_search_deg = field_deg;
    }
    auto roots = roots_with_valuation(f, slope, rel_lv);
    if (idx < 0 || roots.empty())
      throw std::domain_error("torsion_tower: no such branch (root index)");
    idx %= (int)roots.size();
    *slots[lv - 1] = roots[idx].x;
    rhs = roots[idx].x;
  }
  return s;
}

TorsionSample sample_by_x3(const FieldTower* tw, int q, const Hahn& x3_in,
                           Rat vu, int root_index, int field_deg, Rat depth) {
  Hahn big = Hahn::constant(tw, tw->one(field_deg));
  Hahn x3 = x3_in * big;
  Rat v3 = x3.val_exact();
  if (!(v3 > Rat(0)))
    throw std::domain_error("sample_by_x3: X3 must have positive valuation");
  // enough slack that every kept u-coefficient is certified above the
  // Newton-polygon hull of F (high u-degrees go into the tail bound instead)
  Rat prec_total = depth * Rat(2) + Rat(2);
  // one series of the largest degree serves all three tower levels
  int cap = q * q + 1;
  while (Rat(cap) * v3 < prec_total) ++cap;
  const MultSeries& m = mult_by_pi(tw, q, cap, prec_total);

  // level-by-level push-up: [w](B) as a polynomial in u; with divide_x the
  // series is divided by its argument first (so u-roots with X1 = 0, which
  // sample a level-2 point rather than a level-3 one, are excluded)
  auto push_up = [&](const UPoly& B, bool divide_x) {
    Rat vB = upoly_value_at(B, vu);
    int capB = q * q + 1;
    while (Rat(capB) * vB < prec_total) ++capB;
    if (capB > cap) capB = cap;
    UPoly acc = UPoly::zero(tw);
    UPoly pw = UPoly::one(tw);
    for (int n = 1; n <= capB; ++n) {
      if (!divide_x || n > 1) pw = cap_by_val(pw * B, vu, prec_total);
      auto it = m.g.find(n);
      if (it == m.g.end()) continue;
      acc = acc + it->second * pw;
    }
    return cap_by_val(acc, vu, prec_total);
  };

  UPoly B3 = UPoly::zero(tw);
  B3.set(0, x3);
  UPoly B2 = push_up(B3, false);  // X2(u) = [w](X3)
  UPoly B1 = push_up(B2, false);  // X1(u) = [w](X2)
  UPoly F = push_up(B1, true);    // [w](X1)/X1: must vanish at the sampled u

  // solve F(u) = 0 on the slope-vu branch; u-degrees past A carry less
  // precision than the polygon needs, but their integrality makes them a
  // valid tail bound
  int A = 0;
  while (Rat(A + 1) * vu < depth + Rat(1)) ++A;
  SeriesPoly P;
  P.tw = tw;
  for (auto& [a, h] : F.c)
    if (a <= A) P.set(a, h);
  P.tail = std::make_pair(A + 1, Rat(0));
  P.root_search_deg = field_deg;
  auto roots = roots_with_valuation(P, vu, depth);
  if (root_index < 0 || root_index >= (int)roots.size())
    throw std::domain_error("sample_by_x3: no such u-branch (root index)");

  TorsionSample s;
  s.tw = tw;
  s.q = q;
  s.u = roots[root_index].x;
  s.x3 = x3;
  s.x2 = B2.eval(s.u);
  s.x1 = B1.eval(s.u);
  return s;
}

int level1_branch_count(const FieldTower* tw, int q, const Hahn& u_value,
                        int field_deg) {
  Hahn big = Hahn::constant(tw, tw->one(field_deg));
  const MultSeries& m = mult_by_pi(tw, q, q * q + q + 1, Rat(3));
  SeriesPoly f = level_poly(m, u_value * big, Hahn::zero(tw), true);
  int total = 0;
  for (auto& seg : positive_segments(f)) total += seg.length;
  return total;
}

std::pair<int, int> classify_region(const TorsionSample& s) {
  int q = s.q;
  Rat vu = s.u.val_exact();
  Rat v1 = s.x1.val_exact();
  Rat v2 = s.x2.val_exact();
  Rat v3 = s.x3.val_exact();
  std::vector<int> cases;
  auto F = [&](long long n, long long d) { return Rat(n, d); };
  // (u, X1, X2) cases
  if (vu > Rat(0) && vu < F(1, q + 1) && v1 == (Rat(1) - vu) / Rat(q - 1) &&
      v2 == (Rat(1) - Rat(q) * vu) / Rat(q * (q - 1)))
    cases.push_back(1);
  if (vu > Rat(0) && vu < F(1, q + 1) && v1 == (Rat(1) - vu) / Rat(q - 1) &&
      v2 == vu / Rat(q * (q - 1)))
    cases.push_back(2);
  if (vu == F(1, q + 1) && v1 == F(q, q * q - 1) &&
      v2 == F(1, q * (q * q - 1)))
    cases.push_back(3);
  if (vu > Rat(0) && vu < F(q, q + 1) && v1 == vu / Rat(q * (q - 1)) &&
      v2 == vu / Rat(q * q * q * (q - 1)))
    cases.push_back(4);
  if (vu >= F(q, q + 1) && v1 == F(1, q * q - 1) &&
      v2 == F(1, q * q * (q * q - 1)))
    cases.push_back(5);
  if (vu > F(1, q + 1) && vu < F(q, q + 1) &&
      v1 == (Rat(1) - vu) / Rat(q - 1) &&
      v2 == (Rat(1) - vu) / Rat(q * q * (q - 1)))
    cases.push_back(6);
  // (X2, X3) cases
  Rat vq2 = Rat(q * q) * v3;            // v(X3^{q^2})
  Rat vuq = vu + Rat(q) * v3;           // v(u X3^q)
  std::vector<int> primed;
  if (vq2 == v2 && v2 < vuq) primed.push_back(1);
  if (vuq == v2 && v2 < vq2) primed.push_back(2);
  if (v2 > vq2 && vq2 == vuq) primed.push_back(3);
  if (v2 == vq2 && vq2 == vuq) primed.push_back(4);
  if (cases.size() != 1 || primed.size() != 1)
    throw std::runtime_error(
        "classify_region: no unique case for (v(u),v(X1),v(X2),v(X3)) = (" +
        vu.str() + "," + v1.str() + "," + v2.str() + "," + v3.str() + ")");
  return {cases[0], primed[0]};
}

}  // namespace lt3
