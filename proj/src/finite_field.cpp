#include "lt3/finite_field.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace lt3 {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> ps;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      ps.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

void trim(std::vector<int>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// plain F_p[x] helpers (little-endian, normalized via trim)
std::vector<int> pmul(const std::vector<int>& a, const std::vector<int>& b,
                      int p) {
  if (a.empty() || b.empty()) return {};
  std::vector<int> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (size_t j = 0; j < b.size(); ++j)
        r[i + j] = (int)((r[i + j] + (long long)a[i] * b[j]) % p);
  trim(r);
  return r;
}

int inv_mod_p(int a, int p) {
  int r = 1, e = p - 2, b = a % p;
  while (e) {
    if (e & 1) r = (int)((long long)r * b % p);
    b = (int)((long long)b * b % p);
    e >>= 1;
  }
  return r;
}

std::vector<int> pmod(std::vector<int> a, const std::vector<int>& m, int p) {
  trim(a);
  int dm = (int)m.size() - 1;
  int lead_inv = inv_mod_p(m[dm], p);
  while ((int)a.size() - 1 >= dm && !a.empty()) {
    int k = (int)a.size() - 1 - dm;
    int f = (int)((long long)a.back() * lead_inv % p);
    if (f)
      for (int i = 0; i <= dm; ++i)
        a[k + i] = (int)(((long long)a[k + i] - (long long)f * m[i]) % p + p) % p;
    a.pop_back();
    trim(a);
  }
  return a;
}

std::vector<int> pgcd(std::vector<int> a, std::vector<int> b, int p) {
  trim(a); trim(b);
  while (!b.empty()) {
    auto r = pmod(a, b, p);
    a = b;
    b = r;
  }
  return a;
}

std::vector<int> ppowmod(std::vector<int> base, std::int64_t e,
                         const std::vector<int>& m, int p) {
  std::vector<int> r = {1};
  base = pmod(base, m, p);
  while (e) {
    if (e & 1) r = pmod(pmul(r, base, p), m, p);
    base = pmod(pmul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

}  // namespace

std::uint64_t FieldElem::encode() const {
  std::uint64_t v = 0;
  std::uint64_t p = tw ? (std::uint64_t)tw->p() : 2;
  for (int i = deg - 1; i >= 0; --i) v = v * p + (std::uint64_t)c[i];
  return v;
}

bool FieldElem::operator==(const FieldElem& o) const {
  if (deg != o.deg) return false;
  return c == o.c;
}

bool FieldElem::operator<(const FieldElem& o) const {
  if (deg != o.deg) return deg < o.deg;
  for (int i = deg - 1; i >= 0; --i)
    if (c[i] != o.c[i]) return c[i] < o.c[i];
  return false;
}

std::string FieldElem::str() const {
  std::string s = "[";
  for (int i = 0; i < deg; ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  s += "]";
  return s;
}

FieldTower::FieldTower(int p, int max_degree) : p_(p), maxdeg_(max_degree) {
  moduli_.resize(maxdeg_ + 1);
  for (int d = 1; d <= maxdeg_; ++d) {
    std::int64_t total = ipow(p_, d);
    for (std::int64_t k = 0;; ++k) {
      if (k >= total) throw std::logic_error("no irreducible found");
      std::vector<int> f(d + 1, 0);
      std::int64_t t = k;
      for (int i = 0; i < d; ++i) { f[i] = (int)(t % p_); t /= p_; }
      f[d] = 1;
      if (irreducible(f)) { moduli_[d] = f; break; }
    }
  }
}

bool FieldTower::irreducible(const std::vector<int>& f) const {
  int d = (int)f.size() - 1;
  if (d == 1) return true;
  // x^(p^d) == x mod f
  std::vector<int> x = {0, 1};
  std::vector<int> xp = x;
  // compute x^(p^d) by repeated p-th powering
  for (int i = 0; i < d; ++i) xp = ppowmod(xp, p_, f, p_);
  auto diff = xp;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = ((diff[1] - 1) % p_ + p_) % p_;
  trim(diff);
  if (!diff.empty()) return false;
  for (std::int64_t r : prime_divisors(d)) {
    std::vector<int> xq = x;
    for (int i = 0; i < d / r; ++i) xq = ppowmod(xq, p_, f, p_);
    auto g = xq;
    g.resize(std::max<size_t>(g.size(), 2), 0);
    g[1] = ((g[1] - 1) % p_ + p_) % p_;
    trim(g);
    auto gg = pgcd(f, g, p_);
    if ((int)gg.size() - 1 != 0) return false;
  }
  return true;
}

const std::vector<int>& FieldTower::modulus(int d) const {
  if (d < 1 || d > maxdeg_) throw std::out_of_range("FieldTower: degree");
  return moduli_[d];
}

FieldElem FieldTower::zero(int d) const {
  FieldElem e;
  e.tw = this;
  e.deg = d;
  e.c.assign(d, 0);
  return e;
}

FieldElem FieldTower::one(int d) const { return from_int(1, d); }

FieldElem FieldTower::from_int(std::int64_t n, int d) const {
  FieldElem e = zero(d);
  e.c[0] = (int)((n % p_ + p_) % p_);
  return e;
}

FieldElem FieldTower::gen(int d) const {
  FieldElem e = zero(d);
  if (d == 1) throw std::logic_error("gen: degree 1 has no generator");
  e.c[1] = 1;
  return e;
}

FieldElem FieldTower::from_coeffs(const std::vector<int>& c) const {
  FieldElem e;
  e.tw = this;
  e.deg = (int)c.size();
  e.c = c;
  for (auto& x : e.c) x = (x % p_ + p_) % p_;
  return e;
}

FieldElem FieldTower::decode(std::uint64_t code, int d) const {
  FieldElem e = zero(d);
  for (int i = 0; i < d; ++i) { e.c[i] = (int)(code % p_); code /= p_; }
  return e;
}

FieldElem FieldTower::add(const FieldElem& a0, const FieldElem& b0) const {
  FieldElem a = a0, b = b0;
  unify(a, b);
  for (int i = 0; i < a.deg; ++i) a.c[i] = (a.c[i] + b.c[i]) % p_;
  return a;
}

FieldElem FieldTower::sub(const FieldElem& a, const FieldElem& b) const {
  return add(a, neg(b));
}

FieldElem FieldTower::neg(const FieldElem& a0) const {
  FieldElem a = a0;
  for (auto& x : a.c) x = (p_ - x) % p_;
  return a;
}

std::vector<int> FieldTower::poly_mul_mod(const std::vector<int>& a,
                                          const std::vector<int>& b,
                                          int d) const {
  auto r = pmul(a, b, p_);
  r = pmod(r, moduli_[d], p_);
  r.resize(d, 0);
  return r;
}

FieldElem FieldTower::mul(const FieldElem& a0, const FieldElem& b0) const {
  FieldElem a = a0, b = b0;
  unify(a, b);
  FieldElem r = zero(a.deg);
  r.c = poly_mul_mod(a.c, b.c, a.deg);
  r.c.resize(a.deg, 0);
  return r;
}

FieldElem FieldTower::pow(const FieldElem& a, std::int64_t e) const {
  if (a.is_zero()) {
    if (e < 0) throw std::domain_error("pow: zero to negative power");
    return e == 0 ? one(a.deg) : a;
  }
  std::int64_t order = ipow(p_, a.deg) - 1;
  e %= order;
  if (e < 0) e += order;
  FieldElem r = one(a.deg), b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

FieldElem FieldTower::inv(const FieldElem& a) const {
  if (a.is_zero()) throw std::domain_error("inv: zero");
  return pow(a, ipow(p_, a.deg) - 2);
}

FieldElem FieldTower::div(const FieldElem& a, const FieldElem& b) const {
  return mul(a, inv(b));
}

FieldElem FieldTower::frobenius(const FieldElem& a, std::int64_t i) const {
  int d = a.deg;
  std::int64_t k = ((i % d) + d) % d;
  FieldElem r = a;
  for (std::int64_t j = 0; j < k; ++j) r = pow(r, p_);
  return r;
}

FieldElem FieldTower::embed(const FieldElem& a, int b) const {
  if (a.deg == b) return a;
  if (b % a.deg != 0 || b > maxdeg_)
    throw std::domain_error("embed: invalid target degree");
  auto key = std::make_pair(a.deg, b);
  auto it = gen_image_.find(key);
  if (it == gen_image_.end()) {
    // least root of modulus(a.deg) in F_{p^b}
    std::vector<FieldElem> mc;
    for (int co : moduli_[a.deg]) mc.push_back(from_int(co, b));
    FieldElem found = zero(b);
    bool ok = false;
    std::int64_t total = ipow(p_, b);
    for (std::int64_t code = 0; code < total; ++code) {
      FieldElem x = decode((std::uint64_t)code, b);
      if (poly_eval_ff(*this, mc, x).is_zero()) { found = x; ok = true; break; }
    }
    if (!ok) throw std::logic_error("embed: no root of modulus found");
    it = gen_image_.emplace(key, found).first;
  }
  // evaluate a at the embedded generator
  std::vector<FieldElem> ac;
  for (int co : a.c) ac.push_back(from_int(co, b));
  return poly_eval_ff(*this, ac, it->second);
}

void FieldTower::unify(FieldElem& a, FieldElem& b) const {
  if (a.deg == b.deg) return;
  int l = std::lcm(a.deg, b.deg);
  if (l > maxdeg_) throw std::domain_error("unify: lcm degree exceeds tower");
  a = embed(a, l);
  b = embed(b, l);
}

std::optional<FieldElem> FieldTower::descend(const FieldElem& a, int d) const {
  if (a.deg == d) return a;
  if (a.deg % d != 0) return std::nullopt;
  // a is in F_{p^d} iff frobenius^d fixes it; then search for the preimage
  if (frobenius(a, d) != a) return std::nullopt;
  std::int64_t total = ipow(p_, d);
  for (std::int64_t code = 0; code < total; ++code) {
    FieldElem x = decode((std::uint64_t)code, d);
    if (embed(x, a.deg) == a) return x;
  }
  return std::nullopt;
}

FieldElem FieldTower::trace(const FieldElem& a, int s) const {
  if (a.deg % s != 0) throw std::domain_error("trace: bad subfield");
  FieldElem r = zero(a.deg);
  for (int j = 0; j < a.deg / s; ++j) r = add(r, frobenius(a, (std::int64_t)s * j));
  auto down = descend(r, s);
  if (!down) throw std::logic_error("trace: result not in subfield");
  return *down;
}

FieldElem FieldTower::norm(const FieldElem& a, int s) const {
  if (a.deg % s != 0) throw std::domain_error("norm: bad subfield");
  FieldElem r = one(a.deg);
  for (int j = 0; j < a.deg / s; ++j) r = mul(r, frobenius(a, (std::int64_t)s * j));
  auto down = descend(r, s);
  if (!down) throw std::logic_error("norm: result not in subfield");
  return *down;
}

FieldElem FieldTower::multiplicative_generator(int d) const {
  auto it = mult_gen_.find(d);
  if (it != mult_gen_.end()) return it->second;
  std::int64_t order = ipow(p_, d) - 1;
  auto ps = prime_divisors(order);
  std::int64_t total = ipow(p_, d);
  for (std::int64_t code = 1; code < total; ++code) {
    FieldElem x = decode((std::uint64_t)code, d);
    bool prim = true;
    for (auto r : ps)
      if (pow(x, order / r) == one(d)) { prim = false; break; }
    if (prim) {
      mult_gen_[d] = x;
      return x;
    }
  }
  throw std::logic_error("no multiplicative generator");
}

FieldElem FieldTower::primitive_root_of_unity(std::int64_t n) const {
  if (n <= 0 || n % p_ == 0)
    throw std::domain_error("roots_of_unity: n divisible by p or nonpositive");
  for (int k = 1; k <= maxdeg_; ++k) {
    if ((ipow(p_, k) - 1) % n == 0) {
      FieldElem g = multiplicative_generator(k);
      return pow(g, (ipow(p_, k) - 1) / n);
    }
  }
  throw std::domain_error("roots_of_unity: no field in tower contains mu_n");
}

std::vector<FieldElem> FieldTower::roots_of_unity(std::int64_t n) const {
  FieldElem w = primitive_root_of_unity(n);
  std::vector<FieldElem> out;
  FieldElem cur = one(w.deg);
  for (std::int64_t i = 0; i < n; ++i) {
    out.push_back(cur);
    cur = mul(cur, w);
  }
  return out;
}

std::vector<FieldElem> FieldTower::all_elements(int d) const {
  std::vector<FieldElem> out;
  std::int64_t total = ipow(p_, d);
  out.reserve((size_t)total);
  for (std::int64_t code = 0; code < total; ++code)
    out.push_back(decode((std::uint64_t)code, d));
  return out;
}

FieldElem poly_eval_ff(const FieldTower& tw,
                       const std::vector<FieldElem>& coeffs,
                       const FieldElem& x) {
  FieldElem acc = tw.zero(x.deg);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = tw.add(tw.mul(acc, x), *it);
  return acc;
}

namespace {

int root_multiplicity(const FieldTower& tw, std::vector<FieldElem> cur,
                      const FieldElem& x, int d) {
  int mult = 0;
  while (true) {
    // divide cur by (X - x)
    std::vector<FieldElem> quot(cur.size() - 1, tw.zero(d));
    FieldElem carry = tw.zero(d);
    for (int i = (int)cur.size() - 1; i >= 1; --i) {
      carry = tw.add(cur[i], tw.mul(carry, x));
      quot[i - 1] = carry;
    }
    FieldElem rem = tw.add(cur[0], tw.mul(carry, x));
    if (!rem.is_zero()) break;
    ++mult;
    cur = quot;
    if (cur.empty()) break;
    if (!poly_eval_ff(tw, cur, x).is_zero()) break;
  }
  return mult;
}

}  // namespace

std::vector<std::pair<FieldElem, int>> poly_roots_ff(
    const FieldTower& tw, std::vector<FieldElem> coeffs, int search_degree) {
  int d0 = 1;
  for (auto& c : coeffs) d0 = std::lcm(d0, c.deg);
  int D = d0;
  if (search_degree > 0) D = std::lcm(D, search_degree);
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  if (coeffs.empty()) throw std::domain_error("poly_roots_ff: zero polynomial");
  int degf = (int)coeffs.size() - 1;
  std::vector<std::pair<FieldElem, int>> out;

  // purely inseparable binomial a X^{p^e} + b: the unique root is the p^e-th
  // root of -b/a, which exists in the coefficient field itself (no search)
  {
    std::vector<int> nz;
    for (int i = 0; i <= degf; ++i)
      if (!coeffs[i].is_zero()) nz.push_back(i);
    int p = tw.p();
    bool ppow = degf > 1;
    for (int m = degf; ppow && m > 1;) {
      if (m % p) ppow = false;
      else m /= p;
    }
    if (ppow && nz.size() == 2 && nz[0] == 0 && nz[1] == degf) {
      FieldElem s = tw.neg(tw.mul(tw.embed(coeffs[0], d0),
                                  tw.inv(tw.embed(coeffs[degf], d0))));
      // inverse of p^e modulo p^{d0} - 1 is p^{e (d0 - 1)} (Frobenius cycles)
      int e = 0;
      for (int m = degf; m > 1; m /= p) ++e;
      FieldElem x = tw.frobenius(s, (std::int64_t)e * (d0 - 1));
      out.emplace_back(x, degf);
      return out;
    }
  }

  // search the subfields between the coefficient field and F_{p^D} in
  // increasing order, stopping once the multiplicities account for deg f
  int found = 0;
  for (int dd = d0; dd <= D && found < degf; ++dd) {
    if (D % dd || dd % d0) continue;
    auto cf = coeffs;
    for (auto& c : cf) c = tw.embed(c, dd);
    for (auto& x : tw.all_elements(dd)) {
      if (found >= degf) break;
      if (!poly_eval_ff(tw, cf, x).is_zero()) continue;
      bool dup = false;
      for (auto& [r, m] : out) {
        int l = std::lcm(r.deg, dd);
        if (tw.embed(r, l) == tw.embed(x, l)) { dup = true; break; }
      }
      if (dup) continue;
      int mult = root_multiplicity(tw, cf, x, dd);
      out.emplace_back(x, mult);
      found += mult;
    }
  }
  std::sort(out.begin(), out.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace lt3
