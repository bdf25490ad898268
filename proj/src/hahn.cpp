#include "lt3/hahn.hpp"

#include <algorithm>

namespace lt3 {

namespace {
const Rat kHuge = Rat(1000000);

Rat val_or_prec(const Hahn& x) {
  auto v = x.val();
  return v ? *v : x.prec();
}
}  // namespace

Hahn Hahn::monomial(const FieldTower* tw, const FieldElem& c, Rat e,
                    Rat prec) {
  Hahn h(tw, prec);
  h.set_term(e, c);
  return h;
}

void Hahn::set_term(Rat e, const FieldElem& c) {
  if (e >= prec_) return;
  if (c.is_zero())
    terms_.erase(e);
  else
    terms_[e] = c;
}

FieldElem Hahn::coeff_at(Rat e) const {
  auto it = terms_.find(e);
  if (it != terms_.end()) return it->second;
  return tw_->zero(1);
}

void Hahn::lower_prec(Rat p) {
  if (p >= prec_) return;
  prec_ = p;
  auto it = terms_.lower_bound(p);
  terms_.erase(it, terms_.end());
}

Hahn Hahn::operator+(const Hahn& o) const {
  Hahn r(tw_, rat_min(prec_, o.prec_));
  for (auto& [e, c] : terms_) r.set_term(e, c);
  for (auto& [e, c] : o.terms_) {
    auto cur = r.coeff_at(e);
    r.set_term(e, tw_->add(cur, c));
  }
  return r;
}

Hahn Hahn::operator-() const {
  Hahn r(tw_, prec_);
  for (auto& [e, c] : terms_) r.set_term(e, tw_->neg(c));
  return r;
}

Hahn Hahn::operator-(const Hahn& o) const { return *this + (-o); }

Hahn Hahn::operator*(const Hahn& o) const {
  Rat va = val_or_prec(*this), vb = val_or_prec(o);
  Rat p = rat_min(prec_ + vb, o.prec_ + va);
  p = rat_min(p, kHuge);
  Hahn r(tw_, p);
  for (auto& [e1, c1] : terms_) {
    if (e1 + vb >= p) break;
    for (auto& [e2, c2] : o.terms_) {
      Rat e = e1 + e2;
      if (e >= p) break;
      r.set_term(e, tw_->add(r.coeff_at(e), tw_->mul(c1, c2)));
    }
  }
  return r;
}

Hahn Hahn::scale(const FieldElem& c) const {
  Hahn r(tw_, prec_);
  if (c.is_zero()) return r;
  for (auto& [e, k] : terms_) r.set_term(e, tw_->mul(k, c));
  return r;
}

Hahn Hahn::shift(Rat e) const {
  Hahn r(tw_, rat_min(prec_ + e, kHuge));
  for (auto& [e1, c] : terms_) r.set_term(e1 + e, c);
  return r;
}

Hahn Hahn::inverse() const {
  if (terms_.empty())
    throw PrecisionError("inverse: series is zero to precision " +
                         prec_.str());
  Rat e0 = terms_.begin()->first;
  FieldElem c0 = terms_.begin()->second;
  Rat rel = prec_ - e0;  // relative precision available
  Hahn x = monomial(tw_, tw_->inv(c0), -e0, rel - e0);
  Hahn one = constant(tw_, tw_->one(1));
  for (int it = 0; it < 200; ++it) {
    Hahn err = one - *this * x;  // valuation doubles per step
    if (err.known_zero()) break;
    if (err.val_exact() >= rel) break;
    x = x + (x * err);
  }
  x.lower_prec(rel - e0);
  return x;
}

Hahn Hahn::pow_int(long long n) const {
  if (n < 0) return inverse().pow_int(-n);
  Hahn r = constant(tw_, tw_->one(1));
  Hahn b = *this;
  while (n) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

Hahn Hahn::frob_pow(long long k) const {
  long long pk = 1;
  int p = tw_->p();
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) pk *= p;
  Hahn r(tw_, prec_);
  if (k >= 0) {
    r.prec_ = rat_min(prec_ * Rat(pk), kHuge);
    for (auto& [e, c] : terms_)
      r.set_term(e * Rat(pk), tw_->frobenius(c, k));
  } else {
    r.prec_ = prec_ / Rat(pk);
    for (auto& [e, c] : terms_)
      r.set_term(e / Rat(pk), tw_->frobenius(c, k));
  }
  return r;
}

std::string Hahn::str() const {
  std::string s;
  for (auto& [e, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += c.str() + "*w^(" + e.str() + ")";
  }
  if (s.empty()) s = "0";
  s += " + O(w^(" + prec_.str() + "))";
  return s;
}

bool congruent(const Hahn& a, const Hahn& b, Rat alpha, bool strict) {
  Hahn d = a - b;
  for (auto& [e, c] : d.terms()) {
    (void)c;
    if (strict ? e <= alpha : e < alpha) return false;
    break;  // only the leading term matters
  }
  if (strict ? d.prec() <= alpha : d.prec() < alpha)
    throw PrecisionError("congruent: need precision " + alpha.str() +
                         ", have " + d.prec().str());
  return true;
}

FieldElem residue(const Hahn& a) {
  auto v = a.val();
  if (v && *v < Rat(0))
    throw std::domain_error("residue: negative valuation " + v->str());
  if (a.prec() <= Rat(0))
    throw PrecisionError("residue: nonpositive precision " + a.prec().str());
  return a.coeff_at(Rat(0));
}

Hahn nth_root(const Hahn& a, long long n) {
  if (n <= 0) throw std::domain_error("nth_root: n must be >= 1");
  const FieldTower* tw = a.tower();
  int p = tw->p();
  long long k = 0, m = n;
  while (m % p == 0) { m /= p; ++k; }
  Hahn base = a.frob_pow(-k);  // exact p-power part
  if (m == 1) return base;
  Rat e0 = base.val_exact();
  FieldElem c0 = base.terms().begin()->second;
  // least m-th root of the leading coefficient, searching up the tower
  std::optional<FieldElem> r0;
  for (int d = c0.deg; d <= tw->max_degree(); d += c0.deg) {
    std::vector<FieldElem> f(m + 1, tw->zero(1));
    f[0] = tw->neg(c0);
    f[(size_t)m] = tw->one(1);
    auto roots = poly_roots_ff(*tw, f, d);
    if (!roots.empty()) { r0 = roots.front().first; break; }
  }
  if (!r0)
    throw std::domain_error("nth_root: leading coefficient has no root in tower");
  Rat er = e0 / Rat(m);
  Hahn x = Hahn::monomial(tw, *r0, er);
  FieldElem minv = tw->inv(tw->from_int(m, 1));
  std::optional<Rat> prev;
  for (int it = 0; it < 200; ++it) {
    Hahn fx = x.pow_int(m) - base;
    if (fx.known_zero()) break;
    Rat v = fx.val_exact();
    if (prev && !(v > *prev)) break;  // no further progress at this precision
    prev = v;
    // x -= f(x) / (m x^{m-1})
    Hahn corr = (fx * x.pow_int(1 - (long long)m)).scale(minv);
    x = x - corr;
  }
  x.lower_prec(er + (base.prec() - e0));
  return x;
}

bool GridChar::covers(long long d) const {
  for (auto& [D, v] : gen_val) {
    (void)v;
    if (D % d == 0) return true;
  }
  return false;
}

FieldElem GridChar::chi(Rat e) const {
  long long d = e.den;
  for (auto& [D, v] : gen_val)
    if (D % d == 0) return tw->pow(v, (D / d) * e.num);
  throw std::domain_error("GridChar: exponent 1/" + std::to_string(d) +
                          " outside character domain");
}

void GridChar::validate() const {
  for (auto& [d, v] : gen_val) {
    if (tw->pow(v, d) != tw->one(v.deg))
      throw std::domain_error("GridChar: value at 1/" + std::to_string(d) +
                              " is not a d-th root of unity");
    for (auto& [d2, v2] : gen_val)
      if (d2 % d == 0 && tw->pow(v2, d2 / d) != v)
        throw std::domain_error("GridChar: incoherent values at 1/" +
                                std::to_string(d) + ", 1/" +
                                std::to_string(d2));
  }
}

Hahn grid_galois(const Hahn& a, const GridChar& sig) {
  Hahn r(a.tower(), a.prec());
  for (auto& [e, c] : a.terms()) {
    FieldElem cc = a.tower()->frobenius(c, sig.frob);
    r.set_term(e, a.tower()->mul(cc, sig.chi(e)));
  }
  return r;
}

}  // namespace lt3
