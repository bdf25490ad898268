#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "lt3/finite_field.hpp"
#include "lt3/rational.hpp"

namespace lt3 {

// Thrown whenever a question cannot be answered at the precision carried by
// the operands. The precision contract is hard: we error, never guess.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finitely supported series sum c_e * w^e over exact rational exponents e,
// where w is the base uniformizer. Terms with exponent >= prec are unknown;
// prec itself is exact. Coefficients live in a shared FieldTower and may sit
// in different member fields; arithmetic unifies on demand.
class Hahn {
 public:
  Hahn() = default;
  explicit Hahn(const FieldTower* tw, Rat prec = Rat(1000000))
      : tw_(tw), prec_(prec) {}

  static Hahn zero(const FieldTower* tw, Rat prec = Rat(1000000)) {
    return Hahn(tw, prec);
  }
  // c * w^e
  static Hahn monomial(const FieldTower* tw, const FieldElem& c, Rat e,
                       Rat prec = Rat(1000000));
  static Hahn constant(const FieldTower* tw, const FieldElem& c,
                       Rat prec = Rat(1000000)) {
    return monomial(tw, c, Rat(0), prec);
  }
  static Hahn pi_pow(const FieldTower* tw, Rat e, Rat prec = Rat(1000000)) {
    return monomial(tw, tw->one(1), e, prec);
  }

  const FieldTower* tower() const { return tw_; }
  const std::map<Rat, FieldElem>& terms() const { return terms_; }
  Rat prec() const { return prec_; }
  bool known_zero() const { return terms_.empty(); }

  // valuation: exponent of leading term; nullopt when no term is known
  // (i.e. the series is 0 up to precision).
  std::optional<Rat> val() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
  }
  // valuation that must exist; throws PrecisionError otherwise
  Rat val_exact() const {
    if (terms_.empty())
      throw PrecisionError("val: series is zero to precision " + prec_.str());
    return terms_.begin()->first;
  }

  void set_term(Rat e, const FieldElem& c);
  FieldElem coeff_at(Rat e) const;  // zero elem if absent
  void lower_prec(Rat p);           // truncate knowledge to exponents < p

  Hahn operator+(const Hahn& o) const;
  Hahn operator-(const Hahn& o) const;
  Hahn operator-() const;
  Hahn operator*(const Hahn& o) const;
  Hahn scale(const FieldElem& c) const;
  Hahn shift(Rat e) const;  // multiply by w^e
  // multiplicative inverse (leading term must exist)
  Hahn inverse() const;
  Hahn operator/(const Hahn& o) const { return *this * o.inverse(); }
  Hahn pow_int(long long n) const;
  // x -> x^(p^k), k may be negative (inverse Frobenius; exponents divide by
  // p^|k| exactly in characteristic p)
  Hahn frob_pow(long long k) const;

  std::string str() const;

 private:
  const FieldTower* tw_ = nullptr;
  std::map<Rat, FieldElem> terms_;
  Rat prec_ = Rat(1000000);
};

// v(a - b) > alpha (strict) resp. >= alpha. Throws PrecisionError when the
// carried precision cannot certify the answer.
bool congruent(const Hahn& a, const Hahn& b, Rat alpha, bool strict = true);

// leading residue: coefficient at exponent 0 of a series with v >= 0;
// requires positive precision. v > 0 gives 0.
FieldElem residue(const Hahn& a);

// deterministic n-th root: p-part via inverse Frobenius, coprime part via
// least leading-coefficient root + Newton. `n` >= 1.
Hahn nth_root(const Hahn& a, long long n);

// Action of a field symmetry on grid series: the exponent character chi
// (chi(w^{1/d}) = zeta_d * w^{1/d}) together with a power r of the
// arithmetic Frobenius applied to coefficients (negative = inverse).
struct GridChar {
  const FieldTower* tw = nullptr;
  std::map<long long, FieldElem> gen_val;  // d -> image root of unity for 1/d
  long long frob = 0;

  // chi evaluated at exponent e = m/d; requires some multiple of d in domain
  FieldElem chi(Rat e) const;
  bool covers(long long d) const;
  void validate() const;  // coherence: chi(1/d') compatible along divisibility
};

// termwise sigma(a); every exponent of a must lie in the character's domain.
Hahn grid_galois(const Hahn& a, const GridChar& sig);

}  // namespace lt3
