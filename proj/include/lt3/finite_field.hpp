#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lt3 {

class FieldTower;

// Element of F_{p^deg} inside a FieldTower, stored as a polynomial
// (little-endian coefficients mod p) modulo the tower's degree-deg modulus.
struct FieldElem {
  const FieldTower* tw = nullptr;
  int deg = 0;
  std::vector<int> c;  // size deg, entries in [0,p)

  bool is_zero() const {
    for (int x : c) if (x) return false;
    return true;
  }
  // canonical integer encoding; total order = (deg, encode)
  std::uint64_t encode() const;
  bool operator==(const FieldElem& o) const;
  bool operator!=(const FieldElem& o) const { return !(*this == o); }
  bool operator<(const FieldElem& o) const;
  std::string str() const;
};

// A compatible system of finite fields F_{p^d}, 1 <= d <= max_degree, with
// deterministic moduli (least monic irreducible by coefficient encoding) and
// deterministic embeddings F_{p^a} -> F_{p^b} for a | b (generator goes to the
// least root of its minimal polynomial).
class FieldTower {
 public:
  FieldTower(int p, int max_degree);

  int p() const { return p_; }
  int max_degree() const { return maxdeg_; }
  const std::vector<int>& modulus(int d) const;

  FieldElem zero(int d = 1) const;
  FieldElem one(int d = 1) const;
  FieldElem from_int(std::int64_t n, int d = 1) const;  // image of n mod p
  FieldElem gen(int d) const;                           // class of x
  FieldElem from_coeffs(const std::vector<int>& c) const;
  FieldElem decode(std::uint64_t code, int d) const;

  FieldElem add(const FieldElem& a, const FieldElem& b) const;
  FieldElem sub(const FieldElem& a, const FieldElem& b) const;
  FieldElem neg(const FieldElem& a) const;
  FieldElem mul(const FieldElem& a, const FieldElem& b) const;
  FieldElem inv(const FieldElem& a) const;
  FieldElem div(const FieldElem& a, const FieldElem& b) const;
  FieldElem pow(const FieldElem& a, std::int64_t e) const;

  // x^(p^i); negative i uses the inverse automorphism (i is reduced mod deg).
  FieldElem frobenius(const FieldElem& a, std::int64_t i) const;

  // embed an element of F_{p^a} into F_{p^b}; requires a | b
  FieldElem embed(const FieldElem& a, int b) const;
  // put two elements in their smallest common field
  void unify(FieldElem& a, FieldElem& b) const;
  // if a lies in the image of F_{p^d}, return its preimage
  std::optional<FieldElem> descend(const FieldElem& a, int d) const;

  // trace / norm from a's field down to F_{p^s}; requires s | deg(a)
  FieldElem trace(const FieldElem& a, int s) const;
  FieldElem norm(const FieldElem& a, int s) const;

  // all n-th roots of unity (requires gcd(n,p)=1 and n | p^k-1 for some
  // k <= max_degree); returned in the smallest field containing them,
  // as consecutive powers of a deterministic primitive n-th root.
  std::vector<FieldElem> roots_of_unity(std::int64_t n) const;
  FieldElem primitive_root_of_unity(std::int64_t n) const;

  // all elements of F_{p^d} in encode order
  std::vector<FieldElem> all_elements(int d) const;

  // multiplicative generator of F_{p^d}^x (least by encoding)
  FieldElem multiplicative_generator(int d) const;

 private:
  int p_;
  int maxdeg_;
  std::vector<std::vector<int>> moduli_;  // index d
  // gen_image_[{a,b}] = image of gen(a) in F_{p^b}
  mutable std::map<std::pair<int, int>, FieldElem> gen_image_;
  mutable std::map<int, FieldElem> mult_gen_;

  std::vector<int> poly_mul_mod(const std::vector<int>& a,
                                const std::vector<int>& b, int d) const;
  bool irreducible(const std::vector<int>& f) const;
};

// Roots (with multiplicity) of a polynomial with FieldElem coefficients
// (little-endian, coeffs[i] multiplies X^i), found by exhaustive search over
// the smallest field containing the coefficients, optionally extended to
// search_degree. Returned sorted by element order.
std::vector<std::pair<FieldElem, int>> poly_roots_ff(
    const FieldTower& tw, std::vector<FieldElem> coeffs,
    int search_degree = 0);

FieldElem poly_eval_ff(const FieldTower& tw,
                       const std::vector<FieldElem>& coeffs,
                       const FieldElem& x);

}  // namespace lt3
