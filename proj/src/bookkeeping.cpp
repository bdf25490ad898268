#include "lt3/bookkeeping.hpp"

#include <stdexcept>

namespace lt3 {

std::vector<DiscreteSeriesRow> dim_rows(long long q) {
  // Steinberg twists enter the cohomology sum once; cuspidals enter with
  // multiplicity 2 dim LJ. Fixed vectors: 4 - c(pi).
  return {
      {"st-unramified", 2, 1, 1, 3},
      {"st-tame", 2 * (q - 2), 2, 1, 2},
      {"cuspidal-level0", q * (q - 1) / 2, 2, 2 * 2, 2},
      {"cuspidal-level1", 2 * (q - 1) * (q - 1), 3, 2 * (q + 1), 1},
  };
}

long long dimH_total(long long q) {
  long long s = 0;
  for (auto& r : dim_rows(q)) s += r.count * r.multiplicity * r.fixed_dim;
  if (s != 4 * q * q * q - 4 * q + 2)
    throw std::logic_error("dimH_total: row sum disagrees with closed form");
  return s / 2;  // = 2q^3 - 2q + 1
}

long long genus_sum(long long q) {
  // odd: two curves of genus q(q-1)/2 and 2(q^2-1) of genus (q-1)/2;
  // even: the same two plus (q^2-1)(q-1) curves of genus 1
  long long odd = 2 * (q * (q - 1) / 2) * 1 + (q * q - 1) * (q - 1);
  long long even = q * (q - 1) + (q * q - 1) * (q - 1);
  long long closed = q * q * q - 2 * q + 1;
  if (odd != closed || even != closed)
    throw std::logic_error("genus_sum: tallies disagree with closed form");
  return closed;
}

bool euler_consistency(long long q) {
  return dimH_total(q) == 2 * genus_sum(q) + 2 * q - 1;
}

DualGraph dual_graph(long long q) {
  DualGraph g;
  g.vertices = 2 + 2 * q;  // P_0, P_inf and P_a^+-
  g.edges = 4 * q;
  g.components = 1;
  return g;
}

DecompositionTally decomposition_tally(long long q) {
  DecompositionTally t;
  t.y_chart_characters = q * q - q;
  t.odd_total = (q - 1) * (q - 1) * 2 * (q + 1);
  t.odd_curves_2g = 2 * (q * q - 1) * (q - 1);  // 2 per curve of genus (q-1)/2
  t.even_total = (q - 1) * (q - 1) * 2 * (q + 1);
  t.even_curves_2g = (q * q - 1) * (q - 1) * 2;  // genus-1 curves
  t.ok = t.y_chart_characters == q * (q - 1) &&
         t.odd_total == t.odd_curves_2g && t.even_total == t.even_curves_2g;
  return t;
}

}  // namespace lt3
