#pragma once

#include <string>
#include <vector>

namespace lt3 {

// One family of discrete-series representations with conductor data.
struct DiscreteSeriesRow {
  std::string family;
  long long count;      // number of representations in the family
  int conductor;        // c(pi)
  long long multiplicity;  // 2 dim LJ, or 1 for the Steinberg twists
  int fixed_dim;        // 4 - c(pi)
};

// the four families; each contributes count * multiplicity * fixed_dim
std::vector<DiscreteSeriesRow> dim_rows(long long q);

// sum over the rows, halved: 2q^3 - 2q + 1
long long dimH_total(long long q);

// genus sum over the reduction components: q^3 - 2q + 1 (the odd and even
// tallies are evaluated separately and asserted equal to the closed form)
long long genus_sum(long long q);

// dimH_total(q) == 2 genus_sum(q) + 2q - 1
bool euler_consistency(long long q);

// Dual graph of the special fiber: vertices P_0, P_inf, P_a^+-, edges
// P_0 P_a^+, P_a^+ P_inf, P_inf P_a^-, P_a^- P_0 for a in F_q^x plus the
// two chains through 0; first Betti number E - V + components = 2q - 1.
struct DualGraph {
  long long vertices = 0, edges = 0, components = 1;
  long long h1() const { return edges - vertices + components; }
};

DualGraph dual_graph(long long q);

// per-chart multiplicity tallies matching twice the genus contributions
struct DecompositionTally {
  long long y_chart_characters;  // q^2 - q, = 2 g(X_DL)
  long long odd_total;           // (q-1)^2 * 2 (q+1), odd q
  long long odd_curves_2g;       // 2 (q^2-1) * 2 g, g = (q-1)/2
  long long even_total;          // (q-1)^2 * 2 (q+1), even q
  long long even_curves_2g;      // (q^2-1)(q-1) * 2 g(E)
  bool ok;
};

DecompositionTally decomposition_tally(long long q);

}  // namespace lt3
