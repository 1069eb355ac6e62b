// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "acceptance.hpp"

int main() {
  using namespace acceptance;
  const Criterion criteria[] = {
      {1, "fl idempotence and partition equivalence", fl_idempotence},
      {2, "reconstruction from truncations at n <= 8", reconstruction},
      {3, "commensurability decision vs oracle, axioms, GR(l)", commensurability},
      {4, "tower coherence and lift inverse", tower_coherence},
      {5, "constructive transitivity, linear and isotropic", transitivity},
      {6, "big cell round trip and covering", big_cells},
      {7, "isotropic Gram-Schmidt, tau and perp identity", gram_schmidt},
      {8, "Picard presentation, kernel, cocycle, level maps", picard},
      {9, "projectivity trio and very ampleness", projectivity},
      {10, "CLI round trip and pinned reports", cli_reports},
  };
  bool all = true;
  for (const auto& c : criteria) all = run(c) && all;
  return all ? 0 : 1;
}
