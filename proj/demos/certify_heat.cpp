// Demo: certify the square-decay reference system (lambda_k = -k^2 with a
// constant delayed gain and geometrically decaying input weights), print the
// certification report as JSON, then spot-check the first component's cost by
// all three routes.

#include <cstdio>

#include "delaycert/delaycert.hpp"

int main() {
  using namespace delaycert;

  const auto sys = heat_preset(power_rule({0.1, 0.0}, 0.0),
                               geometric_rule({1.0, 0.0}, {0.5, 0.0}), 1.0, 40);
  const auto rep = system_check(sys, 40, 10, 0.5);
  std::fputs(to_json(rep).c_str(), stdout);

  const auto p = sys.component(1);
  std::printf("\ncomponent 1 cost cross-check:\n");
  std::printf("  closed     %s\n", format_g17(j_closed(p).value).c_str());
  std::printf("  residue    %s\n", format_g17(j_residue(p).value).c_str());
  std::printf("  quadrature %s\n", format_g17(j_quadrature(p).value).c_str());
  return 0;
}
