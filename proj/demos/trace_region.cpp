// Demo: trace the stability-region boundary for a strongly damped component
// (a = -1.5, tau = 1) and print it as CSV, ready for plotting. Also reports
// the outer radius where the boundary curve meets the negative real axis.

#include <cstdio>

#include "delaycert/delaycert.hpp"

int main() {
  using namespace delaycert;

  const RegionParams rp{1.0, -1.5};
  std::fprintf(stderr, "outer radius: %s\n", format_g17(outer_radius(rp)).c_str());

  const auto b = boundary(rp, 256);
  std::printf("u,v\n");
  for (const Complex p : b.points)
    std::printf("%s,%s\n", format_g17(p.real()).c_str(), format_g17(p.imag()).c_str());
  return 0;
}
