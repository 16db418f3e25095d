// Checks the Stolarsky identity on random point sets in a few spaces.
#include <cstdio>

#include "geodisc/discrepancy.hpp"

int main(int argc, char** argv) {
  using namespace geodisc;
  const size_t n = argc > 1 ? static_cast<size_t>(std::stoul(argv[1])) : 60;
  std::printf("%-6s %5s %14s %14s %12s %10s %6s\n", "space", "N", "gamma*lambda", "tau[D_N]", "residual", "budget", "L");
  for (const char* name : {"S2", "RP2", "CP2", "HP2", "OP2"}) {
    const Space s = parse_space(name);
    const PointSet set = sample_set(s, n, 1);
    const auto r = stolarsky_residual(set, 1e-4 / gamma_constant(s));
    std::printf("%-6s %5zu %14.8f %14.8f %12.3e %10.3e %6d\n", name, n, r.gamma * r.lambda, r.tau_sum, r.residual,
                r.budget, r.L);
  }
  return 0;
}
