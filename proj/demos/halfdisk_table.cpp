// Distance from the half disk to ranges of diagonal matrices whose
// eigenvalues sit on its boundary, with the deflation count per size.
//
//   halfdisk_table [m ...]

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "numrange/numrange.hpp"

using namespace numrange;

int main(int argc, char** argv) {
  std::vector<std::size_t> ms;
  for (int k = 1; k < argc; ++k) ms.push_back(std::strtoul(argv[k], nullptr, 10));
  if (ms.empty()) ms = {3, 5, 9, 17, 33, 65};

  std::printf("%5s %14s %14s %8s %10s\n", "m", "hausdorff", "1-cos(pi/2(m-1))", "corners", "deflations");
  for (auto m : ms) {
    if (m < 3) {
      std::fprintf(stderr, "m must be at least 3\n");
      return 2;
    }
    const auto r = anderson_run(m);
    const double sag = 1.0 - std::cos(kPi / (2.0 * static_cast<double>(m - 1)));
    std::printf("%5zu %14.9f %14.9f %8zu %10zu%s\n", m, r.hausdorff_to_halfdisk, sag, r.corner_count,
                r.deflation_steps.size(), r.terminated ? "" : "  (did not terminate)");
  }
  return 0;
}
