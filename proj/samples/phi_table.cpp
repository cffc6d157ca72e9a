// Prints the tent profile of a target fraction: the interval chain walked by
// the Farey tree, then a table of exact profile values across the innermost
// interval. Pass a fraction like 3/7 to override the default 2/5.
#include <cstdio>
#include <string>

#include "fareytower/rat.hpp"
#include "fareytower/stern_brocot.hpp"

namespace ft = fareytower;

int main(int argc, char** argv) {
  ft::Rat alpha = argc > 1 ? ft::parse_rat(argv[1]) : ft::Rat(2, 5);

  std::printf("alpha = %s, first tree level %d\n", ft::rat_str(alpha).c_str(),
              ft::first_level(alpha));
  std::printf("interval chain:\n");
  for (const ft::FareyInterval& I : ft::interval_chain(alpha))
    std::printf("  %s  mediant %s\n", I.str().c_str(), ft::mediant(I).str().c_str());

  const ft::FareyInterval inner = ft::interval_chain(alpha).back();
  ft::Rat lo = inner.lo.value(), hi = inner.hi.value();
  std::printf("\nprofile over %s:\n%-12s %-12s %s\n", inner.str().c_str(), "x", "phi",
              "phi_float");
  for (int j = 0; j <= 16; ++j) {
    ft::Rat x = lo + (hi - lo) * ft::Rat(j, 16);
    ft::Rat y = ft::phi_closed(alpha, x);
    std::printf("%-12s %-12s %.6f\n", ft::rat_str(x).c_str(), ft::rat_str(y).c_str(),
                static_cast<double>(ft::num(y).convert_to<long>()) /
                    static_cast<double>(ft::den(y).convert_to<long>()));
  }
  std::printf("\npeak: phi(%s) = %s\n", ft::rat_str(alpha).c_str(),
              ft::rat_str(ft::phi_direct(alpha, alpha)).c_str());
  return 0;
}
