// Walks one blowup tower end to end: the divisor table, the bookkeeping
// identities, and a worked height computation at a = 82, b = 729, where the
// tower contribution exceeds the line height by exactly log 9.
#include <cstdio>
#include <string>

#include "fareytower/construct.hpp"
#include "fareytower/heights.hpp"
#include "fareytower/scan.hpp"
#include "fareytower/tower.hpp"

namespace ft = fareytower;

int main() {
  ft::Tower t = ft::parse_tower_shape("t2:4");
  std::printf("tower t2:4, center %s, %d blowups\n", ft::rat_str(t.center()).c_str(),
              t.n_blowups());
  std::printf("%-4s %-8s %-14s %-6s %s\n", "E", "frac", "creating", "mult", "discrepancy");
  for (const ft::DivisorNode& n : t.nodes())
    std::printf("%-4d %-8s %-14s %-6s %s\n", n.index, n.fraction.str().c_str(),
                n.creating ? n.creating->str().c_str() : "-", n.mult_pullback.str().c_str(),
                n.discrepancy.str().c_str());

  ft::BookkeepingReport r = ft::check_divisor_bookkeeping(t);
  std::printf("\nbookkeeping: reduced %s, multiplicities %s, discrepancies %s\n",
              r.reduced_ok ? "ok" : "BAD", r.mult_ok ? "ok" : "BAD",
              r.disc_ok ? "ok" : "BAD");

  // a - 1 = 81 = 3^4: the even-multiplicity case of the companion
  // construction with n = 3, where b = 3^6 and the excess is floor(4/2) log 3.
  ft::T2Construction c = ft::theorem2_construct(ft::Rat(82), 3, ft::PlaceSet());
  std::printf("\nconstruction at a = 82, n = 3: b = %s\n", c.b.str().c_str());
  for (const ft::T2PrimeRecord& pr : c.primes) {
    std::printf("  p = %s: n_p = %llu, m_p = %llu\n", pr.p.str().c_str(),
                static_cast<unsigned long long>(pr.n_p),
                static_cast<unsigned long long>(pr.m_p));
    std::printf("  tower sum   %s\n", pr.tower_sum.str().c_str());
    std::printf("  line height %s\n", pr.line_height.str().c_str());
    std::printf("  excess      %s (expected %s) %s\n", pr.excess.str().c_str(),
                pr.expected_excess.str().c_str(), pr.identity_ok ? "ok" : "BAD");
    if (pr.slope)
      std::printf("  slope n_p/m_p = %s\n", ft::rat_str(*pr.slope).c_str());
  }
  std::printf("height bound h(b) <= n h(a-1): %s\n", c.height_bound_ok ? "ok" : "BAD");
  return 0;
}
