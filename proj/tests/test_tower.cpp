// Blowup towers: construction, multiplicities, discrepancies, divisor
// bookkeeping, local contributions, and the per-prime bounds. Frozen oracle
// values were derived by hand:
//  - chain, center 1, a = 10, b = 27, p = 3: node contributions are
//    E(1): min(2,3) = 2, E(2): min(2, 3-2) = 1, E(3): min(2, 3-4) -> 0,
//    so the tower sum is 3 log 3, equal to the local height of b.
//  - two-fork tower of depth 3, a = 3^4 + 1, b = 3^6: contributions
//    4, 2, 2 at p = 3, exceeding the local height 6 log 3 by 2 log 3.

#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "fareytower/tower.hpp"

using namespace fareytower;

namespace {
Farey F(int p, int q) { return Farey(Int(p), Int(q)); }

void enumerate_towers(const Tower& t, int max_blowups,
                      const std::function<void(const Tower&)>& visit) {
  visit(t);
  if (t.n_blowups() >= max_blowups) return;
  for (const FareyInterval& I : std::vector<FareyInterval>(t.crossings())) {
    Tower u = t;
    u.blow_up(I);
    enumerate_towers(u, max_blowups, visit);
  }
}
}  // namespace

TEST_CASE("tower construction") {
  Tower t{Rat(1)};
  CHECK(t.n_blowups() == 1);
  CHECK(t.node(0).fraction == F(0, 1));
  CHECK(t.node(1).fraction == F(1, 1));
  CHECK(t.node(1).creating == FareyInterval::root());
  CHECK(t.crossings() == std::vector<FareyInterval>{FareyInterval::unit()});
  CHECK_THROWS_AS(Tower{Rat(0)}, input_error);

  Tower c = chain_tower(4);
  CHECK(c.n_blowups() == 4);
  for (int i = 1; i <= 4; ++i) {
    CHECK(c.node(i).fraction == F(1, i));
    CHECK(c.node(i).mult_pullback == i);
    CHECK(c.node(i).discrepancy == i);
  }
  CHECK(c.node(3).creating == FareyInterval(F(0, 1), F(1, 2)));
  CHECK(c.is_chain());

  Tower t2 = theorem2_tower(4);
  CHECK(t2.n_blowups() == 4);
  CHECK(t2.node(4).fraction == F(2, 5));
  CHECK(t2.node(4).creating == FareyInterval(F(1, 3), F(1, 2)));
  CHECK(t2.node(4).mult_pullback == 5);
  CHECK(t2.node(4).discrepancy == 6);
  CHECK_FALSE(t2.is_chain());
  CHECK_THROWS_AS(theorem2_tower(2), input_error);

  Tower u{Rat(1)};
  CHECK_THROWS_AS(u.blow_up(FareyInterval(F(0, 1), F(1, 2))), input_error);
  u.blow_up(FareyInterval::unit());
  CHECK(u.crossings() ==
        std::vector<FareyInterval>{FareyInterval(F(0, 1), F(1, 2)),
                                   FareyInterval(F(1, 2), F(1, 1))});
}

TEST_CASE("multiplicity and discrepancy follow the fraction") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    Tower t{Rat(2)};
    int steps = 1 + static_cast<int>(rng() % 6);
    for (int s = 0; s < steps; ++s) {
      const auto& cs = t.crossings();
      t.blow_up(cs[rng() % cs.size()]);
    }
    for (int i = 1; i <= t.n_blowups(); ++i) {
      const DivisorNode& node = t.node(i);
      CHECK(node.mult_pullback == node.fraction.q);
      CHECK(node.discrepancy == node.fraction.p + node.fraction.q - 1);
      if (i >= 2) CHECK(mediant(*node.creating) == node.fraction);
    }
  }
}

TEST_CASE("relevant paths and subtower depth") {
  Tower c = chain_tower(5);
  CHECK(c.relevant_path(2).empty());
  CHECK(c.relevant_path(3) == SBPath{Fork::Left});
  CHECK(c.relevant_path(5) == SBPath(3, Fork::Left));
  Tower t2 = theorem2_tower(4);
  CHECK(t2.relevant_path(4) == SBPath{Fork::Left, Fork::Right});
  CHECK(path_str(t2.relevant_path(4)) == "LR");
  CHECK_THROWS_AS(c.relevant_path(1), input_error);
  CHECK_THROWS_AS(c.relevant_path(6), input_error);

  CHECK(t2.max_subtower_level(Rat(2, 5)) == 3);
  CHECK(chain_tower(4).max_subtower_level(Rat(1, 4)) == 3);
  CHECK(chain_tower(4).max_subtower_level(Rat(1)) == 1);
  CHECK(Tower{Rat(1)}.max_subtower_level(Rat(1, 2)) == 0);
  CHECK_THROWS_AS(c.max_subtower_level(Rat(3, 2)), input_error);
}

TEST_CASE("divisor bookkeeping") {
  // Depth 2 chain: pullback of the triangle is the strict transform plus
  // E(1) + 2 E(2).
  BookkeepingReport r2 = check_divisor_bookkeeping(chain_tower(2));
  CHECK(r2.pullback_triangle == std::vector<Int>{1, 1, 1, 1, 2});
  CHECK(r2.ok());

  BookkeepingReport r3 = check_divisor_bookkeeping(chain_tower(3));
  CHECK(r3.pullback_triangle == std::vector<Int>{1, 1, 1, 1, 2, 3});
  CHECK(r3.discrepancy_sums == std::vector<Int>{0, 0, 0, 1, 2, 3});
  CHECK(r3.intersect_divisor == std::vector<Int>{1, 1, 1, 1, 1, 1});
  CHECK(r3.ok());

  BookkeepingReport rt = check_divisor_bookkeeping(theorem2_tower(3));
  CHECK(rt.pullback_triangle == std::vector<Int>{1, 1, 1, 1, 2, 3});
  CHECK(rt.discrepancy_sums == std::vector<Int>{0, 0, 0, 1, 2, 4});
  CHECK(rt.ok());

  // Every tower with at most 5 blowups passes, and the shape count matches
  // the factorial census 1 + 1 + 2 + 6 + 24.
  int count = 0;
  enumerate_towers(Tower{Rat(1)}, 5, [&](const Tower& t) {
    ++count;
    CHECK(check_divisor_bookkeeping(t).ok());
  });
  CHECK(count == 34);
}

TEST_CASE("local contributions at finite places") {
  Tower c = chain_tower(3);
  Place p3 = Place::finite(Int(3));
  CHECK(c.local_contrib(1, Rat(10), Rat(27), p3).value() == Rat(9));
  CHECK(c.local_contrib(2, Rat(10), Rat(27), p3).value() == Rat(3));
  CHECK(c.local_contrib(3, Rat(10), Rat(27), p3).is_zero());
  CHECK(c.local_contrib(1, Rat(10), Rat(27), Place::finite(Int(2))).is_zero());
  CHECK_THROWS_AS(c.local_contrib(0, Rat(10), Rat(27), p3), input_error);
  CHECK_THROWS_AS(c.local_contrib(1, Rat(1), Rat(27), p3), input_error);
  CHECK_THROWS_AS(c.local_contrib(1, Rat(10), Rat(0), p3), input_error);
}

TEST_CASE("local contributions at the archimedean place") {
  Tower c = chain_tower(2);
  Place inf = Place::infinite_place();
  // a = 3/2, b = 1/8: t = log 2, u = log 8.
  CHECK(c.local_contrib(1, Rat(3, 2), Rat(1, 8), inf).value() == Rat(2));
  CHECK(c.local_contrib(2, Rat(3, 2), Rat(1, 8), inf).value() == Rat(2));
  // Far from the center nothing accumulates.
  CHECK(c.local_contrib(1, Rat(7), Rat(5), inf).is_zero());
}

TEST_CASE("deep contributions vanish without joint divisibility") {
  // For E(j), j >= 2, the contribution is zero as soon as v(a - center) <= 0
  // or v(b) <= 0.
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> d(1, 400);
  for (int trial = 0; trial < 60; ++trial) {
    Tower t{Rat(1)};
    int steps = static_cast<int>(rng() % 4);
    for (int s = 0; s < steps; ++s) {
      const auto& cs = t.crossings();
      t.blow_up(cs[rng() % cs.size()]);
    }
    for (int p : {2, 3, 5}) {
      Place v = Place::finite(Int(p));
      Rat a = Rat(d(rng), d(rng)) + 1, b(d(rng), d(rng));
      if (a == 1 || sgn(b) == 0) continue;
      Int ta = ordp(a - 1, Int(p)), ub = ordp(b, Int(p));
      if (ta > 0 && ub > 0) continue;
      for (int j = 2; j <= t.n_blowups(); ++j)
        CHECK(t.local_contrib(j, a, b, v).is_zero());
    }
  }
}

TEST_CASE("per-prime bounds") {
  // Chain saturation: long chains soak up all of v_p(b).
  PerPrimeBound r = per_prime_bound(chain_tower(3), Rat(10), Rat(27), Int(3));
  CHECK(r.n_p == 2);
  CHECK(r.chain_form);
  CHECK(r.lhs.value() == Rat(27));
  CHECK(r.bound.value() == Rat(27));
  CHECK(r.ok);

  // Two-fork shape: a = 3^4 + 1, b = 3^6 overshoots the local height by
  // exactly 2 log 3 but stays under the general bound.
  Tower t2 = theorem2_tower(3);
  PerPrimeBound g = per_prime_bound(t2, Rat(82), Rat(729), Int(3));
  CHECK(g.n_p == 4);
  CHECK_FALSE(g.chain_form);
  CHECK(g.lhs.value() == ipow(Int(3), 8));
  CHECK(g.bound.value() == ipow(Int(3), 9));
  CHECK(g.ok);

  CHECK_THROWS_AS(per_prime_bound(t2, Rat(10), Rat(27), Int(4)), input_error);
  CHECK_THROWS_AS(per_prime_bound(t2, Rat(10), Rat(27), Int(5)), input_error);

  // Random towers never violate the general bound.
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    Tower t{Rat(1)};
    int steps = static_cast<int>(rng() % 5);
    for (int s = 0; s < steps; ++s) {
      const auto& cs = t.crossings();
      t.blow_up(cs[rng() % cs.size()]);
    }
    int p = std::vector<int>{2, 3, 5}[rng() % 3];
    int np = 1 + static_cast<int>(rng() % 4);
    Rat a = Rat(ipow(Int(p), static_cast<std::uint64_t>(np))) *
                Rat(1 + static_cast<int>(rng() % 10) * 2 + (p == 2 ? 1 : 0)) +
            1;
    Rat b(static_cast<std::int64_t>(rng() % 10000) + 1);
    PerPrimeBound pb = per_prime_bound(t, a, b, Int(p));
    CHECK(pb.ok);
    if (t.is_chain()) CHECK(pb.lhs <= pb.bound);
  }
}

TEST_CASE("tower sets validate their centers") {
  TowerSet ts;
  ts.add(chain_tower(2, Rat(1)));
  ts.add(chain_tower(2, Rat(3)));
  CHECK_THROWS_AS(ts.add(chain_tower(3, Rat(3))), input_error);
  CHECK(ts.is_valid_point(Rat(5), Rat(2)));
  CHECK_FALSE(ts.is_valid_point(Rat(3), Rat(2)));
  CHECK_FALSE(ts.is_valid_point(Rat(5), Rat(0)));
  CHECK_FALSE(ts.is_valid_point(Rat(0), Rat(2)));

  CHECK(ts.pairwise_differences_S_units(PlaceSet::parse("2")));
  CHECK_FALSE(ts.pairwise_differences_S_units(PlaceSet()));
}

TEST_CASE("main inequality sides") {
  TowerSet ts;
  ts.add(chain_tower(2, Rat(1)));
  PlaceSet S;  // just the archimedean place
  CHECK(lhs_vojta(ts, Rat(10), Rat(27), S).value() == Rat(27));
  CHECK_THROWS_AS(lhs_vojta(ts, Rat(1), Rat(27), S), input_error);

  ScaledLog rhs = rhs_vojta(Rat(10), Rat(27), S, Rat(1, 2));
  CHECK(rhs.scale() == 2);
  CHECK(rhs.base().value() == Rat(27) * Rat(270) * Rat(270));
  double expect = 0.5 * std::log(27.0) + std::log(270.0);
  CHECK(std::abs(rhs.to_float().value - expect) < 1e-9);
  CHECK_THROWS_AS(rhs_vojta(Rat(10), Rat(27), S, Rat(0)), input_error);
  CHECK_THROWS_AS(rhs_vojta(Rat(0), Rat(27), S, Rat(1, 2)), input_error);
}

TEST_CASE("inequality left side matches a straight place-by-place sum") {
  // Independent evaluation: loop over every prime below a bound plus the
  // archimedean place, with no gcd shortcut, and compare.
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> d(-60, 60);
  PlaceSet S = PlaceSet::parse("2,3");
  TowerSet ts;
  ts.add(chain_tower(3, Rat(1)));
  ts.add(theorem2_tower(3, Rat(-2)));

  for (int trial = 0; trial < 40; ++trial) {
    Rat a(d(rng), 1 + (rng() % 8)), b(d(rng), 1 + (rng() % 8));
    if (!ts.is_valid_point(a, b)) continue;

    LogRat brute;
    for (const Tower& t : ts.towers()) {
      Rat diff = a - t.center();
      for (int p = 2; p < 200; ++p) {
        if (!is_prime(Int(p))) continue;
        Place v = Place::finite_unchecked(Int(p));
        brute += gcd_plus({ExtRat::of(diff), ExtRat::of(b)}, v);
        if (!S.contains_prime(Int(p)))
          for (int j = 2; j <= t.n_blowups(); ++j) brute += t.local_contrib(j, a, b, v);
      }
      brute += gcd_plus({ExtRat::of(diff), ExtRat::of(b)}, Place::infinite_place());
    }
    CHECK(lhs_vojta(ts, a, b, S) == brute);
  }
}
