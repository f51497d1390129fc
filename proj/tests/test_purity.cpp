#include <doctest.h>

#include "fixtures.hpp"
#include "stepfun/canonical.hpp"
#include "stepfun/purity.hpp"

using namespace stepfun;

TEST_CASE("purity partition groups identical sections") {
  SUBCASE("flip: all classes singletons") {
    const PurityPartition p = purity_partition(fixtures::flip());
    CHECK(p.row_classes == std::vector<std::vector<int>>{{0}, {1}});
    CHECK(p.col_classes == std::vector<std::vector<int>>{{0}, {1}});
    CHECK(p.rows_discrete());
    CHECK(p.cols_discrete());
  }
  SUBCASE("constant: everything collapses") {
    const PurityPartition p = purity_partition(fixtures::constant());
    CHECK(p.row_classes == std::vector<std::vector<int>>{{0, 1}});
    CHECK(p.col_classes == std::vector<std::vector<int>>{{0, 1}});
  }
  SUBCASE("dup: first two rows merge") {
    const PurityPartition p = purity_partition(fixtures::dup());
    CHECK(p.row_classes == std::vector<std::vector<int>>{{0, 1}, {2}});
    CHECK(p.col_classes == std::vector<std::vector<int>>{{0}, {1}});
  }
}

TEST_CASE("is_pure on the fixtures") {
  CHECK(is_pure(fixtures::flip()));
  CHECK_FALSE(is_pure(fixtures::constant()));
  CHECK_FALSE(is_pure(fixtures::dup()));
  CHECK(is_pure(fixtures::tri()));
}

TEST_CASE("purify takes the exact quotient") {
  SUBCASE("constant collapses to 1x1") {
    const StepFunction q = purify(fixtures::constant());
    CHECK(q.rows() == 1);
    CHECK(q.cols() == 1);
    CHECK(q.row_space.weights == std::vector<Rational>{Rational(1)});
    CHECK(q.values == std::vector<std::vector<int>>{{0}});
  }
  SUBCASE("dup purifies to flip") {
    const StepFunction q = purify(fixtures::dup());
    CHECK(is_pure(q));
    CHECK(brute_force_equivalent(q, fixtures::flip()).verdict);
    CHECK(q.row_space.weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  }
  SUBCASE("pure functions are fixed") {
    CHECK(purify(fixtures::flip()) == fixtures::flip());
  }
  SUBCASE("idempotence on random inputs") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const StepFunction f = random_function(4, 4, 2, 8, seed);
      const StepFunction q = purify(f);
      CHECK(is_pure(q));
      CHECK(purify(q) == q);
    }
  }
}

TEST_CASE("symmetry groups of the fixtures (brute-force derived orders)") {
  SUBCASE("flip has order 2, generated by (swap, swap)") {
    const SymmetryGroup g = symmetry_group(fixtures::flip(), false);
    CHECK(g.order == 2);
    REQUIRE(g.generators.size() == 1);
    CHECK(g.generators[0].first == Permutation{1, 0});
    CHECK(g.generators[0].second == Permutation{1, 0});
  }
  SUBCASE("tri is rigid") {
    CHECK(symmetry_group(fixtures::tri(), false).order == 1);
  }
  SUBCASE("constant is fixed by all 4 pairs") {
    CHECK(symmetry_group(fixtures::constant(), false).order == 4);
  }
  SUBCASE("every group element fixes f exactly") {
    const StepFunction f = fixtures::flip();
    for (const auto& [sigma, tau] : symmetry_group(f, false).generators) {
      CHECK(apply_permutations(f, sigma, tau) == f);
    }
  }
}

TEST_CASE("pruned stabilizer search agrees with the brute-force oracle") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const StepFunction f = random_function(2 + seed % 3, 2 + (seed / 3) % 3, 2, 8, seed);
    for (const bool wp : {false, true}) {
      const SymmetryGroup brute = symmetry_group(f, wp, StabilizerSearch::kBruteForce);
      const SymmetryGroup pruned = symmetry_group(f, wp, StabilizerSearch::kPruned);
      CHECK(brute.order == pruned.order);
      CHECK(brute.generators == pruned.generators);
    }
  }
}

TEST_CASE("weight-preserving group is a subgroup of the full stabilizer") {
  const StepFunction f = fixtures::dup();
  const SymmetryGroup full = symmetry_group(f, false);
  const SymmetryGroup wp = symmetry_group(f, true);
  CHECK(wp.order <= full.order);
  for (const auto& [sigma, tau] : wp.generators) {
    CHECK(apply_permutations(f, sigma, tau) == f);
    for (size_t i = 0; i < sigma.size(); ++i) {
      CHECK(f.row_space.weights[sigma[i]] == f.row_space.weights[i]);
    }
    for (size_t j = 0; j < tau.size(); ++j) {
      CHECK(f.col_space.weights[tau[j]] == f.col_space.weights[j]);
    }
  }
}

TEST_CASE("total purity on the fixtures") {
  CHECK(is_totally_pure(fixtures::tri()));
  CHECK_FALSE(is_totally_pure(fixtures::flip()));  // pure but symmetric
  CHECK_FALSE(is_totally_pure(fixtures::constant()));
  // totally pure implies pure
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const StepFunction f = random_function(3, 3, 2, 8, seed);
    if (is_totally_pure(f)) CHECK(is_pure(f));
  }
}

TEST_CASE("purity is equivalent to trivial one-sided stabilizers") {
  // A function is pure iff no nontrivial (sigma, id) or (id, tau) fixes it.
  for (const StepFunction& f : fixtures::exhaustive_binary_family(3, 3)) {
    bool one_sided_trivial = true;
    const Permutation id3{0, 1, 2};
    for (const auto& [sigma, tau] : symmetry_group(f, false, StabilizerSearch::kBruteForce).generators) {
      if ((sigma == id3) != (tau == id3)) {
        one_sided_trivial = false;
        break;
      }
    }
    CHECK(is_pure(f) == one_sided_trivial);
  }
}
