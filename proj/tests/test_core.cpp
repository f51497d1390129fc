#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "stepfun/core.hpp"

using namespace stepfun;
using fixtures::make_function;

namespace {

const char* kFlipJson = R"({
  "alphabet": ["a", "b"],
  "row_weights": ["1/2", "1/2"],
  "col_weights": ["1/2", "1/2"],
  "values": [["a", "b"], ["b", "a"]]
})";

}  // namespace

TEST_CASE("rational parse and format round-trip") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(format_rational(Rational(1, 2)) == "1/2");
  CHECK(format_rational(Rational(4)) == "4");
  CHECK(format_rational(Rational(-1, 3)) == "-1/3");
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("loading a hand-written flip file") {
  const StepFunction f = loads(kFlipJson);
  CHECK(f.rows() == 2);
  CHECK(f.cols() == 2);
  CHECK(f.row_space.weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(f.values == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  CHECK(f == fixtures::flip());
}

TEST_CASE("load rejects invariant violations by name") {
  CHECK_THROWS_WITH_AS(
      loads(R"({"alphabet":["a"],"row_weights":["1/2","1/4"],"col_weights":["1"],
                "values":[["a"],["a"]]})"),
      doctest::Contains("weights must sum to 1"), InvalidInput);
  CHECK_THROWS_WITH_AS(
      loads(R"({"alphabet":["a"],"row_weights":["1"],"col_weights":["1"],
                "values":[["c"]]})"),
      doctest::Contains("unknown symbol"), InvalidInput);
  CHECK_THROWS_AS(
      loads(R"({"alphabet":["a"],"row_weights":["0","1"],"col_weights":["1"],
                "values":[["a"],["a"]]})"),
      InvalidInput);
  CHECK_THROWS_AS(loads("not a file"), InvalidInput);
}

TEST_CASE("save/load round-trip and byte determinism") {
  const StepFunction f = fixtures::dup();
  const std::string once = saves(f);
  const std::string twice = saves(f);
  CHECK(once == twice);
  CHECK(loads(once) == f);
}

TEST_CASE("apply_permutations relabels indices with their weights") {
  const StepFunction flip = fixtures::flip();
  SUBCASE("row swap") {
    const StepFunction g = apply_permutations(flip, {1, 0}, {0, 1});
    CHECK(g.values == std::vector<std::vector<int>>{{1, 0}, {0, 1}});
  }
  SUBCASE("identity") {
    CHECK(apply_permutations(flip, {0, 1}, {0, 1}) == flip);
  }
  SUBCASE("double swap returns flip") {
    CHECK(apply_permutations(flip, {1, 0}, {1, 0}) == flip);
  }
  SUBCASE("inverse undoes the action") {
    const StepFunction f = random_function(4, 3, 3, 16, 99);
    const Permutation sigma{2, 0, 3, 1}, tau{1, 2, 0};
    const StepFunction g = apply_permutations(f, sigma, tau);
    CHECK(apply_permutations(g, inverse_permutation(sigma), inverse_permutation(tau)) == f);
  }
  SUBCASE("weights travel with indices") {
    const StepFunction f = fixtures::dup();
    const StepFunction g = apply_permutations(f, {2, 0, 1}, {0, 1});
    CHECK(g.row_space.weights[2] == Rational(1, 4));
    CHECK(g.row_space.weights[0] == Rational(1, 4));
    CHECK(g.row_space.weights[1] == Rational(1, 2));
  }
}

TEST_CASE("random_function is deterministic and valid") {
  const StepFunction f = random_function(3, 3, 2, 4, 7);
  CHECK(f == random_function(3, 3, 2, 4, 7));
  CHECK_NOTHROW(f.validate());
  SUBCASE("single-symbol alphabet forces the constant function") {
    const StepFunction c = random_function(2, 2, 1, 4, 5);
    for (const auto& row : c.values) {
      for (int v : row) CHECK(v == 0);
    }
  }
  SUBCASE("weight denominators divide max_denominator") {
    const StepFunction g = random_function(5, 6, 3, 8, 123);
    for (const auto& w : g.row_space.weights) CHECK(8 % denominator(w) == 0);
    for (const auto& w : g.col_space.weights) CHECK(8 % denominator(w) == 0);
  }
}

TEST_CASE("distribution invariants and marginalization") {
  Distribution d;
  d.arity = 2;
  d.support[{0, 1}] = Rational(1, 2);
  d.support[{1, 0}] = Rational(1, 2);
  CHECK_NOTHROW(d.validate());

  const Distribution m = d.marginalize(1);
  CHECK(m.arity == 1);
  CHECK(m.support.at({0}) == Rational(1, 2));
  CHECK(m.support.at({1}) == Rational(1, 2));

  Distribution bad = d;
  bad.support[{0, 0}] = Rational(1, 3);
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("distribution encode is injective on the examples") {
  const Alphabet ab{{"a", "b"}, std::nullopt};
  Distribution d1, d2;
  d1.arity = 1;
  d1.support[{0}] = Rational(1, 2);
  d1.support[{1}] = Rational(1, 2);
  d2.arity = 1;
  d2.support[{1}] = Rational(1);
  CHECK(d1.encode(ab) != d2.encode(ab));
  CHECK(d1.encode(ab) == d1.encode(ab));
}
