#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stepfun/rational.hpp"

namespace stepfun {

/// Error raised for malformed files and violated model invariants. The
/// message names the offending field or invariant.
struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

using Permutation = std::vector<int>;  // perm[i] = image of index i

Permutation identity_permutation(int n);
Permutation inverse_permutation(const Permutation& p);
bool is_permutation(const Permutation& p, int n);

/// Finite value space: an ordered list of distinct symbols. The order is
/// part of the input and fixes all lexicographic tie-breaking downstream.
/// Optional numeric values (exact rationals) support metric applications.
struct Alphabet {
  std::vector<std::string> symbols;
  std::optional<std::vector<Rational>> numeric_values;

  int size() const { return static_cast<int>(symbols.size()); }
  int index_of(const std::string& symbol) const;  // -1 when absent
  void validate() const;

  bool operator==(const Alphabet& other) const = default;
};

/// Finite space with strictly positive rational weights summing to 1.
/// Atoms of weight zero are rejected; this is the finite reading of mod-0.
struct WeightedSpace {
  std::vector<Rational> weights;

  int size() const { return static_cast<int>(weights.size()); }
  void validate() const;

  bool operator==(const WeightedSpace& other) const = default;
};

/// A step function of two variables: a value matrix over a finite alphabet
/// with weighted rows and columns. All operations on it are pure; instances
/// are treated as immutable after construction.
struct StepFunction {
  WeightedSpace row_space;
  WeightedSpace col_space;
  Alphabet alphabet;
  std::vector<std::vector<int>> values;  // values[i][j] indexes alphabet

  int rows() const { return static_cast<int>(values.size()); }
  int cols() const { return values.empty() ? 0 : static_cast<int>(values[0].size()); }
  int at(int i, int j) const { return values[i][j]; }

  void validate() const;

  bool operator==(const StepFunction& other) const = default;
};

/// Exact probability distribution on n-tuples of alphabet symbols.
/// All stored masses are positive and sum to exactly 1.
struct Distribution {
  int arity = 1;
  std::map<std::vector<int>, Rational> support;

  void validate() const;

  /// Drops coordinate `position` (0-based), aggregating masses.
  Distribution marginalize(int position) const;

  /// Deterministic text encoding; equal iff the distributions are equal.
  std::string encode(const Alphabet& alphabet) const;

  bool operator==(const Distribution& other) const = default;
  bool operator<(const Distribution& other) const;
};

StepFunction load(const std::string& path);
StepFunction loads(const std::string& text);  // same schema, from memory
void save(const StepFunction& f, const std::string& path);
std::string saves(const StepFunction& f);  // byte-deterministic

/// g with g.values[sigma[i]][tau[j]] = f.values[i][j]; weights travel with
/// their indices, so the result is always exactly equivalent to f.
StepFunction apply_permutations(const StepFunction& f, const Permutation& sigma,
                                const Permutation& tau);

/// Deterministic test-fixture generator. Weights land on the 1/max_denominator
/// grid (positive integers over a common denominator), so every reduced
/// denominator divides max_denominator. Requires max_denominator >= size.
StepFunction random_function(int rows, int cols, int alphabet_size,
                             int max_denominator, std::uint64_t seed);

std::string encode_tuple(const std::vector<int>& tuple);

}  // namespace stepfun
