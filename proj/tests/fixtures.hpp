#pragma once

#include <string>
#include <vector>

#include "stepfun/core.hpp"

namespace fixtures {

using stepfun::Rational;
using stepfun::StepFunction;

/// Builds a validated step function from symbol strings.
inline StepFunction make_function(const std::vector<std::string>& alphabet,
                                  const std::vector<std::string>& row_weights,
                                  const std::vector<std::string>& col_weights,
                                  const std::vector<std::vector<std::string>>& values) {
  StepFunction f;
  f.alphabet.symbols = alphabet;
  for (const auto& w : row_weights) f.row_space.weights.push_back(stepfun::parse_rational(w));
  for (const auto& w : col_weights) f.col_space.weights.push_back(stepfun::parse_rational(w));
  for (const auto& row : values) {
    std::vector<int> indices;
    for (const auto& s : row) indices.push_back(f.alphabet.index_of(s));
    f.values.push_back(indices);
  }
  f.validate();
  return f;
}

// 2x2 uniform, values [[a,b],[b,a]]: pure, symmetry order 2 (not totally pure)
inline StepFunction flip() {
  return make_function({"a", "b"}, {"1/2", "1/2"}, {"1/2", "1/2"},
                       {{"a", "b"}, {"b", "a"}});
}

// 2x2 uniform, all entries a: maximally impure
inline StepFunction constant() {
  return make_function({"a", "b"}, {"1/2", "1/2"}, {"1/2", "1/2"},
                       {{"a", "a"}, {"a", "a"}});
}

// 2x2 uniform, values [[a,b],[b,b]]: totally pure
inline StepFunction tri() {
  return make_function({"a", "b"}, {"1/2", "1/2"}, {"1/2", "1/2"},
                       {{"a", "b"}, {"b", "b"}});
}

// 3x2, rows 1,2 identical, row weights (1/4,1/4,1/2): purifies to flip
inline StepFunction dup() {
  return make_function({"a", "b"}, {"1/4", "1/4", "1/2"}, {"1/2", "1/2"},
                       {{"a", "b"}, {"a", "b"}, {"b", "a"}});
}

// 2x2 uniform, identical rows [[a,b],[a,b]]: skew-equivalent to flip on rows
inline StepFunction rowsame() {
  return make_function({"a", "b"}, {"1/2", "1/2"}, {"1/2", "1/2"},
                       {{"a", "b"}, {"a", "b"}});
}

/// All value matrices on a rows x cols grid over a binary alphabet with
/// uniform weights (the exhaustive desk-scale family).
inline std::vector<StepFunction> exhaustive_binary_family(int rows, int cols) {
  std::vector<StepFunction> family;
  const int cells = rows * cols;
  for (int mask = 0; mask < (1 << cells); ++mask) {
    StepFunction f;
    f.alphabet.symbols = {"a", "b"};
    f.row_space.weights.assign(rows, Rational(1, rows));
    f.col_space.weights.assign(cols, Rational(1, cols));
    for (int i = 0; i < rows; ++i) {
      std::vector<int> row;
      for (int j = 0; j < cols; ++j) row.push_back((mask >> (i * cols + j)) & 1);
      f.values.push_back(row);
    }
    f.validate();
    family.push_back(std::move(f));
  }
  return family;
}

}  // namespace fixtures
